#include "logtr/tensor_ring.hpp"

#include <random>
#include <string>

#include "logtr/error.hpp"

namespace logtr {

void TRFactorSet::validate() const {
  if (cores.empty()) throw ArgumentError("TR factor set needs at least one core");
  const Index j = cores.size();
  for (Index h = 0; h < j; ++h) {
    if (cores[h].order() != 3) {
      throw ArgumentError("TR core " + std::to_string(h) + " is not third order");
    }
    const Index next = (h + 1) % j;
    if (cores[h].dim(2) != cores[next].dim(0)) {
      throw ArgumentError("TR rank mismatch between core " + std::to_string(h) + " (" +
                          std::to_string(cores[h].dim(2)) + ") and core " + std::to_string(next) +
                          " (" + std::to_string(cores[next].dim(0)) + ")");
    }
  }
}

std::vector<Index> TRFactorSet::ranks() const {
  std::vector<Index> r;
  for (const auto& c : cores) r.push_back(c.dim(2));
  return r;
}

Dims TRFactorSet::dims() const {
  Dims d;
  for (const auto& c : cores) d.push_back(c.dim(1));
  return d;
}

TRFactorSet random_tr_factors(const Dims& dims, const std::vector<Index>& ranks,
                              std::uint64_t seed) {
  if (dims.empty() || dims.size() != ranks.size()) {
    throw ArgumentError("random_tr_factors: need one rank per mode");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index j = dims.size();
  TRFactorSet f;
  for (Index h = 0; h < j; ++h) {
    DenseTensor core({ranks[(h + j - 1) % j], dims[h], ranks[h]});
    for (double& v : core.data()) v = normal(rng);
    f.cores.push_back(std::move(core));
  }
  f.validate();
  return f;
}

DenseTensor tr_synthesize(const TRFactorSet& factors) {
  factors.validate();
  const Index j = factors.cores.size();
  DenseTensor out(factors.dims());

  // Lateral slices as matrices, indexed [core][i].
  std::vector<std::vector<Matrix>> slices(j);
  for (Index h = 0; h < j; ++h) {
    const auto& c = factors.cores[h];
    for (Index i = 0; i < c.dim(1); ++i) {
      Matrix s(c.dim(0), c.dim(2));
      for (Index a = 0; a < c.dim(0); ++a) {
        for (Index b = 0; b < c.dim(2); ++b) s(a, b) = c.at({a, i, b});
      }
      slices[h].push_back(std::move(s));
    }
  }

  std::vector<Index> idx(j, 0);
  for (Index flat = 0; flat < out.size(); ++flat) {
    Matrix prod = slices[0][idx[0]];
    for (Index h = 1; h < j; ++h) prod = prod * slices[h][idx[h]];
    out[flat] = prod.trace();
    for (Index k = 0; k < j; ++k) {
      if (++idx[k] < out.dim(k)) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace logtr

namespace logtr {

Index balanced_unfolding_count(Index order) { return (order + 1) / 2; }

UnfoldSpec balanced_unfolding(const Dims& dims, Index n) {
  const Index count = balanced_unfolding_count(dims.size());
  if (n < 1 || n > count) {
    throw ArgumentError("balanced unfolding index " + std::to_string(n) + " must lie in [1, " +
                        std::to_string(count) + "]");
  }
  return UnfoldSpec::circular(dims, n, count - 1);
}

}  // namespace logtr
