#pragma once

#include <cstdint>
#include <vector>

#include "logtr/tensor.hpp"

namespace logtr {

/// Cyclic chain of third-order cores; core h has dims (r_{h-1}, m_h, r_h)
/// with r_{-1} = r_{j-1}.
struct TRFactorSet {
  std::vector<DenseTensor> cores;

  /// Throws ArgumentError unless every core is third order and adjacent
  /// bond dimensions agree (cyclically).
  void validate() const;
  /// (r_1, ..., r_j): the trailing bond dimension of each core.
  std::vector<Index> ranks() const;
  Dims dims() const;
};

/// Cores with i.i.d. standard normal entries. ranks[h] is the bond between
/// core h and core h+1 (mod j).
TRFactorSet random_tr_factors(const Dims& dims, const std::vector<Index>& ranks,
                              std::uint64_t seed);

/// Element (i_1..i_j) = trace(G_1(:, i_1, :) * ... * G_j(:, i_j, :)).
DenseTensor tr_synthesize(const TRFactorSet& factors);

}  // namespace logtr

namespace logtr {

/// Number of balanced circular unfoldings the completion model uses: ceil(j/2).
Index balanced_unfolding_count(Index order);

/// Mode-{n, ceil(j/2)} unfolding spec for n in [1, ceil(j/2)].
UnfoldSpec balanced_unfolding(const Dims& dims, Index n);

}  // namespace logtr
