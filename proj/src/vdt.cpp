#include "logtr/vdt.hpp"

#include <charconv>
#include <string>

#include "logtr/error.hpp"

namespace logtr {

namespace {

Index product(const std::vector<Index>& v) { return num_elements(v); }

// (m_1..m_q, n_1..n_q, p..) -> (m_1, n_1, ..., m_q, n_q, p..)
std::vector<Index> interleave_order(Index q, Index trailing) {
  std::vector<Index> order;
  for (Index d = 0; d < q; ++d) {
    order.push_back(d);
    order.push_back(q + d);
  }
  for (Index s = 0; s < trailing; ++s) order.push_back(2 * q + s);
  return order;
}

Dims split_dims(const VdtPlan& plan) {
  Dims d = plan.row_factors;
  d.insert(d.end(), plan.col_factors.begin(), plan.col_factors.end());
  d.insert(d.end(), plan.trailing_dims.begin(), plan.trailing_dims.end());
  return d;
}

Dims interleaved_dims(const VdtPlan& plan) {
  Dims d;
  for (Index k = 0; k < plan.row_factors.size(); ++k) {
    d.push_back(plan.row_factors[k]);
    d.push_back(plan.col_factors[k]);
  }
  d.insert(d.end(), plan.trailing_dims.begin(), plan.trailing_dims.end());
  return d;
}

}  // namespace

VdtPlan VdtPlan::for_source(const Dims& source_dims, std::vector<Index> rows,
                            std::vector<Index> cols,
                            std::optional<std::vector<Index>> pre_permutation) {
  if (source_dims.size() < 2) throw ArgumentError("VDT needs at least two spatial modes");
  Dims arranged = source_dims;
  if (pre_permutation) {
    if (pre_permutation->size() != source_dims.size()) {
      throw ArgumentError("VDT pre-permutation length does not match source order");
    }
    for (Index k = 0; k < arranged.size(); ++k) {
      if ((*pre_permutation)[k] >= source_dims.size()) {
        throw ArgumentError("VDT pre-permutation entry out of range");
      }
      arranged[k] = source_dims[(*pre_permutation)[k]];
    }
  }
  VdtPlan plan{std::move(rows), std::move(cols), Dims(arranged.begin() + 2, arranged.end()),
               std::move(pre_permutation)};
  plan.validate();
  if (product(plan.row_factors) != arranged[0] || product(plan.col_factors) != arranged[1]) {
    throw ShapeError("VDT factors " + format_dims(plan.row_factors) + " / " +
                     format_dims(plan.col_factors) + " do not factor spatial size " +
                     std::to_string(arranged[0]) + "x" + std::to_string(arranged[1]));
  }
  return plan;
}

Dims VdtPlan::arranged_source_dims() const {
  Dims d{product(row_factors), product(col_factors)};
  d.insert(d.end(), trailing_dims.begin(), trailing_dims.end());
  return d;
}

Dims VdtPlan::output_dims() const {
  Dims d;
  for (Index k = 0; k < row_factors.size(); ++k) d.push_back(row_factors[k] * col_factors[k]);
  d.insert(d.end(), trailing_dims.begin(), trailing_dims.end());
  return d;
}

void VdtPlan::validate() const {
  if (row_factors.empty()) throw ArgumentError("VDT plan needs at least one scale");
  if (row_factors.size() != col_factors.size()) {
    throw ArgumentError("VDT row and column factor lists must have equal length");
  }
  for (Index f : row_factors) {
    if (f == 0) throw ArgumentError("VDT factors must be positive");
  }
  for (Index f : col_factors) {
    if (f == 0) throw ArgumentError("VDT factors must be positive");
  }
  for (Index p : trailing_dims) {
    if (p == 0) throw ArgumentError("VDT trailing dims must be positive");
  }
  if (pre_permutation) {
    const Index j = 2 + trailing_dims.size();
    if (pre_permutation->size() != j) {
      throw ArgumentError("VDT pre-permutation length does not match source order");
    }
    std::vector<bool> seen(j, false);
    for (Index k : *pre_permutation) {
      if (k >= j || seen[k]) throw ArgumentError("VDT pre-permutation is not a permutation");
      seen[k] = true;
    }
  }
}

DenseTensor vdt_forward(const DenseTensor& t, const VdtPlan& plan) {
  plan.validate();
  const DenseTensor arranged = plan.pre_permutation ? permute(t, *plan.pre_permutation) : t;
  if (arranged.dims() != plan.arranged_source_dims()) {
    throw ShapeError("VDT source " + format_dims(arranged.dims()) + " does not match plan " +
                     format_dims(plan.arranged_source_dims()));
  }
  const Index q = plan.row_factors.size();
  const auto order = interleave_order(q, plan.trailing_dims.size());
  const DenseTensor split = reshape(arranged, split_dims(plan));
  return reshape(permute(split, order), plan.output_dims());
}

DenseTensor vdt_inverse(const DenseTensor& t, const VdtPlan& plan) {
  plan.validate();
  if (t.dims() != plan.output_dims()) {
    throw ShapeError("VDT tensor " + format_dims(t.dims()) + " does not match plan output " +
                     format_dims(plan.output_dims()));
  }
  const Index q = plan.row_factors.size();
  const auto order = interleave_order(q, plan.trailing_dims.size());
  const DenseTensor interleaved = reshape(t, interleaved_dims(plan));
  const DenseTensor arranged =
      reshape(permute(interleaved, inverse_permutation(order)), plan.arranged_source_dims());
  if (!plan.pre_permutation) return arranged;
  return permute(arranged, inverse_permutation(*plan.pre_permutation));
}

std::vector<Index> parse_factors(std::string_view text) {
  std::vector<Index> out;
  while (!text.empty()) {
    const auto sep = text.find_first_of("xX*,");
    const auto token = text.substr(0, sep);
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
      throw ArgumentError("bad factor list '" + std::string(text) + "'");
    }
    out.push_back(value);
    if (sep == std::string_view::npos) break;
    text.remove_prefix(sep + 1);
    if (text.empty()) throw ArgumentError("factor list ends with a separator");
  }
  if (out.empty()) throw ArgumentError("empty factor list");
  return out;
}

}  // namespace logtr
