#pragma once

// Visual data tensorization: an m x n x p_1 x ... x p_s array whose first two
// modes are spatial is rearranged so that mode d of the result indexes an
// m_d x n_d patch scale. Factor 1 is the finest scale (fastest-varying digit).

#include <optional>
#include <string_view>
#include <vector>

#include "logtr/tensor.hpp"

namespace logtr {

struct VdtPlan {
  std::vector<Index> row_factors;
  std::vector<Index> col_factors;
  std::vector<Index> trailing_dims;
  /// Applied to the source before tensorization (0-based mode order).
  std::optional<std::vector<Index>> pre_permutation;

  /// Fills trailing_dims from the (pre-permuted) source dims.
  static VdtPlan for_source(const Dims& source_dims, std::vector<Index> rows,
                            std::vector<Index> cols,
                            std::optional<std::vector<Index>> pre_permutation = std::nullopt);

  /// Source dims after the optional pre-permutation.
  Dims arranged_source_dims() const;
  /// (m_1 n_1, ..., m_q n_q, p_1, ..., p_s).
  Dims output_dims() const;
  void validate() const;
};

DenseTensor vdt_forward(const DenseTensor& t, const VdtPlan& plan);
DenseTensor vdt_inverse(const DenseTensor& t, const VdtPlan& plan);

/// Parses "4x4x4x4" into {4, 4, 4, 4}.
std::vector<Index> parse_factors(std::string_view text);

}  // namespace logtr
