#pragma once

#include <span>

#include "logtr/tensor.hpp"

namespace logtr {

/// Parameters of the smoothed logdet penalty lambda * log(t + epsilon).
struct ShrinkParams {
  double lambda = 0.0;
  double epsilon = 1.0;

  void validate() const;
};

/// Closed-form thresholding for min_t lambda*log(|t| + eps) + (t - x)^2 / 2.
///
/// Returns 0 when c2 = (|x| - eps)^2 - 4(lambda - eps|x|) <= 0, otherwise
/// sign(x) * (c1 + sqrt(c2)) / 2 with c1 = |x| - eps, i.e. the larger
/// stationary point. A negative root is clamped to 0. This is the branch rule,
/// not a global comparison against t = 0.
double logdet_scalar_shrink(double x, const ShrinkParams& p);

/// U * S(Sigma) * V^T with logdet_scalar_shrink applied to every singular value.
Matrix logdet_matrix_prox(const Matrix& y, const ShrinkParams& p);

/// Singular value soft thresholding: U * max(Sigma - tau, 0) * V^T.
Matrix nuclear_prox(const Matrix& y, double tau);

/// sum_i log(sigma_i(m) + epsilon) over all min(rows, cols) singular values.
double logdet_surrogate(const Matrix& m, double epsilon);
double nuclear_norm(const Matrix& m);

/// sum_n beta_n * logdet_surrogate(X_{n, ceil(j/2)}) over the balanced unfoldings.
double logtr_value(const DenseTensor& t, std::span<const double> weights, double epsilon);
/// sum_n beta_n * ||X_{n, ceil(j/2)}||_* over the same unfoldings.
double trnn_value(const DenseTensor& t, std::span<const double> weights);

}  // namespace logtr
