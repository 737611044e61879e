#include "logtr/shrinkage.hpp"

#include <cmath>
#include <string>

#include "logtr/error.hpp"
#include "logtr/tensor_ring.hpp"

namespace logtr {

namespace {

template <class Shrink>
Matrix shrink_singular_values(const Matrix& y, Shrink shrink) {
  if (!y.allFinite()) throw NumericError("singular value shrinkage: non-finite matrix entries");
  if (y.size() == 0) return y;
  Eigen::BDCSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericError("SVD failed to converge");

  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::VectorXd shrunk(sigma.size());
  Eigen::Index keep = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    shrunk[k] = shrink(sigma[k]);
    if (shrunk[k] != 0.0) keep = k + 1;
  }
  if (keep == 0) return Matrix::Zero(y.rows(), y.cols());
  return svd.matrixU().leftCols(keep) * shrunk.head(keep).asDiagonal() *
         svd.matrixV().leftCols(keep).transpose();
}

void check_weights(const DenseTensor& t, std::span<const double> weights) {
  const Index count = balanced_unfolding_count(t.order());
  if (weights.size() != count) {
    throw ArgumentError("expected " + std::to_string(count) + " weights for an order-" +
                        std::to_string(t.order()) + " tensor, got " +
                        std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw ArgumentError("weights must be nonnegative");
  }
}

}  // namespace

void ShrinkParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("shrinkage lambda must be finite and nonnegative");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ArgumentError("shrinkage epsilon must be finite and positive");
  }
}

double logdet_scalar_shrink(double x, const ShrinkParams& p) {
  const double a = std::abs(x);
  const double c1 = a - p.epsilon;
  // c1^2 - 4(lambda - eps*a) == (a + eps)^2 - 4*lambda; the latter avoids cancellation.
  const double c2 = (a + p.epsilon) * (a + p.epsilon) - 4.0 * p.lambda;
  if (!(c2 > 0.0)) return 0.0;
  const double root = 0.5 * (c1 + std::sqrt(c2));
  if (root <= 0.0) return 0.0;
  return std::copysign(root, x);
}

Matrix logdet_matrix_prox(const Matrix& y, const ShrinkParams& p) {
  p.validate();
  return shrink_singular_values(y, [&p](double s) { return logdet_scalar_shrink(s, p); });
}

Matrix nuclear_prox(const Matrix& y, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ArgumentError("nuclear_prox: tau must be finite and nonnegative");
  }
  return shrink_singular_values(y, [tau](double s) { return s > tau ? s - tau : 0.0; });
}

double logdet_surrogate(const Matrix& m, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("logdet_surrogate: epsilon must be positive");
  double v = 0.0;
  for (double s : singular_values(m)) v += std::log(s + epsilon);
  return v;
}

double nuclear_norm(const Matrix& m) { return singular_values(m).sum(); }

double logtr_value(const DenseTensor& t, std::span<const double> weights, double epsilon) {
  check_weights(t, weights);
  double v = 0.0;
  for (Index n = 1; n <= weights.size(); ++n) {
    v += weights[n - 1] * logdet_surrogate(unfold(t, balanced_unfolding(t.dims(), n)), epsilon);
  }
  return v;
}

double trnn_value(const DenseTensor& t, std::span<const double> weights) {
  check_weights(t, weights);
  double v = 0.0;
  for (Index n = 1; n <= weights.size(); ++n) {
    v += weights[n - 1] * nuclear_norm(unfold(t, balanced_unfolding(t.dims(), n)));
  }
  return v;
}

}  // namespace logtr
