#pragma once

// ADMM for weighted-logdet tensor ring completion:
//
//   min_X  sum_n beta_n * sum_i log(sigma_i(X_{n}) + eps)   s.t. P_Omega(X) = P_Omega(T)
//
// where X_{n} is the mode-{n, ceil(j/2)} unfolding. Each iteration runs
//   G_n <- fold(prox_{beta_n/eta}(unfold(X - H_n/eta)))
//   X   <- mean_n(G_n + H_n/eta) off Omega, T on Omega
//   H_n <- H_n + eta (G_n - X)
//   eta <- min(eta0 * growth^(k+1), eta_max)
// With Penalty::nuclear the prox is singular value soft thresholding (TRNN).

#include <functional>
#include <vector>

#include "logtr/masks.hpp"
#include "logtr/tensor.hpp"

namespace logtr {

enum class Penalty { logdet, nuclear };

struct SolverOptions {
  Penalty penalty = Penalty::logdet;
  double epsilon = 1.0;
  double eta0 = 1e-6;
  double eta_growth = 1.1;
  /// eta stops growing here; beyond it the prox is numerically the identity.
  double eta_max = 1e6;
  int max_iters = 500;
  /// ||X^{k+1} - X^k||_F / ||X^k||_F threshold.
  double rel_tol = 1e-4;
  /// The relative-change test only fires once max_n ||G_n - X||_F / ||X||_F
  /// is at or below this value.
  double residual_tol = 1e-3;

  void validate() const;
};

struct CompletionProblem {
  /// Entries outside Omega are ignored.
  DenseTensor observed;
  Mask mask;
  /// beta_1..beta_L, L = ceil(j/2); nonnegative, summing to 1.
  std::vector<double> weights;
  SolverOptions options;

  /// Uses default_weights when weights is empty.
  static CompletionProblem make(DenseTensor observed, Mask mask, SolverOptions options = {},
                                std::vector<double> weights = {});
  void validate() const;
};

/// beta_n proportional to min(rows, cols) of the n-th balanced unfolding.
std::vector<double> default_weights(const Dims& dims, Index count);

/// Penalty used in iteration k (0-based).
double eta_at(const SolverOptions& options, int k);

struct IterationRecord {
  int iter = 0;
  double rel_change = 0.0;
  double primal_residual = 0.0;
  double eta = 0.0;
  double elapsed_ms = 0.0;
};

struct SolverState {
  DenseTensor x;
  std::vector<DenseTensor> g;
  std::vector<DenseTensor> h;
  double eta = 0.0;
  int iter = 0;
  std::vector<IterationRecord> history;

  /// X = P_Omega(T), G_n = X, H_n = 0, eta = eta0.
  static SolverState initial(const CompletionProblem& problem);
};

/// New G_1..G_L from (X, H, eta).
std::vector<DenseTensor> g_update(const SolverState& state, const CompletionProblem& problem);
/// New X from (G, H, eta); observed entries are copied from the problem.
DenseTensor x_update(const SolverState& state, const CompletionProblem& problem);
/// H_n + eta (G_n - X) for every n.
std::vector<DenseTensor> multiplier_update(const SolverState& state);

/// max_n ||G_n - X||_F / ||X||_F (absolute when X = 0).
double primal_residual(const SolverState& state);

struct SolveResult {
  DenseTensor recovered;
  std::vector<IterationRecord> trace;
  int iterations = 0;
  bool converged = false;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Throws DivergedError when an iterate becomes non-finite.
SolveResult solve(const CompletionProblem& problem, const IterationCallback& on_iteration = {});

}  // namespace logtr
