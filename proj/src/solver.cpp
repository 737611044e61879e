#include "logtr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "logtr/error.hpp"
#include "logtr/shrinkage.hpp"
#include "logtr/tensor_ring.hpp"

namespace logtr {

void SolverOptions::validate() const {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ArgumentError("eta0 must be positive");
  if (!(eta_growth >= 1.0)) throw ArgumentError("eta growth must be at least 1");
  if (!(eta_max >= eta0)) throw ArgumentError("eta_max must be at least eta0");
  if (max_iters < 1) throw ArgumentError("max_iters must be positive");
  if (!(rel_tol >= 0.0)) throw ArgumentError("rel_tol must be nonnegative");
  if (!(residual_tol >= 0.0)) throw ArgumentError("residual_tol must be nonnegative");
}

CompletionProblem CompletionProblem::make(DenseTensor observed, Mask mask, SolverOptions options,
                                          std::vector<double> weights) {
  if (weights.empty()) {
    weights = default_weights(observed.dims(), balanced_unfolding_count(observed.order()));
  }
  CompletionProblem p{std::move(observed), std::move(mask), std::move(weights), options};
  p.validate();
  return p;
}

void CompletionProblem::validate() const {
  options.validate();
  if (mask.dims() != observed.dims()) {
    throw ShapeError("mask " + format_dims(mask.dims()) + " does not match observed tensor " +
                     format_dims(observed.dims()));
  }
  const Index count = balanced_unfolding_count(observed.order());
  if (weights.size() != count) {
    throw ArgumentError("expected " + std::to_string(count) + " weights, got " +
                        std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ArgumentError("weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("weights must sum to 1");
}

std::vector<double> default_weights(const Dims& dims, Index count) {
  if (count != balanced_unfolding_count(dims.size())) {
    throw ArgumentError("weight count must be ceil(order / 2)");
  }
  std::vector<double> delta;
  for (Index n = 1; n <= count; ++n) {
    const auto spec = balanced_unfolding(dims, n);
    delta.push_back(static_cast<double>(std::min(spec.rows(), spec.cols())));
  }
  const double total = std::accumulate(delta.begin(), delta.end(), 0.0);
  for (double& d : delta) d /= total;
  return delta;
}

double eta_at(const SolverOptions& options, int k) {
  return std::min(options.eta0 * std::pow(options.eta_growth, k), options.eta_max);
}

SolverState SolverState::initial(const CompletionProblem& problem) {
  problem.validate();
  DenseTensor x = apply_mask(problem.observed, problem.mask);
  const Index count = problem.weights.size();
  SolverState s{x, std::vector<DenseTensor>(count, x),
                std::vector<DenseTensor>(count, DenseTensor(x.dims())), problem.options.eta0, 0, {}};
  return s;
}

std::vector<DenseTensor> g_update(const SolverState& state, const CompletionProblem& problem) {
  const auto& opt = problem.options;
  std::vector<DenseTensor> g;
  g.reserve(problem.weights.size());
  for (Index n = 1; n <= problem.weights.size(); ++n) {
    DenseTensor input = state.x - state.h[n - 1] * (1.0 / state.eta);
    const double lambda = problem.weights[n - 1] / state.eta;
    if (lambda == 0.0) {
      g.push_back(std::move(input));
      continue;
    }
    const auto spec = balanced_unfolding(input.dims(), n);
    const Matrix y = unfold(input, spec);
    const Matrix shrunk = opt.penalty == Penalty::logdet
                              ? logdet_matrix_prox(y, ShrinkParams{lambda, opt.epsilon})
                              : nuclear_prox(y, lambda);
    g.push_back(fold(shrunk, spec));
  }
  return g;
}

DenseTensor x_update(const SolverState& state, const CompletionProblem& problem) {
  const Index count = state.g.size();
  const double inv_eta = 1.0 / state.eta;
  const double inv_count = 1.0 / static_cast<double>(count);
  DenseTensor x(state.x.dims());
  for (Index k = 0; k < x.size(); ++k) {
    if (problem.mask[k]) {
      x[k] = problem.observed[k];
      continue;
    }
    double acc = 0.0;
    for (Index n = 0; n < count; ++n) acc += state.g[n][k] + state.h[n][k] * inv_eta;
    x[k] = acc * inv_count;
  }
  return x;
}

std::vector<DenseTensor> multiplier_update(const SolverState& state) {
  std::vector<DenseTensor> h;
  h.reserve(state.h.size());
  for (Index n = 0; n < state.h.size(); ++n) {
    DenseTensor next = state.h[n];
    const auto& g = state.g[n];
    for (Index k = 0; k < next.size(); ++k) next[k] += state.eta * (g[k] - state.x[k]);
    h.push_back(std::move(next));
  }
  return h;
}

double primal_residual(const SolverState& state) {
  const double norm = state.x.frobenius_norm();
  double worst = 0.0;
  for (const auto& g : state.g) worst = std::max(worst, distance(g, state.x));
  return norm > 0.0 ? worst / norm : worst;
}

SolveResult solve(const CompletionProblem& problem, const IterationCallback& on_iteration) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto& opt = problem.options;

  SolverState state = SolverState::initial(problem);
  // No free entries: X is pinned to the observations.
  const bool pinned = problem.mask.full();

  SolveResult result{state.x, {}, 0, false};
  for (int k = 0; k < opt.max_iters; ++k) {
    state.eta = eta_at(opt, k);
    state.iter = k;

    try {
      state.g = g_update(state, problem);
    } catch (const NumericError& e) {
      throw DivergedError(std::string("G-update failed at iteration ") + std::to_string(k + 1) +
                              ": " + e.what(),
                          k + 1);
    }
    DenseTensor x_next = x_update(state, problem);
    if (!x_next.all_finite()) {
      throw DivergedError("non-finite X at iteration " + std::to_string(k + 1), k + 1);
    }

    const double prev_norm = state.x.frobenius_norm();
    const double change = distance(x_next, state.x);
    const double rel_change = prev_norm > 0.0 ? change / prev_norm : change;

    state.x = std::move(x_next);
    state.h = multiplier_update(state);

    IterationRecord rec;
    rec.iter = k + 1;
    rec.rel_change = rel_change;
    rec.primal_residual = primal_residual(state);
    rec.eta = state.eta;
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    state.history.push_back(rec);
    if (on_iteration) on_iteration(rec);

    if (rel_change <= opt.rel_tol && (pinned || rec.primal_residual <= opt.residual_tol)) {
      result.converged = true;
      break;
    }
  }

  result.recovered = std::move(state.x);
  result.trace = std::move(state.history);
  result.iterations = static_cast<int>(result.trace.size());
  return result;
}

}  // namespace logtr
