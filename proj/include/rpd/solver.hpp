// solver.hpp: the generic stochastic primal-dual iteration over any manifold
// policy, plus step schedules and opt-in run monitors.
//
// One saddle convention is used everywhere: the primal step moves to improve
// the objective in the problem's sense while decreasing <lambda, h>, and the
// dual step always moves along h(x_t) - alpha*lambda followed by projection
// onto the nonnegative orthant.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpd/errors.hpp"
#include "rpd/rng.hpp"

namespace rpd {

enum class Sense { minimize, maximize };

/// Positive, non-increasing step sizes eta_t, t = 0, 1, 2, ...
class StepSchedule {
 public:
  /// eta_t = eta for all t.
  static StepSchedule constant(double eta) {
    check_positive(eta);
    StepSchedule s;
    s.kind_ = Kind::kConstant;
    s.tail_ = eta;
    return s;
  }

  /// eta_t = 1/sqrt(t+1).
  static StepSchedule inverse_sqrt() {
    StepSchedule s;
    s.kind_ = Kind::kInverseSqrt;
    return s;
  }

  /// Piecewise-constant: eta_t = segments[k].second for the first segment
  /// with t < segments[k].first, and `tail` beyond the last boundary.
  static StepSchedule piecewise(
      std::vector<std::pair<long long, double>> segments, double tail) {
    check_positive(tail);
    long long prev_boundary = 0;
    double prev_eta = std::numeric_limits<double>::infinity();
    for (const auto& [boundary, eta] : segments) {
      check_positive(eta);
      if (boundary <= prev_boundary) {
        throw DomainError("StepSchedule: boundaries must increase");
      }
      if (eta > prev_eta) {
        throw DomainError("StepSchedule: steps must be non-increasing");
      }
      prev_boundary = boundary;
      prev_eta = eta;
    }
    if (tail > prev_eta) {
      throw DomainError("StepSchedule: steps must be non-increasing");
    }
    StepSchedule s;
    s.kind_ = Kind::kPiecewise;
    s.segments_ = std::move(segments);
    s.tail_ = tail;
    return s;
  }

  double at(long long t) const {
    switch (kind_) {
      case Kind::kConstant:
        return tail_;
      case Kind::kInverseSqrt:
        return 1.0 / std::sqrt(static_cast<double>(t + 1));
      case Kind::kPiecewise:
        for (const auto& [boundary, eta] : segments_) {
          if (t < boundary) return eta;
        }
        return tail_;
    }
    return tail_;  // unreachable
  }

 private:
  enum class Kind { kConstant, kInverseSqrt, kPiecewise };

  static void check_positive(double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
      throw DomainError("StepSchedule: step sizes must be positive and finite");
    }
  }

  Kind kind_ = Kind::kInverseSqrt;
  double tail_ = 0.0;
  std::vector<std::pair<long long, double>> segments_;
};

/// One iteration's worth of trace data, captured at the pre-update state x_t.
struct StepRecord {
  long long t = 0;
  double eta = 0.0;
  double objective = 0.0;               ///< F(x_t; xi_t), the sampled value
  Eigen::VectorXd constraint_values;    ///< h(x_t); empty if not recorded
  double max_violation = 0.0;           ///< max(0, max_k h_k(x_t))
  double lambda_norm = 0.0;             ///< ||lambda_t||_2
  double grad_norm = 0.0;               ///< Riemannian norm of the projected
                                        ///< Lagrangian gradient at x_t
  double dist_to_ref = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::vector<StepRecord> steps;
  /// Iterations at which the opt-in dual-norm cap ||lambda|| <= sqrt(m)*G/alpha
  /// was violated (monitors record, they do not abort).
  long long dual_cap_violations = 0;
};

/// Constrained stochastic problem on manifold policy M.
///
/// `sample_objective(x, t, rng)` returns the sampled objective value
/// F(x; xi_t) and its ambient gradient at a fresh sample xi_t (streamed data
/// may key off t instead of drawing from rng).  `constraint_values` returns
/// h(x) in R^m, and `constraint_gradient(x, w)` returns the ambient
/// combination sum_k w_k * grad h_k(x) — vectorized so problems with large m
/// (e.g. one constraint per coordinate) stay cheap.
template <class M>
struct ConstrainedProblem {
  M manifold;
  Sense sense = Sense::minimize;
  double alpha = 0.0;  ///< dual regularizer, >= 0
  int num_constraints = 0;
  std::function<std::pair<double, typename M::Ambient>(
      const typename M::Point&, long long, Rng&)>
      sample_objective;
  std::function<Eigen::VectorXd(const typename M::Point&)> constraint_values;
  std::function<typename M::Ambient(const typename M::Point&,
                                    const Eigen::VectorXd&)>
      constraint_gradient;
};

template <class M>
struct SolverState {
  typename M::Point x;
  Eigen::VectorXd lambda;  ///< componentwise >= 0
  long long t = 0;
  StepSchedule schedule = StepSchedule::inverse_sqrt();
};

/// Opt-in per-iteration checks; violations are counted, not fatal.
struct Monitors {
  bool dual_cap_check = false;
  double constraint_bound = 0.0;  ///< G with |h_k| <= G, for the cap
  bool record_constraint_values = true;
};

/// Optional run instrumentation.
template <class M>
struct RunHooks {
  /// When set, each record carries the geodesic distance from x_t to this
  /// point (e.g. a known optimum).
  std::optional<typename M::Point> reference;
  /// Called after each dual update with the new state and the record of the
  /// step that produced it.
  std::function<void(const SolverState<M>&, const StepRecord&)> observer;
};

/// Thrown when a run aborts on non-finite values; carries the trace up to the
/// failing iteration.
class RunAbortedError : public NumericError {
 public:
  RunAbortedError(const NumericError& cause, RunTrace trace)
      : NumericError(cause.what(), cause.step), partial_trace(std::move(trace)) {}
  RunTrace partial_trace;
};

/// One primal-dual step from state.t to state.t + 1.
///
/// Primal: the ambient Lagrangian gradient (sense-signed objective part plus
/// -sum_k lambda_k grad h_k) is projected to the tangent space; the step
/// eta_t * X_t is clipped so its Riemannian length never exceeds the
/// injectivity radius; the point moves along exp_map and is renormalized.
/// Dual: lambda' = max(0, lambda + eta_t*(h(x_t) - alpha*lambda)), using the
/// pre-update x_t.
template <class M>
SolverState<M> pd_step(const ConstrainedProblem<M>& problem,
                       const SolverState<M>& state, Rng& rng,
                       StepRecord* record = nullptr,
                       bool record_constraint_values = true) {
  const M& man = problem.manifold;
  const double eta = state.schedule.at(state.t);
  auto [objective, grad] = problem.sample_objective(state.x, state.t, rng);

  Eigen::VectorXd h;
  if (problem.num_constraints > 0) {
    h = problem.constraint_values(state.x);
    if (h.size() != problem.num_constraints) {
      throw DomainError("pd_step: constraint_values returned wrong dimension");
    }
  }

  const double sense_sign = problem.sense == Sense::maximize ? 1.0 : -1.0;
  typename M::Ambient direction = M::scaled(grad, sense_sign);
  if (problem.num_constraints > 0) {
    direction = M::axpby(1.0, direction, -1.0,
                         problem.constraint_gradient(state.x, state.lambda));
  }

  typename M::Tangent X = man.project_tangent(state.x, direction);
  const double grad_norm = man.riem_norm(state.x, X);
  if (!std::isfinite(objective) || !std::isfinite(grad_norm) ||
      (h.size() > 0 && !h.allFinite())) {
    throw NumericError("pd_step: non-finite objective, gradient, or constraint",
                       state.t);
  }

  // Step-length clipping: ||eta_t * X_t|| <= injectivity radius.
  double scale = eta;
  const double inj = man.injectivity_radius();
  if (eta * grad_norm > inj) scale = inj / grad_norm;

  SolverState<M> next = state;
  next.x = man.exp_map(state.x, M::scaled(X, scale));
  man.renormalize(next.x);
  if (!M::all_finite(next.x)) {
    throw NumericError("pd_step: non-finite iterate", state.t);
  }
  if (problem.num_constraints > 0) {
    next.lambda =
        (state.lambda + eta * (h - problem.alpha * state.lambda)).cwiseMax(0.0);
  }
  next.t = state.t + 1;

  if (record != nullptr) {
    record->t = state.t;
    record->eta = eta;
    record->objective = objective;
    if (record_constraint_values) record->constraint_values = h;
    record->max_violation = h.size() > 0 ? std::max(0.0, h.maxCoeff()) : 0.0;
    record->lambda_norm = state.lambda.norm();
    record->grad_norm = grad_norm;
  }
  return next;
}

template <class M>
struct RunResult {
  SolverState<M> state;  ///< state after T steps
  RunTrace trace;
};

/// T iterations of pd_step from x0 with lambda_0 = 0.  Deterministic given
/// the rng seed.  Monitors are applied every iteration; non-finite values
/// abort with RunAbortedError carrying the partial trace.
template <class M>
RunResult<M> run(const ConstrainedProblem<M>& problem, typename M::Point x0,
                 const StepSchedule& schedule, long long T, Rng& rng,
                 const Monitors& monitors = {}, RunHooks<M> hooks = {}) {
  RunResult<M> out;
  out.state.x = std::move(x0);
  out.state.lambda = Eigen::VectorXd::Zero(problem.num_constraints);
  out.state.t = 0;
  out.state.schedule = schedule;
  out.trace.steps.reserve(static_cast<std::size_t>(T > 0 ? T : 0));

  const double dual_cap =
      (monitors.dual_cap_check && problem.alpha > 0.0 &&
       problem.num_constraints > 0)
          ? std::sqrt(static_cast<double>(problem.num_constraints)) *
                monitors.constraint_bound / problem.alpha
          : std::numeric_limits<double>::infinity();

  for (long long t = 0; t < T; ++t) {
    StepRecord record;
    SolverState<M> next;
    try {
      next = pd_step(problem, out.state, rng, &record,
                     monitors.record_constraint_values);
    } catch (const NumericError& e) {
      throw RunAbortedError(e, std::move(out.trace));
    }
    if (hooks.reference.has_value()) {
      record.dist_to_ref =
          problem.manifold.distance(out.state.x, *hooks.reference);
    }
    out.state = std::move(next);
    if (out.state.lambda.size() > 0 &&
        out.state.lambda.norm() > dual_cap + 1e-9) {
      ++out.trace.dual_cap_violations;
    }
    out.trace.steps.push_back(std::move(record));
    if (hooks.observer) hooks.observer(out.state, out.trace.steps.back());
  }
  return out;
}

}  // namespace rpd
