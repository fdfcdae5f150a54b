#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rpd/errors.hpp"
#include "rpd/manifolds.hpp"
#include "rpd/rng.hpp"
#include "rpd/solver.hpp"

using namespace rpd;

namespace {

Eigen::Vector3d e3d(int i) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  v(i) = 1.0;
  return v;
}

/// Deterministic sphere toy: minimize f(x) = -<x, e1> on S^2.
ConstrainedProblem<SphereManifold> sphere_toy() {
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sense = Sense::minimize;
  p.sample_objective = [](const Eigen::VectorXd& x, long long,
                          Rng&) -> std::pair<double, Eigen::VectorXd> {
    return {-x(0), -e3d(0)};
  };
  return p;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("zero gradient and no constraints leave the point fixed") {
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sample_objective = [](const Eigen::VectorXd&, long long,
                          Rng&) -> std::pair<double, Eigen::VectorXd> {
    return {0.0, Eigen::VectorXd::Zero(3)};
  };
  SolverState<SphereManifold> s;
  s.x = e3d(1);
  s.lambda = Eigen::VectorXd::Zero(0);
  s.schedule = StepSchedule::constant(0.1);
  Rng rng(1);
  const auto s2 = pd_step(p, s, rng);
  CHECK((s2.x - s.x).norm() == 0.0);
  CHECK(s2.t == 1);
}

TEST_CASE("satisfied constraint with zero dual stays at zero") {
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.alpha = 0.0;
  p.num_constraints = 1;
  p.sample_objective = [](const Eigen::VectorXd&, long long,
                          Rng&) -> std::pair<double, Eigen::VectorXd> {
    return {0.0, Eigen::VectorXd::Zero(3)};
  };
  p.constraint_values = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(1, -1.0);
  };
  p.constraint_gradient = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return Eigen::VectorXd::Zero(3);
  };
  SolverState<SphereManifold> s;
  s.x = e3d(0);
  s.lambda = Eigen::VectorXd::Zero(1);
  s.schedule = StepSchedule::constant(0.5);
  Rng rng(1);
  const auto s2 = pd_step(p, s, rng);
  CHECK(s2.lambda(0) == 0.0);
}

TEST_CASE("sphere toy converges to the pole under both senses") {
  Rng rng(2);
  const auto min_result = run(sphere_toy(), e3d(1),
                              StepSchedule::constant(0.1), 500, rng);
  CHECK(sphere::distance(min_result.state.x, e3d(0)) < 1e-3);

  // Maximizing +<x, e1> walks the same path.
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sense = Sense::maximize;
  p.sample_objective = [](const Eigen::VectorXd& x, long long,
                          Rng&) -> std::pair<double, Eigen::VectorXd> {
    return {x(0), e3d(0)};
  };
  const auto max_result = run(p, e3d(1), StepSchedule::constant(0.1), 500, rng);
  CHECK(sphere::distance(max_result.state.x, e3d(0)) < 1e-3);
  CHECK((max_result.state.x - min_result.state.x).norm() == 0.0);
}

TEST_CASE("T = 0 returns the initial state and an empty trace") {
  Rng rng(3);
  const auto result =
      run(sphere_toy(), e3d(2), StepSchedule::inverse_sqrt(), 0, rng);
  CHECK(result.trace.steps.empty());
  CHECK((result.state.x - e3d(2)).norm() == 0.0);
  CHECK(result.state.t == 0);
}

TEST_CASE("identical seeds give bitwise-identical runs") {
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sense = Sense::minimize;
  p.sample_objective = [](const Eigen::VectorXd& x, long long,
                          Rng& rng) -> std::pair<double, Eigen::VectorXd> {
    Eigen::VectorXd g = -e3d(0) + 0.3 * sample_gaussian(rng, 3);
    return {-x(0), g};
  };
  Rng ra(77), rb(77);
  const auto a = run(p, e3d(1), StepSchedule::inverse_sqrt(), 200, ra);
  const auto b = run(p, e3d(1), StepSchedule::inverse_sqrt(), 200, rb);
  CHECK((a.state.x - b.state.x).norm() == 0.0);
  REQUIRE(a.trace.steps.size() == b.trace.steps.size());
  for (std::size_t t = 0; t < a.trace.steps.size(); ++t) {
    CHECK(a.trace.steps[t].objective == b.trace.steps[t].objective);
    CHECK(a.trace.steps[t].grad_norm == b.trace.steps[t].grad_norm);
  }
}

TEST_CASE("running-min objective is monotone after burn-in") {
  Rng rng(4);
  const auto result =
      run(sphere_toy(), e3d(1), StepSchedule::inverse_sqrt(), 1000, rng);
  double best = result.trace.steps[49].objective;
  for (std::size_t t = 50; t < result.trace.steps.size(); ++t) {
    const double next_best = std::min(best, result.trace.steps[t].objective);
    CHECK(next_best <= best);
    best = next_best;
  }
  CHECK(best < result.trace.steps[49].objective);
}

TEST_CASE("steps are clipped to the injectivity radius") {
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sense = Sense::minimize;
  p.sample_objective = [](const Eigen::VectorXd&, long long,
                          Rng&) -> std::pair<double, Eigen::VectorXd> {
    return {0.0, (-1e6 * e3d(0)).eval()};  // huge pull toward e1
  };
  SolverState<SphereManifold> s;
  s.x = e3d(1);
  s.lambda = Eigen::VectorXd::Zero(0);
  s.schedule = StepSchedule::constant(1.0);
  Rng rng(5);
  StepRecord rec;
  const auto s2 = pd_step(p, s, rng, &rec);
  CHECK(rec.grad_norm == doctest::Approx(1e6));
  // Unclipped the move would be 1e6 radians; clipped it is exactly pi, which
  // wraps to the antipode of the start.
  CHECK(sphere::distance(s.x, s2.x) ==
        doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("dual iterates stay nonnegative and respect the Lemma-style cap") {
  // Constraint h(x) = <x, e2> with |h| <= 1 = G; alpha = 1, eta <= 1.
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sense = Sense::minimize;
  p.alpha = 1.0;
  p.num_constraints = 1;
  p.sample_objective = [](const Eigen::VectorXd& x, long long,
                          Rng& rng) -> std::pair<double, Eigen::VectorXd> {
    return {-x(0), (-e3d(0) + 0.1 * sample_gaussian(rng, 3)).eval()};
  };
  p.constraint_values = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x(1));
  };
  p.constraint_gradient = [](const Eigen::VectorXd&, const Eigen::VectorXd& w) {
    return (w(0) * e3d(1)).eval();
  };

  Monitors monitors;
  monitors.dual_cap_check = true;
  monitors.constraint_bound = 1.0;

  RunHooks<SphereManifold> hooks;
  bool all_nonneg = true;
  hooks.observer = [&](const SolverState<SphereManifold>& s, const StepRecord&) {
    if (s.lambda.minCoeff() < 0.0) all_nonneg = false;
  };

  Rng rng(6);
  Eigen::VectorXd x0 = Eigen::Vector3d(0.0, 0.8, 0.6).normalized();
  const auto result =
      run(p, x0, StepSchedule::constant(0.5), 300, rng, monitors,
          std::move(hooks));
  CHECK(all_nonneg);
  CHECK(result.trace.dual_cap_violations == 0);
}

TEST_CASE("non-finite gradients abort with the partial trace") {
  ConstrainedProblem<SphereManifold> p;
  p.manifold = SphereManifold{3};
  p.sample_objective = [](const Eigen::VectorXd&, long long t,
                          Rng&) -> std::pair<double, Eigen::VectorXd> {
    if (t == 3) {
      return {0.0, Eigen::Vector3d(std::nan(""), 0.0, 0.0)};
    }
    return {0.0, (-e3d(0)).eval()};
  };
  Rng rng(7);
  try {
    run(p, e3d(1), StepSchedule::constant(0.1), 10, rng);
    FAIL("expected RunAbortedError");
  } catch (const RunAbortedError& err) {
    CHECK(err.partial_trace.steps.size() == 3);
    CHECK(err.step == 3);
  }
}

TEST_CASE("reference hook records shrinking distances on the toy") {
  RunHooks<SphereManifold> hooks;
  hooks.reference = e3d(0);
  Rng rng(8);
  const auto result = run(sphere_toy(), e3d(1), StepSchedule::constant(0.1),
                          100, rng, {}, std::move(hooks));
  REQUIRE(result.trace.steps.size() == 100);
  CHECK(result.trace.steps.front().dist_to_ref ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(result.trace.steps.back().dist_to_ref <
        result.trace.steps.front().dist_to_ref);
}

TEST_CASE("step schedules evaluate and validate") {
  CHECK(StepSchedule::constant(0.25).at(1000) == 0.25);
  CHECK(StepSchedule::inverse_sqrt().at(0) == 1.0);
  CHECK(StepSchedule::inverse_sqrt().at(99) ==
        doctest::Approx(0.1).epsilon(1e-15));
  const StepSchedule pw =
      StepSchedule::piecewise({{10, 1.0}, {20, 0.5}}, 0.125);
  CHECK(pw.at(0) == 1.0);
  CHECK(pw.at(9) == 1.0);
  CHECK(pw.at(10) == 0.5);
  CHECK(pw.at(19) == 0.5);
  CHECK(pw.at(20) == 0.125);
  CHECK(pw.at(1000000) == 0.125);

  CHECK_THROWS_AS(StepSchedule::constant(0.0), DomainError);
  CHECK_THROWS_AS(StepSchedule::constant(-1.0), DomainError);
  CHECK_THROWS_AS(StepSchedule::piecewise({{10, 1.0}, {5, 0.5}}, 0.1),
                  DomainError);  // boundaries must increase
  CHECK_THROWS_AS(StepSchedule::piecewise({{10, 0.5}, {20, 1.0}}, 0.1),
                  DomainError);  // steps must not increase
  CHECK_THROWS_AS(StepSchedule::piecewise({{10, 0.5}}, 0.7),
                  DomainError);  // tail must not increase
}

TEST_CASE("pd_step consumes the schedule at the state's own clock") {
  // Start a state at t = 99 with the inverse-sqrt schedule: eta must be 0.1.
  SolverState<SphereManifold> s;
  s.x = e3d(1);
  s.lambda = Eigen::VectorXd::Zero(0);
  s.t = 99;
  s.schedule = StepSchedule::inverse_sqrt();
  Rng rng(9);
  StepRecord rec;
  pd_step(sphere_toy(), s, rng, &rec);
  CHECK(rec.t == 99);
  CHECK(rec.eta == doctest::Approx(0.1).epsilon(1e-15));
}

}  // TEST_SUITE
