#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rpd/bounds.hpp"
#include "rpd/errors.hpp"

using namespace rpd;

namespace {

/// Shared baseline: flat-ish inputs with unit constants and T = 100.
BoundInputs base_inputs() {
  BoundInputs in;
  in.kappa = 0.0;
  in.R = 1.0;
  in.d0 = 1.0;
  in.m = 1;
  in.G = 1.0;
  in.M_f = 1.0;
  in.M_h = 1.0;
  in.alpha = 1.0;
  in.eta = StepSchedule::inverse_sqrt();
  in.T = 100;
  return in;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("constant pairs from direct substitution") {
  {
    const auto [A, B] = constants_AB(1, 1.0, 1.0, 1.0);
    CHECK(A == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(B == doctest::Approx(8.0).epsilon(1e-15));
  }
  {
    const auto [A, B] = constants_AB(0, 5.0, 1.0, 1.0);
    CHECK(A == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(B == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    // sqrt(m) G / alpha = 2*2/0.5 = 8: A = 4*4*4 + 9*81 = 793, B = 27*729.
    const auto [A, B] = constants_AB(4, 2.0, 3.0, 0.5);
    CHECK(A == doctest::Approx(793.0).epsilon(1e-15));
    CHECK(B == doctest::Approx(19683.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(constants_AB(1, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(constants_AB(-1, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("flat limit of the Hadamard bound is exact") {
  BoundInputs in = base_inputs();
  // kappa = 0, zero moments: [R^2/2 + (A/2) sum eta^2] / sum eta with A = 8.
  const auto sums = rpd_test::direct_eta_sums(in.T);
  const double expected = (0.5 + 4.0 * sums.sum_sq) / sums.sum;
  CHECK(bound_thm1(in) == doctest::Approx(expected).epsilon(1e-14));
  // Frozen reference value; regenerate with tests/gen_reference_values.py.
  CHECK(bound_thm1(in) ==
        doctest::Approx(1.143085687615788238932).epsilon(1e-14));
}

TEST_CASE("elliptic bound agrees with its flat limit as kappa -> 0") {
  BoundInputs in = base_inputs();
  in.kappa = 1e-8;
  const auto sums = rpd_test::direct_eta_sums(in.T);
  // Flat limit: (d0^2/2 + A sum eta^2) / sum eta, A = 8 (no 1/2 on the sum).
  const double flat = (0.5 + 8.0 * sums.sum_sq) / sums.sum;
  CHECK(std::abs(bound_thm2(in) - flat) / flat < 1e-6);
}

TEST_CASE("asymptotic bound at kappa = 0 matches the stated coefficient") {
  BoundInputs in = base_inputs();
  const auto sums = rpd_test::direct_eta_sums(in.T);
  // Coefficient (1/2)(1 + sqrt(1)) = 1 at kappa = 0.
  const double expected = (0.5 + 8.0 * sums.sum_sq) / sums.sum;
  CHECK(bound_thm5(in) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("negative-curvature bound adds the cubic term") {
  BoundInputs in = base_inputs();
  in.kappa = -2.0;
  const auto sums = rpd_test::direct_eta_sums(in.T);
  const double a_coef = 1.0;  // e2 = 0, so the (1 + 2R sqrt(|k|/2)) factor idles
  (void)a_coef;
  const double expected =
      (0.5 + 0.5 * 8.0 * sums.sum_sq +
       (4.0 * std::sqrt(2.0) / (3.0 * std::sqrt(2.0))) * 8.0 * sums.sum_cube) /
      sums.sum;
  CHECK(bound_thm1(in) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("error moments enter the advertised slots") {
  BoundInputs in = base_inputs();
  in.kappa = -1.0;
  in.e2 = {0.5};  // broadcast to every step
  in.e3 = {0.25};
  const auto sums = rpd_test::direct_eta_sums(in.T);
  const double e2_factor = 1.0 + 2.0 * in.R * std::sqrt(0.5);
  const double expected =
      (0.5 + 0.5 * (8.0 + e2_factor * 0.5) * sums.sum_sq +
       (4.0 / (3.0 * std::sqrt(2.0))) * (8.0 + 0.25) * sums.sum_cube) /
      sums.sum;
  CHECK(bound_thm1(in) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("bounds are monotone in the error moments") {
  BoundInputs lo = base_inputs();
  BoundInputs hi = lo;
  hi.e2 = {1.0};
  hi.e3 = {1.0};
  CHECK(bound_thm1(hi) >= bound_thm1(lo));
  lo.kappa = hi.kappa = 0.5;
  CHECK(bound_thm2(hi) >= bound_thm2(lo));
  CHECK(bound_thm5(hi) >= bound_thm5(lo));

  // Per-step lists: raising one entry never lowers the bound.
  BoundInputs list_lo = base_inputs();
  list_lo.T = 4;
  list_lo.e2.assign(4, 0.1);
  BoundInputs list_hi = list_lo;
  list_hi.e2[2] = 5.0;
  CHECK(bound_thm1(list_hi) >= bound_thm1(list_lo));
}

TEST_CASE("regime guards") {
  BoundInputs in = base_inputs();
  in.kappa = 0.5;
  CHECK_THROWS_AS(bound_thm1(in), DomainError);  // thm1 needs kappa <= 0
  in.kappa = 0.0;
  CHECK_THROWS_AS(bound_thm2(in), DomainError);  // thm2 needs kappa > 0
  in.kappa = 4.0;
  in.d0 = std::numbers::pi / 2.0;  // exactly the pi/sqrt(kappa) boundary
  CHECK_THROWS_AS(bound_thm2(in), DomainError);  // d0 >= pi/sqrt(kappa)
  in.d0 = 0.5;
  CHECK_NOTHROW(bound_thm2(in));
  in.alpha = 0.0;
  CHECK_THROWS_AS(bound_thm2(in), DomainError);
  in.alpha = 1.0;
  in.e2 = {1.0, 2.0};  // neither scalar nor size T
  CHECK_THROWS_AS(bound_thm2(in), DomainError);
}

TEST_CASE("stepsum brackets hold against direct summation") {
  for (long long T : {1LL, 10LL, 100LL, 10000LL}) {
    const auto b = stepsum_bounds(T);
    const auto sums = rpd_test::direct_eta_sums(T);
    CHECK(b.lower <= sums.sum + 1e-12);
    CHECK(sums.sum <= b.upper + 1e-12);
    CHECK(sums.sum_sq <= b.sum_sq_upper + 1e-12);
    CHECK(sums.sum_cube <= b.sum_cube_upper + 1e-12);
  }
  const auto b1 = stepsum_bounds(1);
  CHECK(b1.lower == doctest::Approx(0.0));
  CHECK(b1.upper == doctest::Approx(1.0));
  CHECK(b1.sum_sq_upper == doctest::Approx(1.0));
  CHECK(b1.sum_cube_upper == doctest::Approx(1.0));
  const auto b100 = stepsum_bounds(100);
  CHECK(b100.upper == doctest::Approx(19.0));
  CHECK(b100.sum_sq_upper == doctest::Approx(1.0 + std::log(100.0)));
  CHECK_THROWS_AS(stepsum_bounds(0), DomainError);
}

TEST_CASE("direct eta sums match the frozen references at T = 100") {
  // Frozen reference values; regenerate with tests/gen_reference_values.py.
  const auto sums = rpd_test::direct_eta_sums(100);
  CHECK(sums.sum == doctest::Approx(18.58960382478415342236).epsilon(1e-14));
  CHECK(sums.sum_sq == doctest::Approx(5.187377517639620260805).epsilon(1e-14));
  CHECK(sums.sum_cube ==
        doctest::Approx(2.412874098703716435927).epsilon(1e-14));
}

}  // TEST_SUITE
