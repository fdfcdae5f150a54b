// bounds.hpp: closed-form evaluators for the convergence bounds of the three
// curvature regimes, the shared constants A and B, and analytic bracketing of
// the 1/sqrt(t+1) step-size sums.
#pragma once

#include <utility>
#include <vector>

#include "rpd/solver.hpp"

namespace rpd {

/// The constants entering every regret bound:
///   A = 4 m G^2 + M^2 (1 + sqrt(m) G / alpha)^2
///   B = M^3 (1 + sqrt(m) G / alpha)^3
/// with M the larger of the objective/constraint smoothness constants.
/// @throws DomainError when alpha <= 0 or any of m, G, M is negative
std::pair<double, double> constants_AB(int m, double G, double M, double alpha);

/// Inputs shared by the three bound evaluators.  e2/e3 are per-step bounds on
/// the second/third moments of the gradient-noise error: empty means all
/// zero, a single value is broadcast to every step, otherwise one entry per
/// step (size T) is required.
struct BoundInputs {
  double kappa = 0.0;  ///< sectional-curvature parameter, sign per regime
  double R = 0.0;      ///< diameter bound around the comparator (regime 1)
  double d0 = 0.0;     ///< initial distance d(x_0, x*)
  int m = 0;           ///< number of constraints
  double G = 0.0;      ///< bound on |h_k|
  double M_f = 0.0;    ///< objective gradient bound
  double M_h = 0.0;    ///< constraint gradient bound
  double alpha = 0.0;  ///< dual regularizer (> 0)
  StepSchedule eta = StepSchedule::inverse_sqrt();
  long long T = 1;
  std::vector<double> e2;
  std::vector<double> e3;
};

/// Hadamard regime (kappa <= 0):
///   [ R^2/2 + 1/2 sum_t (A + (1 + 2R sqrt(|k|/2)) e2_t) eta_t^2
///     + (4 sqrt(|k|) / (3 sqrt(2))) sum_t (B + e3_t) eta_t^3 ] / sum_t eta_t
/// All schedule sums are evaluated exactly (term by term), not through the
/// analytic stepsum bounds.
/// @throws DomainError on kappa > 0 or invalid inputs
double bound_thm1(const BoundInputs& inputs);

/// Elliptic regime (kappa > 0, d0 < pi/sqrt(kappa)):
///   [ (2/kappa) sin^2(sqrt(kappa) d0 / 2) + sum_t (A + e2_t) eta_t^2 ]
///     / sum_t eta_t
/// @throws DomainError on kappa <= 0, d0 >= pi/sqrt(kappa), or invalid inputs
double bound_thm2(const BoundInputs& inputs);

/// Asymptotically elliptic regime (distance-decaying curvature lower bound
/// with parameter kappa):
///   [ d0^2/2 + 1/2 (1 + sqrt(1 + 4 kappa^2)) sum_t (A + e2_t) eta_t^2 ]
///     / sum_t eta_t
/// @throws DomainError on invalid inputs
double bound_thm5(const BoundInputs& inputs);

/// Analytic bracketing of the inverse-sqrt schedule sums over t = 0..T-1:
/// lower/upper bound sum eta_t, and upper bounds for sum eta_t^2 and
/// sum eta_t^3.
struct StepsumBounds {
  double lower;           ///< 2(sqrt(T) - 1) <= sum eta_t
  double upper;           ///< sum eta_t <= 2 sqrt(T) - 1
  double sum_sq_upper;    ///< sum eta_t^2 <= 1 + ln T
  double sum_cube_upper;  ///< sum eta_t^3 <= 3 - 2/sqrt(T)
};

/// @throws DomainError when T < 1
StepsumBounds stepsum_bounds(long long T);

}  // namespace rpd
