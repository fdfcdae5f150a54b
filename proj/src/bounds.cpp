#include "rpd/bounds.hpp"

#include <cmath>
#include <numbers>

#include "rpd/errors.hpp"

namespace rpd {

namespace {

double moment_at(const std::vector<double>& moments, long long t) {
  if (moments.empty()) return 0.0;
  if (moments.size() == 1) return moments[0];
  return moments[static_cast<std::size_t>(t)];
}

void validate_common(const BoundInputs& in) {
  if (in.T < 1) throw DomainError("bound inputs: T must be >= 1");
  if (in.G < 0.0 || in.M_f < 0.0 || in.M_h < 0.0 || in.m < 0) {
    throw DomainError("bound inputs: m, G, M_f, M_h must be nonnegative");
  }
  const auto size_ok = [&](const std::vector<double>& v) {
    return v.empty() || v.size() == 1 ||
           v.size() == static_cast<std::size_t>(in.T);
  };
  if (!size_ok(in.e2) || !size_ok(in.e3)) {
    throw DomainError(
        "bound inputs: e2/e3 must be empty, one value, or one value per step");
  }
}

double big_m(const BoundInputs& in) { return std::max(in.M_f, in.M_h); }

}  // namespace

std::pair<double, double> constants_AB(int m, double G, double M,
                                       double alpha) {
  if (alpha <= 0.0) throw DomainError("constants_AB: alpha must be > 0");
  if (m < 0 || G < 0.0 || M < 0.0) {
    throw DomainError("constants_AB: m, G, M must be nonnegative");
  }
  const double dual_scale =
      1.0 + std::sqrt(static_cast<double>(m)) * G / alpha;
  const double A = 4.0 * m * G * G + M * M * dual_scale * dual_scale;
  const double B = M * M * M * dual_scale * dual_scale * dual_scale;
  return {A, B};
}

double bound_thm1(const BoundInputs& in) {
  validate_common(in);
  if (in.kappa > 0.0) {
    throw DomainError("bound_thm1: requires kappa <= 0 (Hadamard regime)");
  }
  const auto [A, B] = constants_AB(in.m, in.G, big_m(in), in.alpha);
  const double abs_k = std::abs(in.kappa);
  const double sq_coeff = 1.0 + 2.0 * in.R * std::sqrt(abs_k / 2.0);
  const double cube_coeff = 4.0 * std::sqrt(abs_k) / (3.0 * std::sqrt(2.0));
  double sum_eta = 0.0, sum_sq = 0.0, sum_cube = 0.0;
  for (long long t = 0; t < in.T; ++t) {
    const double eta = in.eta.at(t);
    sum_eta += eta;
    sum_sq += (A + sq_coeff * moment_at(in.e2, t)) * eta * eta;
    sum_cube += (B + moment_at(in.e3, t)) * eta * eta * eta;
  }
  return (in.R * in.R / 2.0 + 0.5 * sum_sq + cube_coeff * sum_cube) / sum_eta;
}

double bound_thm2(const BoundInputs& in) {
  validate_common(in);
  if (in.kappa <= 0.0) {
    throw DomainError("bound_thm2: requires kappa > 0 (elliptic regime)");
  }
  const double sqrt_k = std::sqrt(in.kappa);
  if (!(in.d0 < std::numbers::pi / sqrt_k)) {
    throw DomainError("bound_thm2: requires d0 < pi/sqrt(kappa)");
  }
  const auto [A, B] = constants_AB(in.m, in.G, big_m(in), in.alpha);
  (void)B;
  const double s = std::sin(sqrt_k * in.d0 / 2.0);
  double sum_eta = 0.0, sum_sq = 0.0;
  for (long long t = 0; t < in.T; ++t) {
    const double eta = in.eta.at(t);
    sum_eta += eta;
    sum_sq += (A + moment_at(in.e2, t)) * eta * eta;
  }
  return ((2.0 / in.kappa) * s * s + sum_sq) / sum_eta;
}

double bound_thm5(const BoundInputs& in) {
  validate_common(in);
  const auto [A, B] = constants_AB(in.m, in.G, big_m(in), in.alpha);
  (void)B;
  const double coeff =
      0.5 * (1.0 + std::sqrt(1.0 + 4.0 * in.kappa * in.kappa));
  double sum_eta = 0.0, sum_sq = 0.0;
  for (long long t = 0; t < in.T; ++t) {
    const double eta = in.eta.at(t);
    sum_eta += eta;
    sum_sq += (A + moment_at(in.e2, t)) * eta * eta;
  }
  return (in.d0 * in.d0 / 2.0 + coeff * sum_sq) / sum_eta;
}

StepsumBounds stepsum_bounds(long long T) {
  if (T < 1) throw DomainError("stepsum_bounds: T must be >= 1");
  const double sqrt_t = std::sqrt(static_cast<double>(T));
  return StepsumBounds{2.0 * (sqrt_t - 1.0), 2.0 * sqrt_t - 1.0,
                       1.0 + std::log(static_cast<double>(T)),
                       3.0 - 2.0 / sqrt_t};
}

}  // namespace rpd
