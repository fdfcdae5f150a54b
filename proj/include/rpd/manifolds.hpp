// manifolds.hpp: Riemannian geometry of the unit sphere S^d, the rotation
// group SO(3), and finite powers of either, behind one policy interface.
//
// The geometric kernels are free function templates over Eigen expressions,
// templated on the scalar type through their arguments.  The policy structs
// (SphereManifold, RotationManifold, PowerManifold) bind them to concrete
// double-precision point types for the solver and the applications.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rpd/errors.hpp"
#include "rpd/numerics.hpp"
#include "rpd/rng.hpp"

namespace rpd {

inline constexpr double kPi = 3.14159265358979323846;

/// Pairs at geodesic distance >= pi - kAntipodalTol are treated as lying on
/// the cut locus: log_map refuses them and the distance-mode MAX-CUT
/// directions saturate to zero there.
inline constexpr double kAntipodalTol = 1e-6;

namespace detail {

template <typename Scalar>
Scalar clamp_unit(Scalar c) {
  if (c > Scalar(1)) return Scalar(1);
  if (c < Scalar(-1)) return Scalar(-1);
  return c;
}

/// Compact point representation for error messages (first few entries).
template <typename Derived>
std::string brief(const Eigen::MatrixBase<Derived>& p) {
  std::ostringstream os;
  os << "[";
  const Eigen::Index n = p.size();
  for (Eigen::Index i = 0; i < n && i < 4; ++i) {
    if (i) os << ", ";
    os << p.derived().reshaped()[i];
  }
  if (n > 4) os << ", ...";
  os << "]";
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// S^d embedded in R^{d+1}
// ---------------------------------------------------------------------------
namespace sphere {

/// Orthogonal projection of an ambient vector onto T_x S^d: z - x<x,z>.
template <typename DX, typename DZ>
typename DX::PlainObject project_tangent(const Eigen::MatrixBase<DX>& x,
                                         const Eigen::MatrixBase<DZ>& z) {
  return z - x * x.dot(z);
}

/// Great-circle exponential: cos(|v|)x + sin(|v|)v/|v|, exp_map(x,0) = x.
template <typename DX, typename DV>
typename DX::PlainObject exp_map(const Eigen::MatrixBase<DX>& x,
                                 const Eigen::MatrixBase<DV>& v) {
  using Scalar = typename DX::Scalar;
  const Scalar theta = v.norm();
  if (theta == Scalar(0)) return x;
  // sin(theta)/theta with a second-order Taylor branch near zero.
  const Scalar sinc = theta < Scalar(1e-6)
                          ? Scalar(1) - theta * theta / Scalar(6)
                          : std::sin(theta) / theta;
  return std::cos(theta) * x + sinc * v;
}

/// Geodesic (great-circle) distance, arccos of the clamped inner product.
template <typename DX, typename DY>
typename DX::Scalar distance(const Eigen::MatrixBase<DX>& x,
                             const Eigen::MatrixBase<DY>& y) {
  return std::acos(detail::clamp_unit(x.dot(y)));
}

/// Inverse of exp_map: the tangent at x pointing along the minimal geodesic
/// to y, with 2-norm equal to distance(x, y).
/// @throws CutLocusError when the pair is antipodal within kAntipodalTol
template <typename DX, typename DY>
typename DX::PlainObject log_map(const Eigen::MatrixBase<DX>& x,
                                 const Eigen::MatrixBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  const Scalar c = detail::clamp_unit(x.dot(y));
  const Scalar d = std::acos(c);
  if (d >= Scalar(kPi) - Scalar(kAntipodalTol)) {
    throw CutLocusError("sphere log_map at the cut locus: points " +
                        detail::brief(x) + " and " + detail::brief(y) +
                        " are antipodal within tolerance");
  }
  if (d < Scalar(1e-8)) {
    // Nearly identical points: log reduces to the projected difference with
    // O(d^3) error.
    return project_tangent(x, (y - x).eval());
  }
  typename DX::PlainObject u = y - c * x;  // = Pi_x(y), norm sin(d)
  return (d / u.norm()) * u;
}

}  // namespace sphere

// ---------------------------------------------------------------------------
// SO(3) as 3x3 matrices; tangents are ambient matrices R*Omega, Omega skew
// ---------------------------------------------------------------------------
namespace so3 {

/// Skew part (A - A^T)/2.
template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> skew_part(
    const Eigen::MatrixBase<D>& a) {
  return (a.derived() - a.derived().transpose()) / typename D::Scalar(2);
}

/// hat: R^3 -> so(3), w -> [w]_x with hat(w)*v = w x v.
template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> hat(const Eigen::MatrixBase<D>& w) {
  using Scalar = typename D::Scalar;
  Eigen::Matrix<Scalar, 3, 3> W;
  W << Scalar(0), -w[2], w[1],
       w[2], Scalar(0), -w[0],
      -w[1], w[0], Scalar(0);
  return W;
}

/// vee: inverse of hat on skew matrices.
template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 1> vee(const Eigen::MatrixBase<D>& W) {
  return Eigen::Matrix<typename D::Scalar, 3, 1>(W(2, 1), W(0, 2), W(1, 0));
}

/// Rodrigues form of the matrix exponential of a skew matrix X:
///   I + (sin t / t) X + ((1 - cos t)/t^2) X^2,  t = |X|_F / sqrt(2).
/// The angle convention t = |X|_F/sqrt(2) equals the axis-angle norm, making
/// this the exact matrix exponential (so exp and log below are mutual
/// inverses).  Second-order Taylor branches below t = 1e-6.
template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> rodrigues(
    const Eigen::MatrixBase<D>& X) {
  using Scalar = typename D::Scalar;
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
  const Scalar theta = X.norm() / std::sqrt(Scalar(2));
  if (theta == Scalar(0)) return Mat3::Identity();
  Scalar a, b;
  if (theta < Scalar(1e-6)) {
    a = Scalar(1) - theta * theta / Scalar(6);
    b = Scalar(0.5) - theta * theta / Scalar(24);
  } else {
    a = std::sin(theta) / theta;
    b = (Scalar(1) - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * X.derived() + b * (X.derived() * X.derived());
}

/// Projection of an ambient 3x3 matrix onto T_R SO(3) = R * so(3):
/// R * skew((R^T Z)).
template <typename DR, typename DZ>
Eigen::Matrix<typename DR::Scalar, 3, 3> project_tangent(
    const Eigen::MatrixBase<DR>& R, const Eigen::MatrixBase<DZ>& Z) {
  return R.derived() * skew_part((R.derived().transpose() * Z.derived()).eval());
}

/// Group exponential at R: the input is skew-symmetrized defensively so that
/// near-tangent vectors (after floating-point projection) stay exact.
template <typename DR, typename DV>
Eigen::Matrix<typename DR::Scalar, 3, 3> exp_map(
    const Eigen::MatrixBase<DR>& R, const Eigen::MatrixBase<DV>& v) {
  const auto omega =
      skew_part((R.derived().transpose() * v.derived()).eval());
  return R.derived() * rodrigues(omega);
}

/// Geodesic distance: the rotation angle of R1^T R2.
template <typename DA, typename DB>
typename DA::Scalar distance(const Eigen::MatrixBase<DA>& R1,
                             const Eigen::MatrixBase<DB>& R2) {
  using Scalar = typename DA::Scalar;
  const Scalar c = detail::clamp_unit(
      Scalar(((R1.derived().transpose() * R2.derived()).trace() - Scalar(1)) /
             Scalar(2)));
  return std::acos(c);
}

/// Principal matrix logarithm of a rotation Q: (phi / (2 sin phi))(Q - Q^T).
/// Near phi = pi the two antipodal solutions coalesce; that regime is behind
/// the cut-locus error below, so the principal branch is always unique here.
/// @throws CutLocusError when the rotation angle is within kAntipodalTol of pi
template <typename D>
Eigen::Matrix<typename D::Scalar, 3, 3> log_at_identity(
    const Eigen::MatrixBase<D>& Q) {
  using Scalar = typename D::Scalar;
  const Scalar c =
      detail::clamp_unit(Scalar((Q.derived().trace() - Scalar(1)) / Scalar(2)));
  const Scalar phi = std::acos(c);
  if (phi >= Scalar(kPi) - Scalar(kAntipodalTol)) {
    throw CutLocusError(
        "so3 log_map at the cut locus: relative rotation " +
        detail::brief(Q.derived().reshaped().transpose().eval()) +
        " has angle within tolerance of pi");
  }
  // phi/sin(phi) with Taylor branch near zero.
  const Scalar f = phi < Scalar(1e-6) ? Scalar(1) + phi * phi / Scalar(6)
                                      : phi / std::sin(phi);
  return f * skew_part(Q);
}

/// Riemannian log on the group: tangent at R1 toward R2 with
/// Frobenius-norm/sqrt(2) equal to distance(R1, R2).
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, 3, 3> log_map(
    const Eigen::MatrixBase<DA>& R1, const Eigen::MatrixBase<DB>& R2) {
  return R1.derived() *
         log_at_identity((R1.derived().transpose() * R2.derived()).eval());
}

/// Squared Frobenius (chordal) distance |R1 - R2|_F^2 = 4(1 - cos d).
template <typename DA, typename DB>
typename DA::Scalar frobenius_distance_squared(
    const Eigen::MatrixBase<DA>& R1, const Eigen::MatrixBase<DB>& R2) {
  return (R1.derived() - R2.derived()).squaredNorm();
}

/// Nearest rotation in Frobenius norm (polar projection via SVD, with the
/// determinant sign fixed to +1).
Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d& M);

}  // namespace so3

// ---------------------------------------------------------------------------
// Policy structs binding the kernels for the solver and applications
// ---------------------------------------------------------------------------

/// S^{ambient_dim - 1} with double-precision points.
struct SphereManifold {
  int ambient_dim = 0;

  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;
  using Ambient = Eigen::VectorXd;

  Tangent project_tangent(const Point& p, const Ambient& z) const {
    return sphere::project_tangent(p, z);
  }
  Point exp_map(const Point& p, const Tangent& v) const {
    return sphere::exp_map(p, v);
  }
  Tangent log_map(const Point& p, const Point& q) const {
    return sphere::log_map(p, q);
  }
  double distance(const Point& p, const Point& q) const {
    return sphere::distance(p, q);
  }
  double riem_norm(const Point&, const Tangent& v) const { return v.norm(); }
  double injectivity_radius() const { return kPi; }
  void renormalize(Point& p) const { p.normalize(); }
  double membership_drift(const Point& p) const {
    return std::abs(p.norm() - 1.0);
  }
  Point random_point(Rng& rng) const {
    return sample_unit_sphere(rng, ambient_dim);
  }
  Tangent random_unit_tangent(const Point& p, Rng& rng) const {
    Tangent v = project_tangent(p, sample_gaussian(rng, ambient_dim));
    double norm = v.norm();
    while (norm < 1e-9) {
      v = project_tangent(p, sample_gaussian(rng, ambient_dim));
      norm = v.norm();
    }
    return v / norm;
  }
  static Ambient axpby(double a, const Ambient& x, double b, const Ambient& y) {
    return a * x + b * y;
  }
  static Tangent scaled(const Tangent& v, double s) { return s * v; }
  static bool all_finite(const Ambient& z) { return z.allFinite(); }
};

/// SO(3) with 3x3 double-precision points.  The Riemannian metric is the
/// bi-invariant one with |V| = |V|_F/sqrt(2), so tangent norms agree with
/// geodesic distances.
struct RotationManifold {
  using Point = Eigen::Matrix3d;
  using Tangent = Eigen::Matrix3d;
  using Ambient = Eigen::Matrix3d;

  Tangent project_tangent(const Point& p, const Ambient& z) const {
    return so3::project_tangent(p, z);
  }
  Point exp_map(const Point& p, const Tangent& v) const {
    return so3::exp_map(p, v);
  }
  Tangent log_map(const Point& p, const Point& q) const {
    return so3::log_map(p, q);
  }
  double distance(const Point& p, const Point& q) const {
    return so3::distance(p, q);
  }
  double riem_norm(const Point&, const Tangent& v) const {
    return v.norm() / std::sqrt(2.0);
  }
  double injectivity_radius() const { return kPi; }
  /// Polar re-orthonormalization, applied only once drift exceeds 1e-9.
  void renormalize(Point& p) const {
    if (membership_drift(p) > 1e-9) p = so3::project_to_rotation(p);
  }
  double membership_drift(const Point& p) const {
    const double ortho =
        (p.transpose() * p - Eigen::Matrix3d::Identity()).norm();
    return std::max(ortho, std::abs(p.determinant() - 1.0));
  }
  Point random_point(Rng& rng) const { return sample_haar_so3(rng); }
  Tangent random_unit_tangent(const Point& p, Rng& rng) const {
    Eigen::Vector3d w(rng.gaussian(), rng.gaussian(), rng.gaussian());
    double norm = w.norm();
    while (norm < 1e-9) {
      w = Eigen::Vector3d(rng.gaussian(), rng.gaussian(), rng.gaussian());
      norm = w.norm();
    }
    return p * so3::hat((w / norm).eval());
  }
  static Ambient axpby(double a, const Ambient& x, double b, const Ambient& y) {
    return a * x + b * y;
  }
  static Tangent scaled(const Tangent& v, double s) { return s * v; }
  static bool all_finite(const Ambient& z) { return z.allFinite(); }
};

/// Finite power M^count of a base manifold with the product metric
/// (distances and norms add in squares; maps act componentwise; the
/// injectivity radius is the minimum over parts, i.e. the base's).
template <class Base>
struct PowerManifold {
  Base base;
  int count = 0;

  using Point = std::vector<typename Base::Point>;
  using Tangent = std::vector<typename Base::Tangent>;
  using Ambient = std::vector<typename Base::Ambient>;

  Tangent project_tangent(const Point& p, const Ambient& z) const {
    Tangent out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = base.project_tangent(p[i], z[i]);
    }
    return out;
  }
  Point exp_map(const Point& p, const Tangent& v) const {
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = base.exp_map(p[i], v[i]);
    }
    return out;
  }
  Tangent log_map(const Point& p, const Point& q) const {
    Tangent out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = base.log_map(p[i], q[i]);
    }
    return out;
  }
  double distance(const Point& p, const Point& q) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = base.distance(p[i], q[i]);
      sum += d * d;
    }
    return std::sqrt(sum);
  }
  double riem_norm(const Point& p, const Tangent& v) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double n = base.riem_norm(p[i], v[i]);
      sum += n * n;
    }
    return std::sqrt(sum);
  }
  double injectivity_radius() const { return base.injectivity_radius(); }
  void renormalize(Point& p) const {
    for (auto& part : p) base.renormalize(part);
  }
  double membership_drift(const Point& p) const {
    double worst = 0.0;
    for (const auto& part : p) {
      worst = std::max(worst, base.membership_drift(part));
    }
    return worst;
  }
  Point random_point(Rng& rng) const {
    Point out(static_cast<std::size_t>(count));
    for (auto& part : out) part = base.random_point(rng);
    return out;
  }
  Tangent random_unit_tangent(const Point& p, Rng& rng) const {
    Tangent out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = base.random_unit_tangent(p[i], rng);
    }
    const double norm = riem_norm(p, out);
    for (auto& part : out) part = Base::scaled(part, 1.0 / norm);
    return out;
  }
  static Ambient axpby(double a, const Ambient& x, double b, const Ambient& y) {
    Ambient out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = Base::axpby(a, x[i], b, y[i]);
    }
    return out;
  }
  static Tangent scaled(const Tangent& v, double s) {
    Tangent out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Base::scaled(v[i], s);
    return out;
  }
  static bool all_finite(const Ambient& z) {
    for (const auto& part : z) {
      if (!Base::all_finite(part)) return false;
    }
    return true;
  }
};

using SpherePower = PowerManifold<SphereManifold>;
using RotationPower = PowerManifold<RotationManifold>;

}  // namespace rpd
