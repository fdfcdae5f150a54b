#include "rpd/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rpd/errors.hpp"

namespace rpd {

namespace {

struct PowerResult {
  bool converged = false;
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  double residual = std::numeric_limits<double>::infinity();
};

// Deterministic start vector with graded entries: never the zero vector and
// not aligned with any coordinate axis, so it has a nonzero component along a
// generic eigenvector.
Eigen::VectorXd graded_start(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(n);
  }
  v.normalize();
  return v;
}

PowerResult power_iteration(const Eigen::MatrixXd& M, const Eigen::VectorXd& v0,
                            double tol, int max_iter, double scale) {
  PowerResult out;
  Eigen::VectorXd v = v0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd Mv = M * v;
    const double lambda = v.dot(Mv);
    const double residual = (Mv - lambda * v).norm();
    out.eigenvalue = lambda;
    out.eigenvector = v;
    out.residual = residual;
    if (residual <= tol * scale) {
      out.converged = true;
      return out;
    }
    const double norm = Mv.norm();
    if (norm == 0.0) {
      // v lies in the kernel; (0, v) is an exact eigenpair.
      out.eigenvalue = 0.0;
      out.residual = 0.0;
      out.converged = true;
      return out;
    }
    v = Mv / norm;
  }
  return out;
}

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

}  // namespace

std::pair<double, Eigen::VectorXd> sym_leading_eig(const Eigen::MatrixXd& M,
                                                   double tol, int max_iter) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw DomainError("sym_leading_eig: matrix must be square and non-empty");
  }
  const double scale = M.norm();
  const double sym_tol = 1e-12 * std::max(1.0, scale);
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > sym_tol) {
    throw DomainError("sym_leading_eig: matrix is not symmetric within 1e-12");
  }
  const Eigen::Index n = M.rows();
  Eigen::VectorXd v0 = graded_start(n);
  if (scale == 0.0) {
    fix_sign(v0);
    return {0.0, v0};
  }

  PowerResult best = power_iteration(M, v0, tol, max_iter, scale);
  if (!best.converged) {
    throw NonConvergenceError(
        "sym_leading_eig: power iteration did not converge after " +
            std::to_string(max_iter) + " iterations (residual " +
            std::to_string(best.residual) + ")",
        best.residual);
  }

  // Deflation fallback: the start vector may be (numerically) orthogonal to
  // the leading eigenspace, in which case the first run converges to an
  // interior eigenvalue.  Peel off converged directions and keep whichever
  // pair has the largest magnitude and still satisfies the residual bound on
  // the original matrix.
  Eigen::MatrixXd deflated = M;
  for (Eigen::Index round = 0; round + 1 < n; ++round) {
    deflated -= best.eigenvalue * best.eigenvector * best.eigenvector.transpose();
    PowerResult next = power_iteration(deflated, v0, tol, max_iter, scale);
    if (!next.converged ||
        std::abs(next.eigenvalue) <= std::abs(best.eigenvalue)) {
      break;
    }
    const double residual_on_M =
        (M * next.eigenvector - next.eigenvalue * next.eigenvector).norm();
    if (residual_on_M > tol * scale) break;
    next.residual = residual_on_M;
    best = next;
  }

  fix_sign(best.eigenvector);
  return {best.eigenvalue, best.eigenvector};
}

double bessel_I(int order, double x) {
  if (order != 0 && order != 1) {
    throw DomainError("bessel_I: order must be 0 or 1");
  }
  if (!(x >= 0.0 && x <= 100.0)) {
    throw DomainError("bessel_I: x must lie in [0, 100]");
  }
  const double half = 0.5 * x;
  double term = (order == 0) ? 1.0 : half;  // k = 0 term of the series
  double sum = term;
  for (int k = 1; k <= 500; ++k) {
    term *= half * half / (static_cast<double>(k) * (k + order));
    sum += term;
    if (term <= 1e-16 * sum) break;
  }
  return sum;
}

Eigen::VectorXd sample_gaussian(Rng& rng, int n) {
  if (n < 1) throw DomainError("sample_gaussian: n must be >= 1");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

Eigen::VectorXd sample_unit_sphere(Rng& rng, int n) {
  Eigen::VectorXd v = sample_gaussian(rng, n);
  double norm = v.norm();
  while (norm < 1e-12) {  // astronomically unlikely; redraw for safety
    v = sample_gaussian(rng, n);
    norm = v.norm();
  }
  return v / norm;
}

Eigen::Matrix3d quaternion_to_rotation(double w, double x, double y, double z) {
  Eigen::Matrix3d R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

Eigen::Matrix3d sample_haar_so3(Rng& rng) {
  double w, x, y, z, norm2;
  do {
    w = rng.gaussian();
    x = rng.gaussian();
    y = rng.gaussian();
    z = rng.gaussian();
    norm2 = w * w + x * x + y * y + z * z;
  } while (norm2 < 1e-24);
  const double s = 1.0 / std::sqrt(norm2);
  return quaternion_to_rotation(w * s, x * s, y * s, z * s);
}

}  // namespace rpd
