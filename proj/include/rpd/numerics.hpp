// numerics.hpp: dense leading-eigenpair solver, random sampling, and the
// modified Bessel functions used by the Langevin normalizer.
#pragma once

#include <Eigen/Dense>
#include <utility>

#include "rpd/rng.hpp"

namespace rpd {

/// Leading eigenpair (largest eigenvalue magnitude) of a symmetric matrix by
/// power iteration with Rayleigh-quotient estimates.  If the deterministic
/// start vector happens to be orthogonal to the leading eigenspace, a
/// deflation fallback re-runs on M - lambda*v*v^T and adopts any strictly
/// larger-magnitude pair it finds.
///
/// The returned eigenvector has unit 2-norm and its largest-magnitude entry is
/// made positive so results are deterministic.
///
/// @param M        symmetric matrix (checked elementwise to 1e-12, scaled)
/// @param tol      convergence on the residual ||Mv - lambda v|| <= tol*||M||_F
/// @param max_iter iteration budget per power run
/// @throws DomainError on non-square/asymmetric input
/// @throws NonConvergenceError carrying the last residual when the budget is
///         exhausted (e.g. two leading eigenvalues of equal magnitude)
std::pair<double, Eigen::VectorXd> sym_leading_eig(const Eigen::MatrixXd& M,
                                                   double tol = 1e-10,
                                                   int max_iter = 10000);

/// Modified Bessel function of the first kind, order 0 or 1, by power series
/// with a 1e-16 term-ratio cutoff.  Supported domain 0 <= x <= 100.
/// @throws DomainError for unsupported order or x outside the domain
double bessel_I(int order, double x);

/// Vector of n i.i.d. standard normal entries.
Eigen::VectorXd sample_gaussian(Rng& rng, int n);

/// Uniform draw from the unit sphere in R^n (normalized Gaussian vector).
Eigen::VectorXd sample_unit_sphere(Rng& rng, int n);

/// Rotation matrix of a unit quaternion (w, x, y, z).  The caller must
/// normalize; no check is performed.
Eigen::Matrix3d quaternion_to_rotation(double w, double x, double y, double z);

/// Haar-uniform rotation from a uniformly random unit quaternion.
Eigen::Matrix3d sample_haar_so3(Rng& rng);

}  // namespace rpd
