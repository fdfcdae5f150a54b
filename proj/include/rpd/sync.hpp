// sync.hpp: anchored rotation synchronization on SO(3)^n — isotropic
// Langevin measurement noise, the per-vertex primal-dual iteration, and
// alignment-error reporting.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rpd/manifolds.hpp"
#include "rpd/rng.hpp"
#include "rpd/solver.hpp"

namespace rpd {
namespace sync {

/// A synchronization problem instance: connected measurement graph, ground
/// truth rotations, anchor set, and the noise law.
struct SyncInstance {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  ///< undirected, i < j
  std::vector<Eigen::Matrix3d> truth;      ///< R0_i
  std::vector<int> anchors;                ///< sorted subset of vertices
  /// Langevin concentration; +infinity selects the noiseless proxy W = I.
  double beta = 0.0;
  Eigen::Matrix3d mean = Eigen::Matrix3d::Identity();  ///< Langevin mean N
  /// Soft-anchor slack epsilon: the anchor constraint is
  /// ||R_i - R0_i||_F^2 - epsilon <= 0.  Plumbing only; defaults to 0.
  double anchor_slack = 0.0;
};

/// Connected G(n, p) draw (up to max_attempts redraws), Haar ground truth,
/// and `num_anchors` distinct anchor vertices chosen by a seeded shuffle.
/// @throws DomainError on invalid parameters; Error when connectivity fails
SyncInstance make_sync_instance(int n, double p, double beta, int num_anchors,
                                Rng& rng, int max_attempts = 1000);

/// Normalizer Z(beta) = exp(beta) * (I_0(2 beta) - I_1(2 beta)) of the
/// isotropic Langevin density g(R) proportional to exp(beta * <R, N>).
double langevin_normalizer(double beta);

/// Rejection sampler for the isotropic Langevin law: propose Haar rotations,
/// accept with probability exp(beta * (<R, N> - 3)).
/// @throws DomainError when beta is outside [0, 50]
/// @throws SamplerBudgetError after 10^7 rejected proposals
Eigen::Matrix3d langevin_sample(double beta, const Eigen::Matrix3d& mean,
                                Rng& rng);

/// One measurement per undirected edge, aligned with instance.edges:
/// Y_ij = W_ij * R0_i * R0_j^T with W_ij Langevin; Y_ji is represented
/// implicitly as the transpose.  With beta = +infinity, W = I exactly.
using Measurements = std::vector<Eigen::Matrix3d>;
Measurements generate_measurements(const SyncInstance& instance, Rng& rng);

/// Measurement residual sum_{(i,j) in E} ||I - Y_ij R_j R_i^T||_F^2, the
/// sampled objective of the run (gauge-invariant under R_i -> R_i A).
double residual(const std::vector<Eigen::Matrix3d>& R, const Measurements& Y,
                const SyncInstance& instance);

/// Ambient Lagrangian gradient stack: for each vertex,
///   Z_i = -sum_{j in N(i)} (I - R_i R_j^T Y_ji) Y_ij R_j
///         -sum_{j in N(i)} Y_ij (I - Y_ji R_i R_j^T) R_j
///         + lambda_i (R_i - R0_i)  for anchored i,
/// with Y_ji = Y_ij^T.  `lambda` is indexed by instance.anchors.
std::vector<Eigen::Matrix3d> ambient_gradient(
    const std::vector<Eigen::Matrix3d>& R, const Eigen::VectorXd& lambda,
    const Measurements& Y, const SyncInstance& instance);

/// Tangent-space gradient: R_i * skew(R_i^T Z_i) per vertex.
std::vector<Eigen::Matrix3d> sync_gradient(
    const std::vector<Eigen::Matrix3d>& R, const Eigen::VectorXd& lambda,
    const Measurements& Y, const SyncInstance& instance);

struct SyncOptions {
  /// Draw the measurements once and reuse them every iteration (debugging
  /// aid); the default redraws per iteration, per edge.
  bool fixed_measurements = false;
};

struct SyncResult {
  std::vector<Eigen::Matrix3d> rotations;  ///< final iterates
  Eigen::VectorXd lambda;                  ///< final duals (per anchor)
  RunTrace trace;
  /// frob_errors[t][i] = ||R_i - R0_i||_F after the t-th update; residuals[t]
  /// is the objective sampled at the pre-update state of step t.
  std::vector<std::vector<double>> frob_errors;
  std::vector<double> residuals;
};

/// T primal-dual iterations from Haar-random iterates: descent along the
/// projected Lagrangian gradient through the shared exponential map, and for
/// each anchored vertex the dual update
/// lambda_i <- max(0, lambda_i + eta*(||R_i - R0_i||_F^2 - alpha*lambda_i)).
/// The dual-norm monitor runs with G = 8 (the squared chordal distance on
/// SO(3) is at most 8).
/// @throws DomainError unless eta > 0 and eta*alpha <= 1
SyncResult sync_run(const SyncInstance& instance, long long T, double eta,
                    double alpha, Rng& rng, const SyncOptions& options = {});

}  // namespace sync
}  // namespace rpd
