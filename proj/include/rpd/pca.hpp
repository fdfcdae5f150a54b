// pca.hpp: non-negative online PCA on the unit sphere — spiked-model data,
// the streaming primal-dual estimator, the spectral baseline, and the
// overlap / constraint-violation metrics.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rpd/manifolds.hpp"
#include "rpd/rng.hpp"
#include "rpd/solver.hpp"

namespace rpd {
namespace pca {

/// Rank-one spiked model: rows of Y are noisy observations of the
/// nonnegative, delta-sparse unit spike.
struct SpikedModel {
  int d = 0;                 ///< ambient dimension
  int T = 0;                 ///< number of streamed samples (rows)
  double snr = 0.0;          ///< signal-to-noise ratio
  double delta = 1.0;        ///< support density in (0, 1]
  std::vector<int> support;  ///< sorted index set S, |S| = round(delta*d)
  Eigen::VectorXd spike;     ///< xi*: 1/sqrt(|S|) on S, 0 elsewhere
};

/// Draw a model with a seeded-shuffle support set.  |S| = round(delta*d),
/// clamped to at least one index.
/// @throws DomainError on d < 1, T < 1, snr < 0, delta outside (0,1]
SpikedModel make_spiked_model(int d, int T, double snr, double delta, Rng& rng);

/// T x d sample matrix of streamed observations.  Each block of up to d
/// consecutive rows is one draw of the symmetric rank-one model
/// sqrt(snr)*spike*spike^T + Z with off-diagonal noise variance 1/T and
/// diagonal variance 2/T (Z mirrored inside the block).  For T <= d this is
/// the first T rows of a single draw, so Y is symmetric whenever T = d; for
/// T > d independent draws are stacked.
Eigen::MatrixXd generate_spiked(const SpikedModel& model, Rng& rng);

/// overlap = |<xhat, spike>|; cv = ||negative part of xhat||_2 / sqrt(d).
/// Both arguments are expected to be unit vectors of equal dimension.
std::pair<double, double> metrics(const Eigen::VectorXd& xhat,
                                  const Eigen::VectorXd& spike);

struct PcaEstimate {
  Eigen::VectorXd xhat;  ///< final unit iterate xi_hat_T
  double overlap = 0.0;
  double cv = 0.0;
};

struct PcaRunResult {
  PcaEstimate estimate;
  RunTrace trace;
};

/// Streaming primal-dual run over the rows of Y (one row per iteration):
/// maximize the sampled Rayleigh quotient <x, xi_t>^2 subject to x >= 0
/// encoded as h(x) = -x <= 0 (m = d).  The ambient direction
/// 2<x,xi_t>*xi_t + lambda_t is tangent-projected before the great-circle
/// update; x_0 is a normalized Gaussian vector and lambda_0 = 0.  The
/// Lemma-style dual-norm monitor runs with G = 1 (|x_i| <= 1 on the sphere).
PcaRunResult pca_pd_run(const SpikedModel& model, const Eigen::MatrixXd& Y,
                        Rng& rng, double alpha,
                        const StepSchedule& schedule);

/// Convenience overload that draws Y internally.  alpha defaults to 0.1 and
/// the schedule to eta_t = 1/sqrt(t+1).
PcaRunResult pca_pd_run(const SpikedModel& model, Rng& rng, double alpha = 0.1,
                        const StepSchedule& schedule = StepSchedule::inverse_sqrt());

/// Leading eigenvector of the sample covariance Y^T Y / T (for the symmetric
/// square draws used here, equal to the leading eigenvector of Y Y^T / T),
/// with the eigensolver's deterministic sign rule.  The default tolerance and
/// budget are looser than the eigensolver's own defaults because near the
/// bulk edge (snr at or below the detection threshold) the top two
/// eigenvalues of the squared matrix nearly collide.
/// @throws NonConvergenceError propagated from the eigensolver
Eigen::VectorXd spectral_baseline(const Eigen::MatrixXd& Y, double tol = 1e-6,
                                  int max_iter = 300000);

}  // namespace pca
}  // namespace rpd
