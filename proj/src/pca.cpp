#include "rpd/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpd/errors.hpp"
#include "rpd/numerics.hpp"

namespace rpd {
namespace pca {

SpikedModel make_spiked_model(int d, int T, double snr, double delta,
                              Rng& rng) {
  if (d < 1) throw DomainError("make_spiked_model: d must be >= 1");
  if (T < 1) throw DomainError("make_spiked_model: T must be >= 1");
  if (snr < 0.0) throw DomainError("make_spiked_model: snr must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw DomainError("make_spiked_model: delta must lie in (0, 1]");
  }
  SpikedModel model;
  model.d = d;
  model.T = T;
  model.snr = snr;
  model.delta = delta;

  const int support_size =
      std::max(1, static_cast<int>(std::lround(delta * d)));
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < support_size; ++i) {  // partial Fisher-Yates
    const int j =
        i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d - i)));
    std::swap(perm[i], perm[j]);
  }
  model.support.assign(perm.begin(), perm.begin() + support_size);
  std::sort(model.support.begin(), model.support.end());

  model.spike = Eigen::VectorXd::Zero(d);
  const double value = 1.0 / std::sqrt(static_cast<double>(support_size));
  for (int idx : model.support) model.spike[idx] = value;
  return model;
}

Eigen::MatrixXd generate_spiked(const SpikedModel& model, Rng& rng) {
  const int d = model.d;
  const int T = model.T;
  const double sqrt_snr = std::sqrt(model.snr);
  const double off_sd = std::sqrt(1.0 / T);
  const double diag_sd = std::sqrt(2.0 / T);
  Eigen::MatrixXd Y(T, d);
  // Each block of up to d consecutive rows is one symmetric spiked draw; for
  // T <= d that is simply the first T rows of a single draw, and an unbounded
  // stream (T > d) stacks independent draws.
  for (int block = 0; block < T; block += d) {
    const int rows = std::min(d, T - block);
    for (int r = 0; r < rows; ++r) {
      for (int j = r; j < d; ++j) {
        const double noise = (j == r ? diag_sd : off_sd) * rng.gaussian();
        Y(block + r, j) = sqrt_snr * model.spike[r] * model.spike[j] + noise;
        if (j != r && j < rows) Y(block + j, r) = Y(block + r, j);
      }
    }
  }
  return Y;
}

std::pair<double, double> metrics(const Eigen::VectorXd& xhat,
                                  const Eigen::VectorXd& spike) {
  if (xhat.size() != spike.size() || xhat.size() == 0) {
    throw DomainError("pca::metrics: dimension mismatch");
  }
  const double overlap = std::abs(xhat.dot(spike));
  const double cv = xhat.cwiseMin(0.0).norm() /
                    std::sqrt(static_cast<double>(xhat.size()));
  return {overlap, cv};
}

PcaRunResult pca_pd_run(const SpikedModel& model, const Eigen::MatrixXd& Y,
                        Rng& rng, double alpha, const StepSchedule& schedule) {
  if (Y.rows() != model.T || Y.cols() != model.d) {
    throw DomainError("pca_pd_run: sample matrix does not match the model");
  }
  const int d = model.d;

  ConstrainedProblem<SphereManifold> problem;
  problem.manifold = SphereManifold{d};
  problem.sense = Sense::maximize;
  problem.alpha = alpha;
  problem.num_constraints = d;
  problem.sample_objective = [&Y](const Eigen::VectorXd& x, long long t,
                                  Rng&) -> std::pair<double, Eigen::VectorXd> {
    const Eigen::VectorXd xi = Y.row(static_cast<Eigen::Index>(t)).transpose();
    const double c = x.dot(xi);
    return {c * c, (2.0 * c) * xi};
  };
  problem.constraint_values = [](const Eigen::VectorXd& x) {
    return (-x).eval();
  };
  problem.constraint_gradient = [](const Eigen::VectorXd&,
                                   const Eigen::VectorXd& w) {
    return (-w).eval();  // sum_k w_k * grad(-x_k) = -w
  };

  Eigen::VectorXd x0 = sample_unit_sphere(rng, d);

  Monitors monitors;
  monitors.dual_cap_check = alpha > 0.0;
  monitors.constraint_bound = 1.0;  // |h_i| = |x_i| <= 1 on the sphere
  // Per-step constraint vectors are d-dimensional; omit them from the trace
  // to keep long high-dimensional runs at O(T) memory (max_violation is
  // still recorded every step).
  monitors.record_constraint_values = false;

  auto result = run(problem, std::move(x0), schedule,
                    static_cast<long long>(model.T), rng, monitors);

  PcaRunResult out;
  out.estimate.xhat = std::move(result.state.x);
  const auto [overlap, cv] = metrics(out.estimate.xhat, model.spike);
  out.estimate.overlap = overlap;
  out.estimate.cv = cv;
  out.trace = std::move(result.trace);
  return out;
}

PcaRunResult pca_pd_run(const SpikedModel& model, Rng& rng, double alpha,
                        const StepSchedule& schedule) {
  const Eigen::MatrixXd Y = generate_spiked(model, rng);
  return pca_pd_run(model, Y, rng, alpha, schedule);
}

Eigen::VectorXd spectral_baseline(const Eigen::MatrixXd& Y, double tol,
                                  int max_iter) {
  if (Y.rows() == 0 || Y.cols() == 0) {
    throw DomainError("spectral_baseline: empty sample matrix");
  }
  const double T = static_cast<double>(Y.rows());
  const Eigen::MatrixXd S = (Y.transpose() * Y) / T;
  return sym_leading_eig(S, tol, max_iter).second;
}

}  // namespace pca
}  // namespace rpd
