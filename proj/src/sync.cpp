#include "rpd/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpd/errors.hpp"
#include "rpd/graphs.hpp"
#include "rpd/numerics.hpp"

namespace rpd {
namespace sync {

SyncInstance make_sync_instance(int n, double p, double beta, int num_anchors,
                                Rng& rng, int max_attempts) {
  if (n < 1) throw DomainError("make_sync_instance: n must be >= 1");
  if (num_anchors < 0 || num_anchors > n) {
    throw DomainError("make_sync_instance: anchors must lie in [0, n]");
  }
  if (!(beta >= 0.0)) {
    throw DomainError("make_sync_instance: beta must be >= 0");
  }
  SyncInstance instance;
  instance.n = n;
  instance.beta = beta;
  instance.edges = connected_erdos_renyi_edges(n, p, rng, max_attempts);
  instance.truth.reserve(n);
  for (int i = 0; i < n; ++i) instance.truth.push_back(sample_haar_so3(rng));

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < num_anchors; ++k) {  // partial Fisher-Yates
    const int j =
        k + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - k)));
    std::swap(perm[k], perm[j]);
  }
  instance.anchors.assign(perm.begin(), perm.begin() + num_anchors);
  std::sort(instance.anchors.begin(), instance.anchors.end());
  return instance;
}

double langevin_normalizer(double beta) {
  if (!(beta >= 0.0 && beta <= 50.0)) {
    throw DomainError("langevin_normalizer: beta must lie in [0, 50]");
  }
  return std::exp(beta) * (bessel_I(0, 2.0 * beta) - bessel_I(1, 2.0 * beta));
}

Eigen::Matrix3d langevin_sample(double beta, const Eigen::Matrix3d& mean,
                                Rng& rng) {
  if (!(beta >= 0.0 && beta <= 50.0)) {
    throw DomainError("langevin_sample: beta must lie in [0, 50]");
  }
  constexpr long long kBudget = 10'000'000;
  if (mean.isIdentity(0.0)) {
    // <R, I> = tr(R) = 4w^2 - 1 for the rotation of a unit quaternion
    // (w, x, y, z), so the acceptance test needs only the quaternion; the
    // matrix is built for accepted proposals alone.  Acceptance at high beta
    // is ~exp(-beta/4)-rare, which makes this the sampler's hot path.
    for (long long attempt = 0; attempt < kBudget; ++attempt) {
      double w, x, y, z, norm2;
      do {
        w = rng.gaussian();
        x = rng.gaussian();
        y = rng.gaussian();
        z = rng.gaussian();
        norm2 = w * w + x * x + y * y + z * z;
      } while (norm2 < 1e-24);
      const double trace_gap = 4.0 * (w * w / norm2 - 1.0);  // <R,I> - 3
      const double t = beta * trace_gap;                     // <= 0
      const double u = rng.uniform();
      // exp(t) <= 1/(1-t) for t <= 0, so u*(1-t) >= 1 rejects without exp().
      if (u * (1.0 - t) >= 1.0) continue;
      if (u < std::exp(t)) {
        const double s = 1.0 / std::sqrt(norm2);
        return quaternion_to_rotation(w * s, x * s, y * s, z * s);
      }
    }
  } else {
    for (long long attempt = 0; attempt < kBudget; ++attempt) {
      const Eigen::Matrix3d R = sample_haar_so3(rng);
      // <R, N> <= 3 with equality at R = N, so exp(beta(<R,N> - 3)) is a
      // valid acceptance probability.
      const double ip = R.cwiseProduct(mean).sum();
      if (rng.uniform() < std::exp(beta * (ip - 3.0))) return R;
    }
  }
  throw SamplerBudgetError(
      "langevin_sample: exceeded 1e7 proposals (beta too concentrated)");
}

Measurements generate_measurements(const SyncInstance& instance, Rng& rng) {
  Measurements Y;
  Y.reserve(instance.edges.size());
  const bool noiseless = std::isinf(instance.beta);
  for (const auto& [i, j] : instance.edges) {
    const Eigen::Matrix3d W =
        noiseless ? Eigen::Matrix3d::Identity()
                  : langevin_sample(instance.beta, instance.mean, rng);
    Y.push_back(W * instance.truth[i] * instance.truth[j].transpose());
  }
  return Y;
}

double residual(const std::vector<Eigen::Matrix3d>& R, const Measurements& Y,
                const SyncInstance& instance) {
  double sum = 0.0;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    const auto& [i, j] = instance.edges[e];
    sum += (Eigen::Matrix3d::Identity() - Y[e] * R[j] * R[i].transpose())
               .squaredNorm();
  }
  return sum;
}

std::vector<Eigen::Matrix3d> ambient_gradient(
    const std::vector<Eigen::Matrix3d>& R, const Eigen::VectorXd& lambda,
    const Measurements& Y, const SyncInstance& instance) {
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  std::vector<Eigen::Matrix3d> Z(R.size(), Eigen::Matrix3d::Zero());
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    const auto& [i, j] = instance.edges[e];
    const Eigen::Matrix3d& Yij = Y[e];
    const Eigen::Matrix3d Yji = Yij.transpose();
    Z[i] += -(I - R[i] * R[j].transpose() * Yji) * Yij * R[j] -
            Yij * (I - Yji * R[i] * R[j].transpose()) * R[j];
    Z[j] += -(I - R[j] * R[i].transpose() * Yij) * Yji * R[i] -
            Yji * (I - Yij * R[j] * R[i].transpose()) * R[i];
  }
  for (std::size_t k = 0; k < instance.anchors.size(); ++k) {
    const int a = instance.anchors[k];
    // -lambda * R0 (I - R0^T R) = lambda (R - R0): the anchor penalty pulls
    // the vertex back to its pinned rotation.
    Z[a] += -lambda[static_cast<Eigen::Index>(k)] * instance.truth[a] *
            (I - instance.truth[a].transpose() * R[a]);
  }
  return Z;
}

std::vector<Eigen::Matrix3d> sync_gradient(
    const std::vector<Eigen::Matrix3d>& R, const Eigen::VectorXd& lambda,
    const Measurements& Y, const SyncInstance& instance) {
  std::vector<Eigen::Matrix3d> Z = ambient_gradient(R, lambda, Y, instance);
  for (std::size_t i = 0; i < R.size(); ++i) {
    Z[i] = so3::project_tangent(R[i], Z[i]);
  }
  return Z;
}

SyncResult sync_run(const SyncInstance& instance, long long T, double eta,
                    double alpha, Rng& rng, const SyncOptions& options) {
  if (!(eta > 0.0)) throw DomainError("sync_run: eta must be > 0");
  if (alpha < 0.0 || eta * alpha > 1.0) {
    throw DomainError("sync_run: requires alpha >= 0 and eta*alpha <= 1");
  }
  const int n = instance.n;
  const int m = static_cast<int>(instance.anchors.size());

  ConstrainedProblem<RotationPower> problem;
  problem.manifold = RotationPower{RotationManifold{}, n};
  problem.sense = Sense::minimize;
  problem.alpha = alpha;
  problem.num_constraints = m;

  Measurements fixed;
  problem.sample_objective =
      [&](const std::vector<Eigen::Matrix3d>& R, long long,
          Rng& step_rng) -> std::pair<double, std::vector<Eigen::Matrix3d>> {
    const Measurements Y = options.fixed_measurements
                               ? fixed
                               : generate_measurements(instance, step_rng);
    // The Lagrangian objective part carries no lambda weight here; the
    // anchor penalty enters through constraint_gradient below.
    return {residual(R, Y, instance),
            ambient_gradient(R, Eigen::VectorXd::Zero(m), Y, instance)};
  };
  problem.constraint_values = [&](const std::vector<Eigen::Matrix3d>& R) {
    Eigen::VectorXd h(m);
    for (int k = 0; k < m; ++k) {
      const int a = instance.anchors[k];
      h[k] = so3::frobenius_distance_squared(R[a], instance.truth[a]) -
             instance.anchor_slack;
    }
    return h;
  };
  problem.constraint_gradient = [&](const std::vector<Eigen::Matrix3d>& R,
                                    const Eigen::VectorXd& w) {
    // w_k * grad of the halved penalty ||R_a - R0_a||_F^2 / 2
    // = w_k (R_a - R0_a), the anchor term of the printed Lagrangian
    // gradient; the dual update still sees the full squared distance
    // through constraint_values.
    std::vector<Eigen::Matrix3d> Z(R.size(), Eigen::Matrix3d::Zero());
    for (int k = 0; k < m; ++k) {
      const int a = instance.anchors[k];
      Z[a] = w[k] * (R[a] - instance.truth[a]);
    }
    return Z;
  };

  std::vector<Eigen::Matrix3d> x0;
  x0.reserve(n);
  for (int i = 0; i < n; ++i) x0.push_back(sample_haar_so3(rng));
  if (options.fixed_measurements) fixed = generate_measurements(instance, rng);

  Monitors monitors;
  monitors.dual_cap_check = alpha > 0.0;
  monitors.constraint_bound = 8.0;  // ||R - R0||_F^2 = 4(1 - cos d) <= 8

  SyncResult out;
  out.frob_errors.reserve(static_cast<std::size_t>(T > 0 ? T : 0));
  RunHooks<RotationPower> hooks;
  hooks.observer = [&](const SolverState<RotationPower>& state,
                       const StepRecord&) {
    std::vector<double> errs(n);
    for (int i = 0; i < n; ++i) {
      errs[i] = (state.x[i] - instance.truth[i]).norm();
    }
    out.frob_errors.push_back(std::move(errs));
  };

  auto result = run(problem, std::move(x0), StepSchedule::constant(eta), T,
                    rng, monitors, std::move(hooks));
  out.rotations = std::move(result.state.x);
  out.lambda = std::move(result.state.lambda);
  out.residuals.reserve(result.trace.steps.size());
  for (const auto& step : result.trace.steps) {
    out.residuals.push_back(step.objective);
  }
  out.trace = std::move(result.trace);
  return out;
}

}  // namespace sync
}  // namespace rpd
