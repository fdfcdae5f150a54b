#include "rpd/maxcut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rpd/errors.hpp"
#include "rpd/graphs.hpp"
#include "rpd/numerics.hpp"
#include "rpd/parallel.hpp"

namespace rpd {
namespace maxcut {

namespace {

double total_weight(const WeightedGraph& graph) {
  double s = 0.0;
  for (const auto& e : graph.edges) s += e.w;
  return s;
}

void check_vertex(const WeightedGraph& graph, int v, const char* where) {
  if (v < 0 || v >= graph.n) {
    throw DomainError(std::string(where) + ": vertex index " +
                      std::to_string(v) + " out of range [0, " +
                      std::to_string(graph.n) + ")");
  }
}

void validate_graph(const WeightedGraph& graph, const char* where) {
  if (graph.n < 1) {
    throw DomainError(std::string(where) + ": graph must have n >= 1");
  }
  for (const auto& e : graph.edges) {
    check_vertex(graph, e.i, where);
    check_vertex(graph, e.j, where);
    if (e.i == e.j) {
      throw DomainError(std::string(where) + ": self-loop at vertex " +
                        std::to_string(e.i));
    }
    if (!(e.w >= 0.0)) {
      throw DomainError(std::string(where) + ": negative or NaN weight on (" +
                        std::to_string(e.i) + ", " + std::to_string(e.j) +
                        ")");
    }
  }
  for (const auto& [i, j] : graph.forced) {
    check_vertex(graph, i, where);
    check_vertex(graph, j, where);
    if (i == j) {
      throw DomainError(std::string(where) + ": forced self-pair at vertex " +
                        std::to_string(i));
    }
  }
}

// --- manifold adapters used by the distance-mode template ------------------

struct SphereOps {
  using Point = Eigen::VectorXd;
  using Embedding = SphereEmbedding;
  static double dist(const Point& a, const Point& b) {
    return sphere::distance(a, b);
  }
  static Point log(const Point& a, const Point& b) {
    return sphere::log_map(a, b);
  }
  static Point exp(const Point& x, const Point& v) {
    return sphere::exp_map(x, v);
  }
  static void renormalize(Point& x) { x.normalize(); }
  static double tangent_norm(const Point& v) { return v.norm(); }
  static Point random_unit_tangent(const Point& x, Rng& rng) {
    Eigen::VectorXd v = sphere::project_tangent(
        x, sample_gaussian(rng, static_cast<int>(x.size())));
    double nrm = v.norm();
    if (nrm == 0.0) return v;  // measure zero; a zero kick is harmless
    return v / nrm;
  }
};

struct So3Ops {
  using Point = Eigen::Matrix3d;
  using Embedding = So3Embedding;
  static double dist(const Point& a, const Point& b) {
    return so3::distance(a, b);
  }
  static Point log(const Point& a, const Point& b) {
    return so3::log_map(a, b);
  }
  static Point exp(const Point& x, const Point& v) {
    return so3::exp_map(x, v);
  }
  static void renormalize(Point& x) { RotationManifold{}.renormalize(x); }
  static double tangent_norm(const Point& v) { return v.norm(); }
  static Point random_unit_tangent(const Point& x, Rng& rng) {
    Eigen::Vector3d w(rng.gaussian(), rng.gaussian(), rng.gaussian());
    double nrm = w.norm();
    if (nrm == 0.0) return Point::Zero();
    // ||R hat(w)||_F = sqrt(2) |w|; normalize to unit Frobenius norm.
    return x * so3::hat(w / (nrm * std::sqrt(2.0)));
  }
};

// --- direction fields -------------------------------------------------------

// Full Lagrangian ascent direction for the hyperplane relaxation.
std::vector<Eigen::VectorXd> hyperplane_direction(
    const SphereEmbedding& embedding, const WeightedGraph& graph) {
  const int n = graph.n;
  const auto& sigma = embedding.sigma;
  std::vector<Eigen::VectorXd> X(n);
  for (int i = 0; i < n; ++i) X[i] = Eigen::VectorXd::Zero(sigma[i].size());
  const double inv2n = 1.0 / (2.0 * n);
  for (const auto& e : graph.edges) {
    const double dot = sigma[e.i].dot(sigma[e.j]);
    const double c = e.w * inv2n;
    X[e.i] += c * (sigma[e.i] * dot - sigma[e.j]);
    X[e.j] += c * (sigma[e.j] * dot - sigma[e.i]);
  }
  for (std::size_t k = 0; k < graph.forced.size(); ++k) {
    const auto [i, j] = graph.forced[k];
    const double lam = embedding.lambda(static_cast<Eigen::Index>(k));
    const double dot = sigma[i].dot(sigma[j]);
    X[i] += 2.0 * lam * (sigma[i] * dot - sigma[j]);
    X[j] += 2.0 * lam * (sigma[j] * dot - sigma[i]);
  }
  return X;
}

// Full Lagrangian ascent direction for the distance relaxation.  Pairs at
// (or numerically past) the cut locus and exactly coincident pairs
// contribute zero.
template <class Ops>
std::vector<typename Ops::Point> distance_direction(
    const typename Ops::Embedding& embedding, const WeightedGraph& graph) {
  const int n = graph.n;
  const auto& sigma = embedding.sigma;
  using Point = typename Ops::Point;
  std::vector<Point> X(n);
  for (int i = 0; i < n; ++i) {
    X[i] = sigma[i];
    X[i].setZero();
  }
  auto add_pair = [&](int i, int j, double c) {
    const double d = Ops::dist(sigma[i], sigma[j]);
    if (d < 1e-12 || d > kPi - kAntipodalTol) return;
    X[i] += (-c / d) * Ops::log(sigma[i], sigma[j]);
    X[j] += (-c / d) * Ops::log(sigma[j], sigma[i]);
  };
  for (const auto& e : graph.edges) add_pair(e.i, e.j, e.w / (n * kPi));
  for (std::size_t k = 0; k < graph.forced.size(); ++k) {
    const auto [i, j] = graph.forced[k];
    add_pair(i, j, embedding.lambda(static_cast<Eigen::Index>(k)));
  }
  return X;
}

template <class PointVec>
double stacked_norm(const PointVec& X) {
  double s = 0.0;
  for (const auto& x : X) s += x.squaredNorm();
  return std::sqrt(s);
}

std::pair<double, double> hyperplane_metrics(const SphereEmbedding& embedding,
                                             const WeightedGraph& graph) {
  double d1 = 0.0;
  if (!graph.forced.empty()) {
    double s = 0.0;
    for (const auto& [i, j] : graph.forced) {
      const double v =
          std::max(0.0, 1.0 + embedding.sigma[i].dot(embedding.sigma[j]));
      s += v * v;
    }
    d1 = std::sqrt(s / static_cast<double>(graph.forced.size()));
  }
  const double d2 = stacked_norm(hyperplane_direction(embedding, graph)) /
                    std::sqrt(static_cast<double>(graph.n));
  return {d1, d2};
}

template <class Ops>
std::pair<double, double> distance_metrics(
    const typename Ops::Embedding& embedding, const WeightedGraph& graph) {
  double d1 = 0.0;
  if (!graph.forced.empty()) {
    double s = 0.0;
    for (const auto& [i, j] : graph.forced) {
      const double v =
          std::max(0.0, kPi - Ops::dist(embedding.sigma[i],
                                        embedding.sigma[j]));
      s += v * v;
    }
    d1 = std::sqrt(s / static_cast<double>(graph.forced.size()));
  }
  const double d2 = stacked_norm(distance_direction<Ops>(embedding, graph)) /
                    std::sqrt(static_cast<double>(graph.n));
  return {d1, d2};
}

template <class Ops>
double distance_objective_impl(const typename Ops::Embedding& embedding,
                               const WeightedGraph& graph) {
  double s = 0.0;
  for (const auto& e : graph.edges) {
    s += e.w * Ops::dist(embedding.sigma[e.i], embedding.sigma[e.j]);
  }
  return s / (graph.n * kPi);
}

// Shared primal-dual loop.  `direction` computes the full Lagrangian ascent
// field, `metrics` the (delta1, delta2) pair, `objective` the relaxed value,
// `residual` the per-forced-pair dual increment, all from the frozen time-t
// state.  `reference` is the expected relaxed value of an independent random
// embedding: a near-stationary state whose objective sits more than 10%
// below it is treated as degenerate — a one-time 1e-6 tangent kick is
// applied and convergence withheld until the objective clears the bar
// (otherwise the kick would be followed by an immediate spurious stop, since
// amplification out of the degenerate point needs many sub-tolerance steps).
template <class Embedding, class DirectionFn, class MetricsFn,
          class ObjectiveFn, class ResidualFn, class MoveFn, class PerturbFn>
void pd_loop(Embedding& embedding, const WeightedGraph& graph, double alpha,
             const StepSchedule& schedule, double tol1, double tol2,
             long long max_iter, SolveReport* report, double G,
             double reference, DirectionFn direction, MetricsFn metrics,
             ObjectiveFn objective, ResidualFn residual, MoveFn move,
             PerturbFn perturb) {
  if (!(tol1 >= 0.0) || !(tol2 >= 0.0)) {
    throw DomainError("pd solve: tolerances must be non-negative");
  }
  if (max_iter < 0) throw DomainError("pd solve: max_iter must be >= 0");
  if (!(alpha >= 0.0)) throw DomainError("pd solve: alpha must be >= 0");

  const auto m = static_cast<Eigen::Index>(graph.forced.size());
  const double dual_cap =
      alpha > 0.0 ? std::sqrt(static_cast<double>(m)) * G / alpha + 1e-9
                  : std::numeric_limits<double>::infinity();
  SolveReport rep;
  long long it = 0;
  bool converged = false;
  double d1 = 0.0;
  double d2 = 0.0;
  while (true) {
    std::tie(d1, d2) = metrics(embedding);
    const double f = objective(embedding);
    const bool degenerate = f < 0.9 * reference;
    if (!rep.perturbed && degenerate && d2 < tol2 && it < max_iter) {
      perturb(embedding);
      rep.perturbed = true;
      continue;
    }
    if (d1 <= tol1 && d2 <= tol2 && !degenerate) {
      converged = true;
      break;
    }
    if (it >= max_iter) break;

    const double eta = schedule.at(it);
    auto X = direction(embedding);
    // Dual ascent from the frozen state, before the primal move.
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto [i, j] = graph.forced[static_cast<std::size_t>(k)];
      const double h = residual(embedding, i, j);
      embedding.lambda(k) = std::max(
          0.0, embedding.lambda(k) + eta * h - eta * alpha * embedding.lambda(k));
    }
    if (m > 0 && embedding.lambda.norm() > dual_cap) ++rep.dual_cap_violations;
    move(embedding, X, eta);
    ++it;
  }
  rep.iterations = it;
  rep.delta1 = d1;
  rep.delta2 = d2;
  rep.converged = converged;
  if (report != nullptr) *report = rep;
}

template <class Ops>
typename Ops::Embedding distance_solve(
    const WeightedGraph& graph, double alpha, const StepSchedule& schedule,
    double tol1, double tol2, long long max_iter, Rng& rng,
    SolveReport* report, typename Ops::Embedding embedding, double reference) {
  validate_graph(graph, "distance_pd_solve");
  using Point = typename Ops::Point;
  pd_loop(
      embedding, graph, alpha, schedule, tol1, tol2, max_iter, report,
      /*G=*/kPi, reference,
      [&](const typename Ops::Embedding& emb) {
        return distance_direction<Ops>(emb, graph);
      },
      [&](const typename Ops::Embedding& emb) {
        return distance_metrics<Ops>(emb, graph);
      },
      [&](const typename Ops::Embedding& emb) {
        return distance_objective_impl<Ops>(emb, graph);
      },
      [&](const typename Ops::Embedding& emb, int i, int j) {
        return kPi - Ops::dist(emb.sigma[i], emb.sigma[j]);
      },
      [&](typename Ops::Embedding& emb, const std::vector<Point>& X,
          double eta) {
        for (int i = 0; i < graph.n; ++i) {
          const double nrm = Ops::tangent_norm(X[i]);
          double scale = eta;
          if (eta * nrm > kPi) scale = kPi / nrm;
          emb.sigma[i] = Ops::exp(emb.sigma[i], scale * X[i]);
          Ops::renormalize(emb.sigma[i]);
        }
      },
      [&](typename Ops::Embedding& emb) {
        for (int i = 0; i < graph.n; ++i) {
          Point v = Ops::random_unit_tangent(emb.sigma[i], rng);
          emb.sigma[i] = Ops::exp(emb.sigma[i], 1e-6 * v);
          Ops::renormalize(emb.sigma[i]);
        }
      });
  return embedding;
}

template <class Point, class DrawFn, class DistFn>
Cut round_by_reference(const std::vector<Point>& sigma,
                       const WeightedGraph& graph, int N, Rng& rng,
                       DrawFn draw, DistFn in_s_rule) {
  if (N < 1) throw DomainError("rounding: N must be >= 1");
  std::vector<Point> refs;
  refs.reserve(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) refs.push_back(draw());
  std::vector<double> values(static_cast<std::size_t>(N));
  std::vector<std::vector<bool>> cuts(static_cast<std::size_t>(N));
  parallel_for(N, [&](int k) {
    std::vector<bool> in_s(static_cast<std::size_t>(graph.n));
    for (int i = 0; i < graph.n; ++i) {
      in_s[static_cast<std::size_t>(i)] = in_s_rule(sigma[i], refs[k]);
    }
    values[static_cast<std::size_t>(k)] = cut_value(graph, in_s);
    cuts[static_cast<std::size_t>(k)] = std::move(in_s);
  });
  int best = 0;
  for (int k = 1; k < N; ++k) {
    if (values[static_cast<std::size_t>(k)] >
        values[static_cast<std::size_t>(best)]) {
      best = k;
    }
  }
  Cut cut;
  cut.in_s = cuts[static_cast<std::size_t>(best)];
  cut.value = values[static_cast<std::size_t>(best)];
  return cut;
}

}  // namespace

WeightedGraph er_weighted_graph(int n, double p, Rng& rng, int max_attempts) {
  WeightedGraph graph;
  graph.n = n;
  const auto pairs = connected_erdos_renyi_edges(n, p, rng, max_attempts);
  graph.edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    graph.edges.push_back({i, j, std::abs(rng.gaussian())});
  }
  return graph;
}

void choose_forced_edges(WeightedGraph& graph, int k, Rng& rng) {
  if (k < 0 || static_cast<std::size_t>(k) > graph.edges.size()) {
    throw DomainError("choose_forced_edges: k must be in [0, |E|], got " +
                      std::to_string(k) + " with |E| = " +
                      std::to_string(graph.edges.size()));
  }
  std::vector<std::size_t> idx(graph.edges.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (int t = 0; t < k; ++t) {
    const std::size_t pick =
        static_cast<std::size_t>(t) +
        static_cast<std::size_t>(rng.uniform_index(
            static_cast<std::uint64_t>(idx.size() - static_cast<std::size_t>(t))));
    std::swap(idx[static_cast<std::size_t>(t)], idx[pick]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  graph.forced.clear();
  graph.forced.reserve(idx.size());
  for (std::size_t e : idx) {
    graph.forced.emplace_back(graph.edges[e].i, graph.edges[e].j);
  }
}

double cut_value(const WeightedGraph& graph, const std::vector<bool>& in_s) {
  if (in_s.size() != static_cast<std::size_t>(graph.n)) {
    throw DomainError("cut_value: indicator size " +
                      std::to_string(in_s.size()) + " != n = " +
                      std::to_string(graph.n));
  }
  double s = 0.0;
  for (const auto& e : graph.edges) {
    if (in_s[static_cast<std::size_t>(e.i)] !=
        in_s[static_cast<std::size_t>(e.j)]) {
      s += e.w;
    }
  }
  return s;
}

Cut brute_force_optimum(const WeightedGraph& graph, bool respect_forced) {
  validate_graph(graph, "brute_force_optimum");
  if (graph.n > 20) {
    throw DomainError("brute_force_optimum: n must be <= 20, got " +
                      std::to_string(graph.n));
  }
  const int n = graph.n;
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  std::vector<bool> in_s(static_cast<std::size_t>(n), false);
  bool found = false;
  Cut best;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    in_s[0] = false;  // gauge: vertex 0 stays outside S
    for (int v = 1; v < n; ++v) {
      in_s[static_cast<std::size_t>(v)] = ((mask >> (v - 1)) & 1u) != 0u;
    }
    if (respect_forced) {
      bool feasible = true;
      for (const auto& [i, j] : graph.forced) {
        if (in_s[static_cast<std::size_t>(i)] ==
            in_s[static_cast<std::size_t>(j)]) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
    }
    const double v = cut_value(graph, in_s);
    if (!found || v > best.value) {
      best.in_s = in_s;
      best.value = v;
      found = true;
    }
  }
  if (!found) {
    throw DomainError(
        "brute_force_optimum: no bipartition separates every forced edge "
        "(the forced subgraph has an odd cycle)");
  }
  return best;
}

double hyperplane_objective(const SphereEmbedding& embedding,
                            const WeightedGraph& graph) {
  double s = 0.0;
  for (const auto& e : graph.edges) {
    s += e.w * (1.0 - embedding.sigma[e.i].dot(embedding.sigma[e.j]));
  }
  return s / (2.0 * graph.n);
}

double distance_objective(const SphereEmbedding& embedding,
                          const WeightedGraph& graph) {
  return distance_objective_impl<SphereOps>(embedding, graph);
}

double distance_objective(const So3Embedding& embedding,
                          const WeightedGraph& graph) {
  return distance_objective_impl<So3Ops>(embedding, graph);
}

std::pair<double, double> stopping_metrics(const SphereEmbedding& embedding,
                                           const WeightedGraph& graph) {
  return hyperplane_metrics(embedding, graph);
}

std::pair<double, double> distance_stopping_metrics(
    const SphereEmbedding& embedding, const WeightedGraph& graph) {
  return distance_metrics<SphereOps>(embedding, graph);
}

std::pair<double, double> distance_stopping_metrics(
    const So3Embedding& embedding, const WeightedGraph& graph) {
  return distance_metrics<So3Ops>(embedding, graph);
}

namespace {

// Warm-started or uniform-random starting points; duals always start at zero.
template <class Embedding, class DrawFn>
Embedding starting_embedding(const WeightedGraph& graph,
                             const Embedding* initial, const char* where,
                             DrawFn draw) {
  Embedding embedding;
  if (initial != nullptr) {
    if (static_cast<int>(initial->sigma.size()) != graph.n) {
      throw DomainError(std::string(where) +
                        ": warm start has the wrong vertex count");
    }
    embedding.sigma = initial->sigma;
  } else {
    embedding.sigma.reserve(static_cast<std::size_t>(graph.n));
    for (int i = 0; i < graph.n; ++i) embedding.sigma.push_back(draw());
  }
  embedding.lambda =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph.forced.size()));
  return embedding;
}

}  // namespace

std::vector<Eigen::VectorXd> hyperplane_gradient(
    const SphereEmbedding& embedding, const WeightedGraph& graph) {
  validate_graph(graph, "hyperplane_gradient");
  return hyperplane_direction(embedding, graph);
}

std::vector<Eigen::VectorXd> distance_gradient(
    const SphereEmbedding& embedding, const WeightedGraph& graph) {
  validate_graph(graph, "distance_gradient");
  return distance_direction<SphereOps>(embedding, graph);
}

std::vector<Eigen::Matrix3d> distance_gradient(const So3Embedding& embedding,
                                               const WeightedGraph& graph) {
  validate_graph(graph, "distance_gradient");
  return distance_direction<So3Ops>(embedding, graph);
}

SphereEmbedding hyperplane_pd_solve(const WeightedGraph& graph, int d,
                                    double alpha, const StepSchedule& schedule,
                                    double tol1, double tol2,
                                    long long max_iter, Rng& rng,
                                    SolveReport* report,
                                    const SphereEmbedding* initial) {
  validate_graph(graph, "hyperplane_pd_solve");
  if (d < 2) {
    throw DomainError("hyperplane_pd_solve: sphere dimension d must be >= 2");
  }
  SphereEmbedding embedding =
      starting_embedding(graph, initial, "hyperplane_pd_solve",
                         [&]() { return sample_unit_sphere(rng, d + 1); });
  const double reference = total_weight(graph) / (2.0 * graph.n);
  pd_loop(
      embedding, graph, alpha, schedule, tol1, tol2, max_iter, report,
      /*G=*/2.0, reference,
      [&](const SphereEmbedding& emb) {
        return hyperplane_direction(emb, graph);
      },
      [&](const SphereEmbedding& emb) {
        return hyperplane_metrics(emb, graph);
      },
      [&](const SphereEmbedding& emb) {
        return hyperplane_objective(emb, graph);
      },
      [&](const SphereEmbedding& emb, int i, int j) {
        return 1.0 + emb.sigma[i].dot(emb.sigma[j]);
      },
      [&](SphereEmbedding& emb, const std::vector<Eigen::VectorXd>& X,
          double eta) {
        for (int i = 0; i < graph.n; ++i) {
          const double nrm = X[i].norm();
          double scale = eta;
          if (eta * nrm > kPi) scale = kPi / nrm;
          emb.sigma[i] = sphere::exp_map(emb.sigma[i], scale * X[i]);
          emb.sigma[i].normalize();
        }
      },
      [&](SphereEmbedding& emb) {
        for (int i = 0; i < graph.n; ++i) {
          Eigen::VectorXd v = SphereOps::random_unit_tangent(emb.sigma[i], rng);
          emb.sigma[i] = sphere::exp_map(emb.sigma[i], 1e-6 * v);
          emb.sigma[i].normalize();
        }
      });
  return embedding;
}

Cut hyperplane_round(const SphereEmbedding& embedding,
                     const WeightedGraph& graph, int N, Rng& rng) {
  validate_graph(graph, "hyperplane_round");
  const int dim = static_cast<int>(embedding.sigma.at(0).size());
  return round_by_reference<Eigen::VectorXd>(
      embedding.sigma, graph, N, rng,
      [&]() { return sample_unit_sphere(rng, dim); },
      [](const Eigen::VectorXd& s, const Eigen::VectorXd& u) {
        return s.dot(u) >= 0.0;  // ties go to S
      });
}

SphereEmbedding distance_pd_solve_sphere(const WeightedGraph& graph, int d,
                                         double alpha,
                                         const StepSchedule& schedule,
                                         double tol1, double tol2,
                                         long long max_iter, Rng& rng,
                                         SolveReport* report,
                                         const SphereEmbedding* initial) {
  if (d < 2) {
    throw DomainError(
        "distance_pd_solve_sphere: sphere dimension d must be >= 2");
  }
  validate_graph(graph, "distance_pd_solve_sphere");
  SphereEmbedding embedding =
      starting_embedding(graph, initial, "distance_pd_solve_sphere",
                         [&]() { return sample_unit_sphere(rng, d + 1); });
  // E[d] = pi/2 for independent uniform points on the sphere.
  const double reference = total_weight(graph) / (2.0 * graph.n);
  return distance_solve<SphereOps>(graph, alpha, schedule, tol1, tol2,
                                   max_iter, rng, report, std::move(embedding),
                                   reference);
}

So3Embedding distance_pd_solve_so3(const WeightedGraph& graph, double alpha,
                                   const StepSchedule& schedule, double tol1,
                                   double tol2, long long max_iter, Rng& rng,
                                   SolveReport* report,
                                   const So3Embedding* initial) {
  validate_graph(graph, "distance_pd_solve_so3");
  So3Embedding embedding =
      starting_embedding(graph, initial, "distance_pd_solve_so3",
                         [&]() { return sample_haar_so3(rng); });
  // E[d] = pi/2 + 2/pi for independent Haar rotations.
  const double reference =
      total_weight(graph) * (kPi / 2.0 + 2.0 / kPi) / (graph.n * kPi);
  return distance_solve<So3Ops>(graph, alpha, schedule, tol1, tol2, max_iter,
                                rng, report, std::move(embedding), reference);
}

Cut distance_round(const SphereEmbedding& embedding, const WeightedGraph& graph,
                   int N, Rng& rng) {
  validate_graph(graph, "distance_round");
  const int dim = static_cast<int>(embedding.sigma.at(0).size());
  return round_by_reference<Eigen::VectorXd>(
      embedding.sigma, graph, N, rng,
      [&]() { return sample_unit_sphere(rng, dim); },
      [](const Eigen::VectorXd& s, const Eigen::VectorXd& u) {
        return sphere::distance(s, u) <= kPi / 2.0;  // ties go to S
      });
}

Cut distance_round(const So3Embedding& embedding, const WeightedGraph& graph,
                   int N, Rng& rng) {
  validate_graph(graph, "distance_round");
  return round_by_reference<Eigen::Matrix3d>(
      embedding.sigma, graph, N, rng, [&]() { return sample_haar_so3(rng); },
      [](const Eigen::Matrix3d& s, const Eigen::Matrix3d& u) {
        return so3::distance(s, u) <= kPi / 2.0;  // ties go to S
      });
}

WeightedGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  WeightedGraph graph;
  int max_vertex = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank line
    auto fail = [&](const std::string& why) -> ParseError {
      return ParseError(path + ":" + std::to_string(line_no) + ": " + why);
    };
    if (first == "#forced") {
      int i = 0;
      int j = 0;
      if (!(ss >> i >> j)) throw fail("expected '#forced i j'");
      if (i < 0 || j < 0 || i == j) {
        throw fail("invalid forced pair indices");
      }
      if (i > j) std::swap(i, j);
      graph.forced.emplace_back(i, j);
      max_vertex = std::max({max_vertex, i, j});
    } else if (first[0] == '#') {
      continue;  // comment
    } else {
      int i = 0;
      int j = 0;
      double w = 0.0;
      std::istringstream es(line);
      if (!(es >> i >> j >> w)) throw fail("expected 'i j weight'");
      if (i < 0 || j < 0) throw fail("negative vertex index");
      if (i == j) throw fail("self-loop");
      if (!(w >= 0.0)) throw fail("weight must be non-negative and finite");
      if (i > j) std::swap(i, j);
      graph.edges.push_back({i, j, w});
      max_vertex = std::max({max_vertex, i, j});
    }
  }
  if (max_vertex < 0) throw ParseError(path + ": no edges in graph file");
  graph.n = max_vertex + 1;
  return graph;
}

std::string graph_to_string(const WeightedGraph& graph) {
  std::string out;
  char buf[64];
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "%.17g", e.w);
    out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + buf + "\n";
  }
  for (const auto& [i, j] : graph.forced) {
    out += "#forced " + std::to_string(i) + " " + std::to_string(j) + "\n";
  }
  return out;
}

StepSchedule default_schedule() {
  return StepSchedule::piecewise({{1001, 1.0}}, 0.01);
}

}  // namespace maxcut
}  // namespace rpd
