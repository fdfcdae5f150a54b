// maxcut.hpp: constrained weighted MAX-CUT by manifold optimization —
// hyperplane rounding of sphere embeddings and distance rounding of sphere
// or SO(3) embeddings, with brute-force verification at desk scale.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "rpd/manifolds.hpp"
#include "rpd/rng.hpp"
#include "rpd/solver.hpp"

namespace rpd {
namespace maxcut {

struct WeightedGraph {
  struct Edge {
    int i = 0;
    int j = 0;
    double w = 0.0;
  };
  int n = 0;
  std::vector<Edge> edges;                  ///< i < j, w >= 0
  std::vector<std::pair<int, int>> forced;  ///< edge subset to separate, i < j
};

/// Connected G(n, p) with i.i.d. folded-Gaussian |N(0,1)| weights; redraws
/// the edge set until connected (max_attempts).
/// @throws DomainError / Error as in connected_erdos_renyi_edges
WeightedGraph er_weighted_graph(int n, double p, Rng& rng,
                                int max_attempts = 1000);

/// Mark k distinct edges (seeded choice) as the forced subset.
/// @throws DomainError when k exceeds the edge count
void choose_forced_edges(WeightedGraph& graph, int k, Rng& rng);

/// Total weight of edges crossing the bipartition (in_s[v] says v in S).
double cut_value(const WeightedGraph& graph, const std::vector<bool>& in_s);

struct Cut {
  std::vector<bool> in_s;
  double value = 0.0;  ///< recomputed with cut_value on construction
};

/// Exhaustive maximization over bipartitions (vertex 0 fixed outside S).
/// With respect_forced, bipartitions that fail to separate every forced edge
/// are skipped.
/// @throws DomainError when n > 20
Cut brute_force_optimum(const WeightedGraph& graph,
                        bool respect_forced = false);

struct SphereEmbedding {
  std::vector<Eigen::VectorXd> sigma;  ///< unit vectors in R^{d+1}
  Eigen::VectorXd lambda;              ///< dual per forced edge, >= 0
};

struct So3Embedding {
  std::vector<Eigen::Matrix3d> sigma;
  Eigen::VectorXd lambda;
};

struct SolveReport {
  long long iterations = 0;  ///< primal-dual updates performed
  double delta1 = 0.0;       ///< terminal constraint-violation metric
  double delta2 = 0.0;       ///< terminal gradient-norm metric
  bool converged = false;    ///< false when stopped by the iteration cap
  bool perturbed = false;    ///< the degenerate-start escape hatch fired
  long long dual_cap_violations = 0;
};

/// Relaxed objective (1/2n) sum omega_ij (1 - <sigma_i, sigma_j>).
double hyperplane_objective(const SphereEmbedding& embedding,
                            const WeightedGraph& graph);

/// Normalized distance objectives (1/n pi) sum omega_ij d(sigma_i, sigma_j).
double distance_objective(const SphereEmbedding& embedding,
                          const WeightedGraph& graph);
double distance_objective(const So3Embedding& embedding,
                          const WeightedGraph& graph);

/// Full Lagrangian ascent fields — the per-vertex tangent directions the
/// solvers step along, exposed for diagnostics and derivative checks.
/// Hyperplane mode: X_i = (1/2n) sum_j w_ij (sigma_i <.,.> - sigma_j)
///                        + 2 sum_forced lambda_ij (sigma_i <.,.> - sigma_j).
/// Distance mode:   X_i = sum_j c_ij (-log_{sigma_i}(sigma_j) / d), with
///                  coincident and near-antipodal pairs contributing zero.
std::vector<Eigen::VectorXd> hyperplane_gradient(
    const SphereEmbedding& embedding, const WeightedGraph& graph);
std::vector<Eigen::VectorXd> distance_gradient(
    const SphereEmbedding& embedding, const WeightedGraph& graph);
std::vector<Eigen::Matrix3d> distance_gradient(const So3Embedding& embedding,
                                               const WeightedGraph& graph);

/// Hyperplane-mode stopping metrics:
///   delta1 = || positive parts of (1 + <sigma_i, sigma_j>) over forced ||
///            / sqrt(|forced|)   (0 when no forced edges)
///   delta2 = || stacked tangent Lagrangian gradient ||_F / sqrt(n)
std::pair<double, double> stopping_metrics(const SphereEmbedding& embedding,
                                           const WeightedGraph& graph);

/// Distance-mode stopping metrics: delta1 uses (pi - d) over forced pairs,
/// delta2 as above for the distance-mode direction field.
std::pair<double, double> distance_stopping_metrics(
    const SphereEmbedding& embedding, const WeightedGraph& graph);
std::pair<double, double> distance_stopping_metrics(
    const So3Embedding& embedding, const WeightedGraph& graph);

/// Primal-dual ascent on (S^d)^n for the relaxed objective with per-vertex
/// direction
///   X_i = (1/2n) sum_j w_ij (sigma_i <sigma_i,sigma_j> - sigma_j)
///         + 2 sum_{forced (i,j)} lambda_ij (sigma_i <sigma_i,sigma_j> - sigma_j)
/// and dual update lambda <- max(0, lambda + eta (1 + <sigma_i,sigma_j>)
/// - eta alpha lambda).  Stops once delta1 <= tol1 and delta2 <= tol2, or at
/// max_iter (flagged in the report, not an error).  Per-vertex steps are
/// clipped to the injectivity radius.  `initial` warm-starts the points
/// (duals always start at zero); by default the start is uniform random.
/// @throws DomainError when d < 2 or the warm start has the wrong size
SphereEmbedding hyperplane_pd_solve(const WeightedGraph& graph, int d,
                                    double alpha, const StepSchedule& schedule,
                                    double tol1, double tol2,
                                    long long max_iter, Rng& rng,
                                    SolveReport* report = nullptr,
                                    const SphereEmbedding* initial = nullptr);

/// Best cut over N hyperplane roundings: S_k = {i : <sigma_i, u_k> >= 0}
/// (ties to S) for uniform u_k, ranked by cut_value.
Cut hyperplane_round(const SphereEmbedding& embedding,
                     const WeightedGraph& graph, int N, Rng& rng);

/// Distance-mode primal-dual ascent with per-vertex direction
///   X_i = sum_j c_ij (-log_{sigma_i}(sigma_j) / d(sigma_i, sigma_j)),
///   c_ij = w_ij/(n pi) + lambda_ij [forced edge],
/// where pairs within kAntipodalTol of the diameter (or exactly coincident)
/// contribute zero, and dual update lambda <- max(0, lambda + eta (pi - d)
/// - eta alpha lambda).
/// @throws DomainError when d < 2 or the warm start has the wrong size
SphereEmbedding distance_pd_solve_sphere(
    const WeightedGraph& graph, int d, double alpha,
    const StepSchedule& schedule, double tol1, double tol2, long long max_iter,
    Rng& rng, SolveReport* report = nullptr,
    const SphereEmbedding* initial = nullptr);
So3Embedding distance_pd_solve_so3(const WeightedGraph& graph, double alpha,
                                   const StepSchedule& schedule, double tol1,
                                   double tol2, long long max_iter, Rng& rng,
                                   SolveReport* report = nullptr,
                                   const So3Embedding* initial = nullptr);

/// Best cut over N distance roundings: S_k = {i : d(sigma_i, u_k) <= pi/2}
/// (ties to S) for uniform/Haar reference points u_k.
Cut distance_round(const SphereEmbedding& embedding, const WeightedGraph& graph,
                   int N, Rng& rng);
Cut distance_round(const So3Embedding& embedding, const WeightedGraph& graph,
                   int N, Rng& rng);

/// Parse / serialize the edge-list format: one "i j weight" line per edge
/// plus "#forced i j" lines for the forced subset; other #-lines are
/// comments.  Vertex count is one plus the largest index seen.
/// @throws ParseError on malformed content
WeightedGraph parse_graph_file(const std::string& path);
std::string graph_to_string(const WeightedGraph& graph);

/// Default step schedule: eta = 1 up to iteration 1000, then 1/100.
StepSchedule default_schedule();

}  // namespace maxcut
}  // namespace rpd
