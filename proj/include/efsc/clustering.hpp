// Approximate k-means / k-medians solvers with restarts, the two
// end-to-end edge-flip spectral clustering pipelines, and a brute-force
// enumeration oracle for small instances.
#pragma once

#include <Eigen/Dense>

#include "efsc/graph.hpp"
#include "efsc/privacy.hpp"
#include "efsc/rng.hpp"

namespace efsc {

struct ClusterConfig {
    int k = 2;
    int restarts = 20;
    int max_iterations = 300;
    double tolerance = 1e-9;  // relative objective-change stop threshold
    double gamma = 0.05;      // declared approximation budget (reporting only)
};

struct ClusterResult {
    LabelVector labels;
    Eigen::MatrixXd centroids;  // k x d
    double objective = 0;       // squared Frobenius (k-means) or (2,1)-norm (k-medians)
};

// k-means++ seeding followed by Lloyd iterations; empty clusters repaired
// by reseeding at the point farthest from its assigned centroid; best of
// config.restarts.
ClusterResult kmeans(const Eigen::MatrixXd& points, const ClusterConfig& config, RngStream& rng);

// Alternating minimization with geometric-median centroid updates
// (modified Weiszfeld, tol 1e-9, max 200 steps).
ClusterResult kmedians(const Eigen::MatrixXd& points, const ClusterConfig& config, RngStream& rng);

// Algorithm: downshift -> leading-k embedding -> k-means on the rows.
LabelVector ef_spectral_kmeans(const Graph& graph, int k, double gamma, PrivacyBudget budget,
                               ClusterConfig config, RngStream& rng);

// Algorithm: downshift -> embedding -> row-normalize over non-zero rows ->
// k-medians; zero rows receive label 1.
LabelVector ef_spectral_kmedians(const Graph& graph, int k, double gamma, PrivacyBudget budget,
                                 ClusterConfig config, RngStream& rng);

enum class Objective { kmeans, kmedians };

// Global optimum by enumeration of all partitions into at most k parts;
// m <= 12 points.
ClusterResult brute_force_cluster(const Eigen::MatrixXd& points, int k, Objective objective);

// Geometric median of the rows of `points` (modified Weiszfeld).
Eigen::VectorXd geometric_median(const Eigen::MatrixXd& points, double tol = 1e-9,
                                 int max_steps = 200);

}  // namespace efsc
