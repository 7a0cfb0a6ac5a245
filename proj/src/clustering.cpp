#include "efsc/clustering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "efsc/spectral.hpp"

namespace efsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// nearest centroid in l2; ties break toward the lower cluster index
int nearest(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& x, int k) {
    int best = 0;
    double best_d = (x - centroids.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
        double d = (x - centroids.row(c)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& points, int k, RngStream& rng) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<int>(rng.uniform_int(n)));
    Eigen::VectorXd dist2(n);
    for (int i = 0; i < n; ++i) dist2[i] = (points.row(i) - centroids.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
        double total = dist2.sum();
        int pick;
        if (total <= 0) {
            pick = static_cast<int>(rng.uniform_int(n));
        } else {
            double u = rng.uniform() * total;
            pick = n - 1;
            double acc = 0;
            for (int i = 0; i < n; ++i) {
                acc += dist2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.row(c) = points.row(pick);
        for (int i = 0; i < n; ++i)
            dist2[i] = std::min(dist2[i], (points.row(i) - centroids.row(c)).squaredNorm());
    }
    return centroids;
}

// reseed each empty cluster at the point farthest from its assigned centroid
void repair_empty(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids,
                  std::vector<int>& assign, std::vector<int>& counts, int k) {
    const int n = static_cast<int>(points.rows());
    for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        int far = -1;
        double far_d = -1;
        for (int i = 0; i < n; ++i) {
            if (counts[assign[i]] <= 1) continue;
            double d = (points.row(i) - centroids.row(assign[i])).squaredNorm();
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far < 0) continue;
        --counts[assign[far]];
        centroids.row(c) = points.row(far);
        assign[far] = c;
        ++counts[c];
    }
}

template <typename UpdateCentroids, typename PointCost>
ClusterResult cluster_restart(const Eigen::MatrixXd& points, const ClusterConfig& config,
                              RngStream rng, UpdateCentroids update, PointCost cost) {
    const int n = static_cast<int>(points.rows());
    const int k = config.k;
    Eigen::MatrixXd centroids = kmeanspp_seed(points, k, rng);
    std::vector<int> assign(n, 0), counts(k, 0);
    double prev_obj = kInf;
    double obj = kInf;
    for (int it = 0; it < config.max_iterations; ++it) {
        std::fill(counts.begin(), counts.end(), 0);
        obj = 0;
        for (int i = 0; i < n; ++i) {
            assign[i] = nearest(centroids, points.row(i), k);
            ++counts[assign[i]];
        }
        repair_empty(points, centroids, assign, counts, k);
        update(points, assign, counts, centroids);
        for (int i = 0; i < n; ++i) obj += cost(points.row(i), centroids.row(assign[i]));
        if (prev_obj < kInf) {
            double rel = std::abs(prev_obj - obj) / std::max(prev_obj, 1e-300);
            if (rel < config.tolerance) break;
        }
        prev_obj = obj;
    }
    // final assignment against the final centroids
    obj = 0;
    for (int i = 0; i < n; ++i) {
        assign[i] = nearest(centroids, points.row(i), k);
        obj += cost(points.row(i), centroids.row(assign[i]));
    }
    ClusterResult res;
    res.labels.k = k;
    res.labels.labels.resize(n);
    for (int i = 0; i < n; ++i) res.labels.labels[i] = assign[i] + 1;
    res.centroids = std::move(centroids);
    res.objective = obj;
    return res;
}

template <typename UpdateCentroids, typename PointCost>
ClusterResult cluster_with_restarts(const Eigen::MatrixXd& points, const ClusterConfig& config,
                                    RngStream& rng, UpdateCentroids update, PointCost cost) {
    if (config.restarts < 1) throw std::invalid_argument("clustering: restarts must be >= 1");
    if (points.rows() < config.k)
        throw std::invalid_argument("clustering: fewer points than clusters");
    ClusterResult best;
    best.objective = kInf;
    for (int r = 0; r < config.restarts; ++r) {
        ClusterResult cur = cluster_restart(points, config, rng.substream(r), update, cost);
        if (cur.objective < best.objective) best = std::move(cur);
    }
    return best;
}

double sq_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).squaredNorm();
}
double l2_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) { return (a - b).norm(); }

void mean_update(const Eigen::MatrixXd& points, const std::vector<int>& assign,
                 const std::vector<int>& counts, Eigen::MatrixXd& centroids) {
    centroids.setZero();
    for (int i = 0; i < points.rows(); ++i) centroids.row(assign[i]) += points.row(i);
    for (int c = 0; c < centroids.rows(); ++c)
        if (counts[c] > 0) centroids.row(c) /= counts[c];
}

void median_update(const Eigen::MatrixXd& points, const std::vector<int>& assign,
                   const std::vector<int>& counts, Eigen::MatrixXd& centroids) {
    const int k = static_cast<int>(centroids.rows());
    for (int c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        Eigen::MatrixXd member(counts[c], points.cols());
        int m = 0;
        for (int i = 0; i < points.rows(); ++i)
            if (assign[i] == c) member.row(m++) = points.row(i);
        centroids.row(c) = geometric_median(member).transpose();
    }
}

}  // namespace

Eigen::VectorXd geometric_median(const Eigen::MatrixXd& points, double tol, int max_steps) {
    const int n = static_cast<int>(points.rows());
    if (n == 0) throw std::invalid_argument("geometric_median: no points");
    if (n == 1) return points.row(0).transpose();
    Eigen::RowVectorXd y = points.colwise().mean();
    for (int step = 0; step < max_steps; ++step) {
        Eigen::RowVectorXd weighted = Eigen::RowVectorXd::Zero(points.cols());
        Eigen::RowVectorXd pull = Eigen::RowVectorXd::Zero(points.cols());
        double wsum = 0;
        int coincident = 0;
        for (int i = 0; i < n; ++i) {
            double d = (points.row(i) - y).norm();
            if (d < 1e-12) {
                ++coincident;
                continue;
            }
            weighted += points.row(i) / d;
            pull += (points.row(i) - y) / d;
            wsum += 1.0 / d;
        }
        if (wsum == 0) return y.transpose();  // all points at y
        Eigen::RowVectorXd t = weighted / wsum;
        Eigen::RowVectorXd next;
        if (coincident > 0) {
            // modified Weiszfeld subgradient step at a data point
            double r = pull.norm();
            if (r <= coincident) return y.transpose();
            double lam = std::min(1.0, coincident / r);
            next = (1.0 - lam) * t + lam * y;
        } else {
            next = t;
        }
        double moved = (next - y).norm();
        y = next;
        if (moved < tol) break;
    }
    return y.transpose();
}

ClusterResult kmeans(const Eigen::MatrixXd& points, const ClusterConfig& config, RngStream& rng) {
    return cluster_with_restarts(points, config, rng, mean_update, sq_dist);
}

ClusterResult kmedians(const Eigen::MatrixXd& points, const ClusterConfig& config,
                       RngStream& rng) {
    return cluster_with_restarts(points, config, rng, median_update, l2_dist);
}

LabelVector ef_spectral_kmeans(const Graph& graph, int k, double gamma, PrivacyBudget budget,
                               ClusterConfig config, RngStream& rng) {
    config.k = k;
    config.gamma = gamma;
    Embedding emb = spectral_embed(graph, k, budget);
    return kmeans(emb.vectors, config, rng).labels;
}

LabelVector ef_spectral_kmedians(const Graph& graph, int k, double gamma, PrivacyBudget budget,
                                 ClusterConfig config, RngStream& rng) {
    config.k = k;
    config.gamma = gamma;
    Embedding emb = spectral_embed(graph, k, budget);
    auto [normalized, index_map] = row_normalize(emb);
    LabelVector out;
    out.k = k;
    out.labels.assign(graph.node_count(), 1);  // zero rows default to block 1
    if (normalized.rows() >= k) {
        ClusterResult inner = kmedians(normalized, config, rng);
        for (int i = 0; i < static_cast<int>(index_map.size()); ++i)
            out.labels[index_map[i]] = inner.labels.labels[i];
    }
    return out;
}

ClusterResult brute_force_cluster(const Eigen::MatrixXd& points, int k, Objective objective) {
    const int m = static_cast<int>(points.rows());
    if (m > 12) throw std::invalid_argument("brute_force_cluster: at most 12 points");
    if (m < 1 || k < 1) throw std::invalid_argument("brute_force_cluster: empty instance");

    std::vector<int> assign(m, 0), best_assign;
    double best_obj = kInf;

    auto evaluate = [&](int parts) {
        Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<int> counts(parts, 0);
        for (int i = 0; i < m; ++i) ++counts[assign[i]];
        double obj = 0;
        for (int c = 0; c < parts; ++c) {
            Eigen::MatrixXd member(counts[c], points.cols());
            int t = 0;
            for (int i = 0; i < m; ++i)
                if (assign[i] == c) member.row(t++) = points.row(i);
            Eigen::RowVectorXd center;
            if (objective == Objective::kmeans)
                center = member.colwise().mean();
            else
                center = geometric_median(member, 1e-12, 500).transpose();
            centroids.row(c) = center;
            for (int i = 0; i < counts[c]; ++i) {
                if (objective == Objective::kmeans)
                    obj += (member.row(i) - center).squaredNorm();
                else
                    obj += (member.row(i) - center).norm();
            }
        }
        if (obj < best_obj) {
            best_obj = obj;
            best_assign = assign;
        }
    };

    // restricted-growth enumeration of partitions into at most k parts
    auto recurse = [&](auto&& self, int i, int used) -> void {
        if (i == m) {
            evaluate(used);
            return;
        }
        for (int c = 0; c < used; ++c) {
            assign[i] = c;
            self(self, i + 1, used);
        }
        if (used < k) {
            assign[i] = used;
            self(self, i + 1, used + 1);
        }
    };
    recurse(recurse, 0, 0);

    ClusterResult res;
    res.labels.k = k;
    res.labels.labels.resize(m);
    for (int i = 0; i < m; ++i) res.labels.labels[i] = best_assign[i] + 1;
    res.objective = best_obj;
    // recompute centroids of the winning partition
    res.centroids = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < m; ++i) ++counts[best_assign[i]];
    for (int c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        Eigen::MatrixXd member(counts[c], points.cols());
        int t = 0;
        for (int i = 0; i < m; ++i)
            if (best_assign[i] == c) member.row(t++) = points.row(i);
        if (objective == Objective::kmeans)
            res.centroids.row(c) = member.colwise().mean();
        else
            res.centroids.row(c) = geometric_median(member, 1e-12, 500).transpose();
    }
    return res;
}

}  // namespace efsc
