#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "efsc/block_models.hpp"
#include "efsc/clustering.hpp"
#include "efsc/metrics.hpp"

using namespace efsc;

namespace {

Eigen::MatrixXd separated_blobs(int per_cluster, int k, double spread, RngStream& rng) {
    Eigen::MatrixXd pts(per_cluster * k, 2);
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < per_cluster; ++i) {
            pts(c * per_cluster + i, 0) = 10.0 * c + rng.uniform(-spread, spread);
            pts(c * per_cluster + i, 1) = rng.uniform(-spread, spread);
        }
    return pts;
}

LabelVector blob_truth(int per_cluster, int k) {
    LabelVector lv;
    lv.k = k;
    for (int c = 0; c < k; ++c) lv.labels.insert(lv.labels.end(), per_cluster, c + 1);
    return lv;
}

}  // namespace

TEST_CASE("kmeans recovers well-separated clusters exactly") {
    RngStream rng(1);
    Eigen::MatrixXd pts = separated_blobs(20, 3, 0.5, rng);
    ClusterConfig cfg;
    cfg.k = 3;
    ClusterResult res = kmeans(pts, cfg, rng);
    CHECK(overall_misclassification(blob_truth(20, 3), res.labels) == 0.0);
}

TEST_CASE("kmedians recovers well-separated clusters exactly") {
    RngStream rng(2);
    Eigen::MatrixXd pts = separated_blobs(15, 3, 0.5, rng);
    ClusterConfig cfg;
    cfg.k = 3;
    ClusterResult res = kmedians(pts, cfg, rng);
    CHECK(overall_misclassification(blob_truth(15, 3), res.labels) == 0.0);
}

TEST_CASE("n equal to k gives a zero objective") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 5, 0, 0, 5;
    ClusterConfig cfg;
    cfg.k = 3;
    RngStream rng(3);
    CHECK(kmeans(pts, cfg, rng).objective == doctest::Approx(0.0));
    RngStream rng2(4);
    CHECK(kmedians(pts, cfg, rng2).objective == doctest::Approx(0.0));
}

TEST_CASE("duplicated points do not break either solver") {
    Eigen::MatrixXd pts(6, 1);
    pts << 0, 0, 0, 9, 9, 9;
    ClusterConfig cfg;
    cfg.k = 2;
    RngStream rng(5);
    ClusterResult km = kmeans(pts, cfg, rng);
    CHECK(km.objective == doctest::Approx(0.0));
    ClusterResult kd = kmedians(pts, cfg, rng);
    CHECK(kd.objective == doctest::Approx(0.0));
}

TEST_CASE("kmeans objective never exceeds a brute-force optimum by much") {
    RngStream rng(6);
    int hits = 0;
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::MatrixXd pts(10, 2);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 2; ++j) pts(i, j) = rng.uniform(-1, 1);
        ClusterConfig cfg;
        cfg.k = 3;
        ClusterResult approx = kmeans(pts, cfg, rng);
        ClusterResult exact = brute_force_cluster(pts, 3, Objective::kmeans);
        CHECK(approx.objective >= exact.objective - 1e-9);
        if (approx.objective <= 1.05 * exact.objective + 1e-12) ++hits;
    }
    CHECK(hits >= 29);
}

TEST_CASE("kmedians objective tracks the brute-force optimum") {
    RngStream rng(7);
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd pts(9, 2);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 2; ++j) pts(i, j) = rng.uniform(-1, 1);
        ClusterConfig cfg;
        cfg.k = 2;
        ClusterResult approx = kmedians(pts, cfg, rng);
        ClusterResult exact = brute_force_cluster(pts, 2, Objective::kmedians);
        CHECK(approx.objective >= exact.objective - 1e-7);
        if (approx.objective <= 1.10 * exact.objective + 1e-9) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("geometric median handles hand-checkable cases") {
    // three collinear points: the median is the middle point
    Eigen::MatrixXd line(3, 1);
    line << 0, 1, 10;
    CHECK(geometric_median(line)(0) == doctest::Approx(1.0).epsilon(1e-6));

    // symmetric square: the median is the center
    Eigen::MatrixXd square(4, 2);
    square << 0, 0, 0, 1, 1, 0, 1, 1;
    Eigen::VectorXd med = geometric_median(square);
    CHECK(med(0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(med(1) == doctest::Approx(0.5).epsilon(1e-6));

    // median is robust to one far outlier, unlike the mean
    Eigen::MatrixXd out(4, 1);
    out << 0, 0.1, -0.1, 1000;
    CHECK(std::abs(geometric_median(out)(0)) < 0.2);

    // coincident-point input converges to that point
    Eigen::MatrixXd same(3, 2);
    same << 2, 3, 2, 3, 2, 3;
    Eigen::VectorXd m = geometric_median(same);
    CHECK(m(0) == doctest::Approx(2.0));
    CHECK(m(1) == doctest::Approx(3.0));
}

TEST_CASE("Lloyd objective is monotone along the iteration path") {
    RngStream base(8);
    Eigen::MatrixXd pts(40, 2);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 2; ++j) pts(i, j) = base.uniform(-1, 1);
    double prev = std::numeric_limits<double>::infinity();
    for (int iters = 1; iters <= 12; ++iters) {
        ClusterConfig cfg;
        cfg.k = 4;
        cfg.restarts = 1;
        cfg.max_iterations = iters;
        RngStream rng(9);  // same seed: same seeding, longer trajectory
        double obj = kmeans(pts, cfg, rng).objective;
        CHECK(obj <= prev + 1e-9);
        prev = obj;
    }
}

TEST_CASE("labels are a valid 1..k vector and clusters are non-degenerate") {
    RngStream rng(10);
    Eigen::MatrixXd pts(25, 3);
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 3; ++j) pts(i, j) = rng.uniform(-1, 1);
    ClusterConfig cfg;
    cfg.k = 5;
    ClusterResult res = kmeans(pts, cfg, rng);
    REQUIRE(static_cast<int>(res.labels.labels.size()) == 25);
    std::vector<int> counts(5, 0);
    for (int l : res.labels.labels) {
        REQUIRE(l >= 1);
        REQUIRE(l <= 5);
        ++counts[l - 1];
    }
    for (int c : counts) CHECK(c > 0);  // empty-cluster repair keeps all k in use
}

TEST_CASE("brute force rejects oversized inputs") {
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(13, 2);
    CHECK_THROWS_AS(brute_force_cluster(pts, 2, Objective::kmeans), std::invalid_argument);
}

TEST_CASE("brute force finds the obvious optimum") {
    Eigen::MatrixXd pts(6, 1);
    pts << 0, 0.1, 0.2, 8, 8.1, 8.2;
    ClusterResult res = brute_force_cluster(pts, 2, Objective::kmeans);
    CHECK(res.labels.labels[0] == res.labels.labels[1]);
    CHECK(res.labels.labels[1] == res.labels.labels[2]);
    CHECK(res.labels.labels[3] == res.labels.labels[4]);
    CHECK(res.labels.labels[0] != res.labels.labels[3]);
    // objective: each triple contributes 2/3 * (0.1^2 + ... ) = sum of squares to mean
    CHECK(res.objective == doctest::Approx(2 * (0.01 + 0.0 + 0.01)).epsilon(1e-9));
}

TEST_CASE("pipelines recover planted SSBM communities without noise") {
    BlockModelParams params = make_symmetric_sbm({150, 3, 0.4, 0.05});
    RngStream rng(11);
    Graph g = sample(params, rng);
    ClusterConfig cfg;
    cfg.k = 3;
    LabelVector means = ef_spectral_kmeans(g, 3, 0.05, PrivacyBudget::infinite(), cfg, rng);
    CHECK(overall_misclassification(params.labels, means) < 0.02);
    LabelVector medians = ef_spectral_kmedians(g, 3, 0.05, PrivacyBudget::infinite(), cfg, rng);
    CHECK(overall_misclassification(params.labels, medians) < 0.02);
}

TEST_CASE("kmedians pipeline assigns label 1 to isolated vertices") {
    // two cliques plus two isolated vertices
    Graph g(10);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) g.set_edge(i, j, true);
    for (int i = 4; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) g.set_edge(i, j, true);
    ClusterConfig cfg;
    cfg.k = 2;
    RngStream rng(12);
    LabelVector lv = ef_spectral_kmedians(g, 2, 0.05, PrivacyBudget::infinite(), cfg, rng);
    CHECK(lv.labels[8] == 1);
    CHECK(lv.labels[9] == 1);
    // the two cliques land in different clusters
    CHECK(lv.labels[0] == lv.labels[3]);
    CHECK(lv.labels[4] == lv.labels[7]);
    CHECK(lv.labels[0] != lv.labels[4]);
}

TEST_CASE("pipeline output is deterministic for a fixed stream") {
    BlockModelParams params = make_symmetric_sbm({60, 2, 0.3, 0.1});
    RngStream sampler(13);
    Graph g = sample(params, sampler);
    ClusterConfig cfg;
    cfg.k = 2;
    RngStream a(14), b(14);
    LabelVector la = ef_spectral_kmeans(g, 2, 0.05, PrivacyBudget::finite(2.0), cfg, a);
    LabelVector lb = ef_spectral_kmeans(g, 2, 0.05, PrivacyBudget::finite(2.0), cfg, b);
    CHECK(la.labels == lb.labels);
}
