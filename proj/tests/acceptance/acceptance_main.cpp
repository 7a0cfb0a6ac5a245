// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL
// line; the process exits nonzero if any check fails. Tolerances and
// instance sizes are fixed here on purpose — do not tune them to make a
// failing build green.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "efsc/block_models.hpp"
#include "efsc/clustering.hpp"
#include "efsc/experiments.hpp"
#include "efsc/metrics.hpp"
#include "efsc/privacy.hpp"
#include "efsc/spectral.hpp"

using namespace efsc;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, double seconds,
            const std::string& detail) {
    std::printf("[%2d] %-34s %s  (%.1fs)%s%s\n", number, name, pass ? "PASS" : "FAIL", seconds,
                detail.empty() ? "" : "  ", detail.c_str());
    if (!pass) ++g_failures;
}

void run(int number, const char* name, const std::function<bool(std::string&)>& body,
         double time_limit = 0) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (pass && time_limit > 0 && seconds >= time_limit) {
        pass = false;
        detail += " [over the time limit]";
    }
    report(number, name, pass, seconds, detail);
}

Graph random_graph(int n, double density, std::uint64_t seed) {
    RngStream rng(seed);
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(density)) g.set_edge(i, j, true);
    return g;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

// ---- 1: the audit recovers e^eps ------------------------------------------

bool audit_exactness(std::string& detail) {
    double worst = 0;
    for (int n : {2, 3, 4})
        for (double e : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            double ratio = privacy_audit(n, PrivacyBudget::finite(e));
            double target = std::exp(e);
            worst = std::max(worst, std::abs(ratio - target));
            if (ratio > target + 1e-9) {
                detail = fmt("audit exceeded the target at n=%g eps=%g", n, e);
                return false;
            }
        }
    detail = fmt("max |audit - e^eps| = %.3g", worst);
    return worst <= 1e-9;
}

// ---- 2: mixture and flip agree per entry ----------------------------------

bool mixture_equivalence(std::string& detail) {
    const int n = 30, draws = 100000;
    const int pairs = n * (n - 1) / 2;
    Graph g = random_graph(n, 0.35, 2026);
    int worst_bad = 0;
    for (double e : {0.5, 2.0}) {
        PrivacyBudget eps = PrivacyBudget::finite(e);
        RngStream rng(RngStream::combine({2, static_cast<std::uint64_t>(e * 1000)}));
        std::vector<int> a(pairs, 0), b(pairs, 0);
        for (int t = 0; t < draws; ++t) {
            Graph fa = edge_flip(g, eps, rng);
            Graph fb = mixture_sample(g, eps, rng);
            int p = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++p) {
                    if (fa.edge(i, j)) ++a[p];
                    if (fb.edge(i, j)) ++b[p];
                }
        }
        int bad = 0;
        for (int p = 0; p < pairs; ++p) {
            double fa = static_cast<double>(a[p]) / draws;
            double fb = static_cast<double>(b[p]) / draws;
            double se = std::sqrt(fa * (1 - fa) / draws + fb * (1 - fb) / draws);
            if (std::abs(fa - fb) > 3 * se) ++bad;
        }
        worst_bad = std::max(worst_bad, bad);
    }
    detail = fmt("worst case %g/%g entries outside 3 SE", worst_bad, pairs);
    return worst_bad <= pairs / 100;  // >= 99% agreement
}

// ---- 3: downshifted flips average to the scaled graph ---------------------

bool scaled_expectation(std::string& detail) {
    const int n = 40, draws = 2000;
    PrivacyBudget eps = PrivacyBudget::finite(1.0);
    Graph g = random_graph(n, 0.3, 3);
    RngStream rng(30);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    for (int t = 0; t < draws; ++t) mean += downshift(edge_flip(g, eps, rng), eps).dense();
    mean /= draws;
    const double s = eps.shift();
    const double sigma = std::sqrt(s * (1 - s) / draws);
    int bad = 0, total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ++total;
            double expect = eps.scale() * (g.edge(i, j) ? 1.0 : 0.0);
            if (std::abs(mean(i, j) - expect) > 3 * sigma) ++bad;
        }
    detail = fmt("%g/%g entries outside 3 sigma", bad, total);
    return bad <= total / 100;
}

// ---- 4: flipped block-model densities hit the closure map ------------------

bool closure_densities(std::string& detail) {
    BlockModelParams params = make_symmetric_sbm({400, 2, 0.2, 0.05});
    PrivacyBudget eps = PrivacyBudget::finite(1.0);
    Eigen::MatrixXd target = tau_eps(params.B, eps);
    RngStream rng(4);
    const int reps = 200;
    std::size_t within = 0, cross = 0;
    for (int t = 0; t < reps; ++t) {
        Graph g = edge_flip(sample(params, rng), eps, rng);
        g.for_each_edge([&](int i, int j) {
            if (params.labels.labels[i] == params.labels.labels[j])
                ++within;
            else
                ++cross;
        });
    }
    const double m_within = reps * 2.0 * (200.0 * 199.0 / 2.0);
    const double m_cross = reps * 200.0 * 200.0;
    double dw = within / m_within - target(0, 0);
    double dc = cross / m_cross - target(0, 1);
    double sw = std::sqrt(target(0, 0) * (1 - target(0, 0)) / m_within);
    double sc = std::sqrt(target(0, 1) * (1 - target(0, 1)) / m_cross);
    detail = fmt("within dev %.2g (3sig %.2g), cross dev %.2g (3sig %.2g)", dw, 3 * sw, dc, 3 * sc);
    return std::abs(dw) < 3 * sw && std::abs(dc) < 3 * sc;
}

// ---- 5: eigenvectors ignore positive rescaling ----------------------------

bool eigenvector_invariance(std::string& detail) {
    RngStream rng(5);
    double worst = 1.0;
    int trial = 0;
    while (trial < 20) {
        // distinct per-block connectivity so the leading eigenvalues are
        // simple; the symmetric family's repeated eigenvalue would make a
        // column-wise comparison ill-posed
        int k = 2 + static_cast<int>(rng.uniform_int(3));
        int per = 3 + static_cast<int>(rng.uniform_int(5));
        LabelVector lv;
        lv.k = k;
        for (int c = 0; c < k; ++c) lv.labels.insert(lv.labels.end(), per, c + 1);
        Eigen::MatrixXd b = Eigen::MatrixXd::Constant(k, k, rng.uniform(0.01, 0.1));
        for (int c = 0; c < k; ++c) b(c, c) = rng.uniform(0.25, 0.9);
        BlockModelParams params =
            make_dcbm(lv, Eigen::VectorXd::Ones(per * k), b);
        Eigen::MatrixXd pm = expected_matrix(params);
        Embedding probe = leading_eigvecs(pm, k + 1 <= per * k ? k + 1 : k);
        bool separated = true;
        for (int c = 1; c < probe.values.size(); ++c)
            if (std::abs(probe.values(c - 1)) - std::abs(probe.values(c)) <
                1e-2 * std::abs(probe.values(0)))
                separated = false;
        if (!separated) continue;  // redraw a degenerate instance
        ++trial;
        Embedding base = leading_eigvecs(pm, k);
        for (double c : {0.1, (std::exp(1.0) - 1) / (std::exp(1.0) + 1)}) {
            Embedding scaled = leading_eigvecs(Eigen::MatrixXd(c * pm), k);
            for (int col = 0; col < k; ++col)
                worst = std::min(worst,
                                 std::abs(base.vectors.col(col).dot(scaled.vectors.col(col))));
        }
    }
    detail = fmt("min column cosine = 1 - %.3g", 1.0 - worst);
    return worst > 1.0 - 1e-10;
}

// ---- 6: metric solver equals enumeration ----------------------------------

bool metric_oracles(std::string& detail) {
    RngStream rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        int k = 2 + static_cast<int>(rng.uniform_int(5));
        int n = k + 4 + static_cast<int>(rng.uniform_int(30));
        LabelVector truth, est;
        truth.k = est.k = k;
        truth.labels.resize(n);
        est.labels.resize(n);
        for (int i = 0; i < n; ++i) {
            truth.labels[i] = 1 + static_cast<int>(rng.uniform_int(k));
            est.labels[i] = 1 + static_cast<int>(rng.uniform_int(k));
        }
        for (int c = 0; c < k; ++c) truth.labels[c] = est.labels[c] = c + 1;
        double le = overall_misclassification_enum(truth, est);
        double lh = overall_misclassification_hungarian(truth, est);
        if (std::abs(le - lh) > 1e-12) {
            detail = fmt("overall mismatch at trial %g: %.12g vs %.12g", trial, le, lh);
            return false;
        }
        double we = worstcase_misclassification_enum(truth, est);
        double wm = worstcase_misclassification(truth, est);
        if (std::abs(we - wm) > 1e-12) {
            detail = fmt("worst-case mismatch at trial %g", trial);
            return false;
        }
        CommunityStats cs = community_stats(truth);
        if (wm > static_cast<double>(n) / cs.n_min * le + 1e-12) {
            detail = fmt("L~ exceeded (n/n_min) L at trial %g", trial);
            return false;
        }
    }
    detail = "1000/1000 instances agree";
    return true;
}

// ---- 7: restarts track the brute-force optimum ----------------------------

bool clustering_oracle(std::string& detail) {
    RngStream rng(7);
    int means_ok = 0, medians_ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd pts(12, 2);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 2; ++j) pts(i, j) = rng.uniform(-1, 1);
        ClusterConfig cfg;
        cfg.k = 3;
        ClusterResult approx = kmeans(pts, cfg, rng);
        ClusterResult exact = brute_force_cluster(pts, 3, Objective::kmeans);
        if (approx.objective <= 1.05 * exact.objective + 1e-12) ++means_ok;

        Eigen::MatrixXd pts2 = pts.topRows(10);
        ClusterResult approx2 = kmedians(pts2, cfg, rng);
        ClusterResult exact2 = brute_force_cluster(pts2, 3, Objective::kmedians);
        if (approx2.objective <= 1.10 * exact2.objective + 1e-9) ++medians_ok;
    }
    detail = fmt("kmeans %g/100 within 1.05x, kmedians %g/100 within 1.10x", means_ok, medians_ok);
    return means_ok >= 99 && medians_ok >= 99;
}

// ---- shared sweep helpers -------------------------------------------------

ExperimentConfig config_from(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

const char* kDenseSweep =
    "regime = dense_ssbm\n"
    "n_grid = 120, 300, 600, 1200\n"
    "epsilon_grid = 0.5, 2, inf\n"
    "replications = 20\n"
    "seed = 16\n"
    "timing = false\n";

std::map<std::pair<std::string, int>, double> cell_means(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, int>, double> means;
    for (const AggregateRow& a : aggregate(rows))
        means[{a.epsilon.to_string(), a.n}] = a.mean_L;
    return means;
}

std::string dense_sweep_csv;  // cached for the determinism check

// ---- 8: dense-regime recovery trend ---------------------------------------

bool dense_trend(std::string& detail) {
    ExperimentConfig cfg = config_from(kDenseSweep);
    std::vector<ResultRow> rows = run_sweep(cfg);
    {
        std::ostringstream out;
        write_csv(rows, out);
        dense_sweep_csv = out.str();
    }
    auto means = cell_means(rows);
    const std::vector<int> grid{120, 300, 600, 1200};
    for (const char* e : {"0.5", "2", "inf"}) {
        int inversions = 0;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double rise = means[{e, grid[i]}] - means[{e, grid[i - 1]}];
            if (rise > 0) {
                ++inversions;
                if (rise > 0.01 || inversions > 1) {
                    detail = fmt("mean L rose by %.3g at eps=", rise) + e;
                    return false;
                }
            }
        }
    }
    double tail_inf = means[{"inf", 1200}];
    double tail_two = means[{"2", 1200}];
    detail = fmt("mean L at n=1200: inf %.4g, eps=2 %.4g", tail_inf, tail_two);
    return tail_inf < 0.02 && tail_two < 0.05;
}

// ---- 9: sparse degradation under privacy ----------------------------------

double loglog_slope(const std::map<std::pair<std::string, int>, double>& means,
                    const char* eps, const std::vector<int>& grid, int reps) {
    // least squares of log10(mean L) on log10(n), flooring exact zeros at
    // half a misclassified vertex per replication set
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n : grid) {
        double m = means.at({eps, n});
        m = std::max(m, 0.5 / (static_cast<double>(reps) * n));
        double x = std::log10(static_cast<double>(n)), y = std::log10(m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double c = static_cast<double>(grid.size());
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

bool sparse_degradation(std::string& detail) {
    ExperimentConfig cfg = config_from(
        "regime = sparse_ssbm\n"
        "n_grid = 200, 800, 3200\n"
        "epsilon_grid = 0.5, inf\n"
        "replications = 20\n"
        "seed = 20260824\n"
        "timing = false\n");
    auto means = cell_means(run_sweep(cfg));
    const std::vector<int> grid{200, 800, 3200};
    for (int n : grid) {
        if (!(means[{"0.5", n}] > means[{"inf", n}])) {
            detail = fmt("mean L at eps=0.5 not above eps=inf at n=%g", n);
            return false;
        }
    }
    double s_private = loglog_slope(means, "0.5", grid, 20);
    double s_free = loglog_slope(means, "inf", grid, 20);
    detail = fmt("slopes: eps=0.5 %.3f, inf %.3f", s_private, s_free);
    return std::abs(s_private) < std::abs(s_free);
}

// ---- 10: degree-corrected pipeline trend ----------------------------------

bool dcbm_trend(std::string& detail) {
    ExperimentConfig cfg = config_from(
        "regime = dense_sdcbm\n"
        "n_grid = 300, 900\n"
        "epsilon_grid = 2, inf\n"
        "replications = 20\n"
        "seed = 20260824\n"
        "timing = false\n");
    auto means = cell_means(run_sweep(cfg));
    for (const char* e : {"2", "inf"}) {
        if (!(means[{e, 900}] < means[{e, 300}])) {
            detail = std::string("mean L did not decrease with n at eps=") + e;
            return false;
        }
    }
    // zero-row rule: isolated vertices must land in cluster 1
    Graph g(10);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) g.set_edge(i, j, true);
    for (int i = 4; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) g.set_edge(i, j, true);
    ClusterConfig cc;
    cc.k = 2;
    RngStream rng(10);
    LabelVector lv = ef_spectral_kmedians(g, 2, 0.05, PrivacyBudget::infinite(), cc, rng);
    if (lv.labels[8] != 1 || lv.labels[9] != 1) {
        detail = "isolated vertices were not assigned label 1";
        return false;
    }
    detail = fmt("mean L: eps=2 %.3g->%.3g, inf %.3g->%.3g", means[{"2", 300}], means[{"2", 900}],
                 means[{"inf", 300}], means[{"inf", 900}]);
    return true;
}

// ---- 11: alignment deviation report ---------------------------------------

bool procrustes_report(std::string& detail) {
    BlockModelParams params = make_symmetric_sbm({600, 3, 0.2, 0.05});
    ModelDerived derived = model_derived(params);
    Embedding expected = leading_eigvecs(expected_matrix(params), 3);
    const int reps = 50;
    std::vector<double> mean_dist, ratio;
    for (PrivacyBudget eps : {PrivacyBudget::finite(1.0), PrivacyBudget::infinite()}) {
        RngStream rng(RngStream::combine({11, eps.is_infinite() ? 0ull : 1ull}));
        double total = 0;
        for (int t = 0; t < reps; ++t) {
            Graph observed = edge_flip(sample(params, rng), eps, rng);
            Embedding got = spectral_embed(observed, 3, eps);
            total += procrustes_distance(got.vectors, expected.vectors).second;
        }
        double mean = total / reps;
        double bound = 2.0 * std::sqrt(2.0 * 3 * 600 * g_eps(params.B, eps)) /
                       (derived.n_tilde_min * derived.lambda_B);
        if (!std::isfinite(mean) || !std::isfinite(bound) || bound <= 0) {
            detail = "non-finite deviation or bound";
            return false;
        }
        mean_dist.push_back(mean);
        ratio.push_back(mean / bound);
    }
    detail = fmt("mean deviation eps=1 %.3f (ratio %.4f), inf %.3f (ratio %.4f)", mean_dist[0],
                 ratio[0], mean_dist[1], ratio[1]);
    return mean_dist[1] <= mean_dist[0];  // less privacy, less deviation
}

// ---- 12: byte-identical output across worker counts -----------------------

bool determinism(std::string& detail) {
    ExperimentConfig cfg = config_from(kDenseSweep);
    for (int threads : {1, 4, 8}) {
        cfg.threads = threads;
        std::ostringstream out;
        write_csv(run_sweep(cfg), out);
        if (out.str() != dense_sweep_csv) {
            detail = fmt("output differs with %g workers", threads);
            return false;
        }
    }
    detail = "identical bytes with 1, 4, and 8 workers";
    return true;
}

}  // namespace

int main() {
    run(1, "privacy audit exactness", audit_exactness, 5.0);
    run(2, "mixture equivalence", mixture_equivalence, 60.0);
    run(3, "scaled expectation", scaled_expectation, 30.0);
    run(4, "block-model closure densities", closure_densities);
    run(5, "eigenvector scale invariance", eigenvector_invariance);
    run(6, "metric oracle equivalence", metric_oracles);
    run(7, "clustering vs brute force", clustering_oracle);
    run(8, "dense-regime recovery trend", dense_trend, 600.0);
    run(9, "sparse degradation under privacy", sparse_degradation);
    run(10, "degree-corrected trend", dcbm_trend);
    run(11, "alignment deviation report", procrustes_report);
    run(12, "worker-count determinism", determinism);
    if (g_failures) {
        std::printf("%d of 12 checks failed\n", g_failures);
        return 1;
    }
    std::printf("all 12 checks passed\n");
    return 0;
}
