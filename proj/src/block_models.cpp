#include "efsc/block_models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace efsc {

namespace {

void check_spec(const SymmetricSpec& spec) {
    if (spec.n <= 0 || spec.k <= 0) throw std::invalid_argument("symmetric spec: n, k must be positive");
    if (spec.n % spec.k != 0)
        throw std::invalid_argument("symmetric spec: k must divide n (equal-sized blocks)");
    if (spec.p <= 0 || spec.r <= 0)
        throw std::invalid_argument("symmetric spec: p and r must be positive");
    if (spec.p + spec.r > 1.0)
        throw std::invalid_argument("symmetric spec: p + r must be at most 1");
}

LabelVector equal_blocks(int n, int k) {
    LabelVector lv;
    lv.k = k;
    lv.labels.resize(n);
    int per = n / k;
    for (int i = 0; i < n; ++i) lv.labels[i] = i / per + 1;
    return lv;
}

}  // namespace

BlockModelParams make_symmetric_sbm(const SymmetricSpec& spec) {
    check_spec(spec);
    BlockModelParams params;
    params.labels = equal_blocks(spec.n, spec.k);
    params.psi = Eigen::VectorXd::Ones(spec.n);
    params.B = spec.p * Eigen::MatrixXd::Identity(spec.k, spec.k) +
               spec.r * Eigen::MatrixXd::Ones(spec.k, spec.k);
    return params;
}

BlockModelParams make_symmetric_dcbm(const SymmetricSpec& spec, RngStream& rng) {
    check_spec(spec);
    if (spec.a <= 0 || spec.a > 1)
        throw std::invalid_argument("symmetric spec: a must lie in (0, 1]");
    BlockModelParams params = make_symmetric_sbm(spec);
    // psi drawn block-major in node-index order; the first node of each
    // block is pinned to 1 so every block satisfies max psi = 1.
    int per = spec.n / spec.k;
    for (int i = 0; i < spec.n; ++i) {
        params.psi[i] = (i % per == 0) ? 1.0 : rng.uniform(spec.a, 1.0);
    }
    return params;
}

BlockModelParams make_dcbm(LabelVector labels, Eigen::VectorXd psi, Eigen::MatrixXd B) {
    const int n = labels.size();
    const int k = labels.k;
    if (psi.size() != n) throw std::invalid_argument("make_dcbm: psi length mismatch");
    if (B.rows() != k || B.cols() != k) throw std::invalid_argument("make_dcbm: B shape mismatch");
    if (!B.isApprox(B.transpose(), 1e-12)) throw std::invalid_argument("make_dcbm: B not symmetric");
    for (int i = 0; i < n; ++i)
        if (psi[i] <= 0 || psi[i] > 1) throw std::invalid_argument("make_dcbm: psi entries must lie in (0,1]");
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (B(a, b) <= 0 || B(a, b) > 1)
                throw std::invalid_argument("make_dcbm: B entries must lie in (0,1]");

    BlockModelParams params;
    params.labels = std::move(labels);
    params.psi = std::move(psi);
    params.B = std::move(B);
    std::vector<double> block_max(k, 0.0);
    for (int i = 0; i < n; ++i) {
        int j = params.labels.labels[i] - 1;
        block_max[j] = std::max(block_max[j], params.psi[i]);
    }
    params.psi_normalized = true;
    for (double m : block_max)
        if (std::abs(m - 1.0) > 1e-12) params.psi_normalized = false;
    return params;
}

Graph sample(const BlockModelParams& params, RngStream& rng) {
    const int n = params.n();
    Graph g(n);
    for (int i = 0; i < n; ++i) {
        const int bi = params.labels.labels[i] - 1;
        for (int j = i + 1; j < n; ++j) {
            const int bj = params.labels.labels[j] - 1;
            double prob = params.psi[i] * params.psi[j] * params.B(bi, bj);
            if (rng.bernoulli(prob)) g.set_edge(i, j, true);
        }
    }
    return g;
}

Eigen::MatrixXd expected_matrix(const BlockModelParams& params) {
    const int n = params.n();
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n; ++i) {
        const int bi = params.labels.labels[i] - 1;
        for (int j = i; j < n; ++j) {
            const int bj = params.labels.labels[j] - 1;
            double v = params.psi[i] * params.psi[j] * params.B(bi, bj);
            P(i, j) = v;
            P(j, i) = v;
        }
    }
    return P;
}

ModelDerived model_derived(const BlockModelParams& params) {
    const int k = params.k();
    ModelDerived d;
    d.effective_sizes.assign(k, 0.0);
    d.heterogeneity.assign(k, 0.0);
    std::vector<double> inv_sq(k, 0.0);
    std::vector<int> sizes(k, 0);
    for (int i = 0; i < params.n(); ++i) {
        int j = params.labels.labels[i] - 1;
        double s = params.psi[i] * params.psi[i];
        d.effective_sizes[j] += s;
        inv_sq[j] += 1.0 / s;
        ++sizes[j];
    }
    d.n_tilde_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
        if (sizes[j] == 0) throw std::invalid_argument("model_derived: empty block");
        d.heterogeneity[j] = inv_sq[j] * d.effective_sizes[j] /
                             (static_cast<double>(sizes[j]) * sizes[j]);
        d.n_tilde_min = std::min(d.n_tilde_min, d.effective_sizes[j]);
    }
    d.max_B = params.B.maxCoeff();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(params.B);
    double lambda = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
        double v = std::abs(es.eigenvalues()[j]);
        if (v >= 1e-12) lambda = std::min(lambda, v);
    }
    if (!std::isfinite(lambda))
        throw std::runtime_error("model_derived: B is numerically rank-deficient");
    d.lambda_B = lambda;
    return d;
}

}  // namespace efsc
