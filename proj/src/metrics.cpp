#include "efsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace efsc {

namespace {

int common_k(const LabelVector& truth, const LabelVector& estimate) {
    if (truth.size() != estimate.size())
        throw std::invalid_argument("misclassification: label vectors differ in length");
    return std::max(truth.k, estimate.k);
}

// confusion(t, e) = #{i : truth_i = t+1, estimate_i = e+1}
Eigen::MatrixXd confusion(const LabelVector& truth, const LabelVector& estimate, int k) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < truth.size(); ++i)
        m(truth.labels[i] - 1, estimate.labels[i] - 1) += 1.0;
    return m;
}

}  // namespace

double max_assignment_value(const Eigen::MatrixXd& weights) {
    // Jonker-style shortest augmenting path on the negated matrix
    const int n = static_cast<int>(weights.rows());
    if (weights.cols() != n) throw std::invalid_argument("max_assignment_value: square matrix required");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0;
    for (int j = 1; j <= n; ++j)
        if (p[j]) total += weights(p[j] - 1, j - 1);
    return total;
}

double overall_misclassification_enum(const LabelVector& truth, const LabelVector& estimate) {
    const int k = common_k(truth, estimate);
    Eigen::MatrixXd c = confusion(truth, estimate, k);
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    double best_agree = -1;
    do {
        double agree = 0;
        for (int e = 0; e < k; ++e) agree += c(sigma[e], e);  // sigma maps estimate -> truth
        best_agree = std::max(best_agree, agree);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return 1.0 - best_agree / truth.size();
}

double overall_misclassification_hungarian(const LabelVector& truth, const LabelVector& estimate) {
    const int k = common_k(truth, estimate);
    Eigen::MatrixXd c = confusion(truth, estimate, k);
    return 1.0 - max_assignment_value(c.transpose()) / truth.size();
}

double overall_misclassification(const LabelVector& truth, const LabelVector& estimate) {
    const int k = common_k(truth, estimate);
    return k <= 6 ? overall_misclassification_enum(truth, estimate)
                  : overall_misclassification_hungarian(truth, estimate);
}

double worstcase_misclassification(const LabelVector& truth, const LabelVector& estimate) {
    const int k = common_k(truth, estimate);
    Eigen::MatrixXd c = confusion(truth, estimate, k);
    // per block, the inner minimum over permutations is attained by sending
    // the block's majority estimated label to the block
    double worst = 0;
    for (int j = 0; j < k; ++j) {
        double size = c.row(j).sum();
        if (size == 0) continue;
        worst = std::max(worst, 1.0 - c.row(j).maxCoeff() / size);
    }
    return worst;
}

double worstcase_misclassification_enum(const LabelVector& truth, const LabelVector& estimate) {
    const int k = common_k(truth, estimate);
    Eigen::MatrixXd c = confusion(truth, estimate, k);
    double worst = 0;
    for (int j = 0; j < k; ++j) {
        double size = c.row(j).sum();
        if (size == 0) continue;
        std::vector<int> sigma(k);
        std::iota(sigma.begin(), sigma.end(), 0);
        double inner = std::numeric_limits<double>::infinity();
        do {
            // mismatches within block j under sigma(estimate)
            double miss = 0;
            for (int e = 0; e < k; ++e)
                if (sigma[e] != j) miss += c(j, e);
            inner = std::min(inner, miss / size);
        } while (std::next_permutation(sigma.begin(), sigma.end()));
        worst = std::max(worst, inner);
    }
    return worst;
}

double g_eps(const Eigen::MatrixXd& B, PrivacyBudget budget) {
    double max_b = B.maxCoeff();
    if (budget.is_infinite()) return max_b;
    double zeta = std::exp(budget.epsilon()) - 1.0;
    return (zeta + 2.0) / zeta * (max_b + 1.0 / zeta);
}

BoundReport sbm_bound_report(const BlockModelParams& params, double gamma, PrivacyBudget budget,
                             double c1) {
    if (!params.sbm_mode())
        throw std::invalid_argument("sbm_bound_report: requires psi = 1 (SBM mode)");
    CommunityStats cs = community_stats(params.labels);
    ModelDerived d = model_derived(params);
    const double n = params.n();
    const double k = params.k();
    const double g = g_eps(params.B, budget);
    const double base = (2.0 + gamma) * k / (static_cast<double>(cs.n_min) * cs.n_min *
                                             d.lambda_B * d.lambda_B) * g;
    BoundReport r;
    r.constant = c1;
    r.gamma = gamma;
    r.condition_value = base * n;
    r.condition_rhs = 1.0 / c1;
    r.condition_met = r.condition_value < r.condition_rhs;
    r.l_tilde_bound = c1 * base * n;
    r.l_bound = c1 * base * cs.n_max_prime;
    return r;
}

BoundReport dcbm_bound_report(const BlockModelParams& params, double gamma, PrivacyBudget budget,
                              double c2) {
    CommunityStats cs = community_stats(params.labels);
    ModelDerived d = model_derived(params);
    const double n = params.n();
    const double k = params.k();
    const double g = g_eps(params.B, budget);
    double block_sum = 0;  // sum n_j^2 nu_j
    for (int j = 0; j < params.k(); ++j)
        block_sum += static_cast<double>(cs.block_sizes[j]) * cs.block_sizes[j] *
                     d.heterogeneity[j];
    BoundReport r;
    r.constant = c2;
    r.gamma = gamma;
    r.psi_warning = !params.psi_normalized;
    r.condition_value = (2.5 + gamma) * std::sqrt(k * n * g) / (d.n_tilde_min * d.lambda_B);
    r.condition_rhs = (1.0 / c2) * cs.n_min / std::sqrt(block_sum);
    r.condition_met = r.condition_value < r.condition_rhs;
    r.l_bound = c2 * (2.5 + gamma) / (d.n_tilde_min * d.lambda_B) *
                std::sqrt(k / n * block_sum * g);
    r.l_tilde_bound = n / cs.n_min * r.l_bound;
    r.l_tilde_via_fallback = true;
    return r;
}

}  // namespace efsc
