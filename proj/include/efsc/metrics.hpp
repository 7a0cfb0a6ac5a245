// Misclassification metrics L and L~, the privacy-cost factor g_eps, and
// the finite-sample bound condition checks and values.
#pragma once

#include <Eigen/Dense>

#include "efsc/block_models.hpp"
#include "efsc/graph.hpp"
#include "efsc/privacy.hpp"

namespace efsc {

// Minimum mismatch fraction over label permutations. Exact: k!
// enumeration for k <= 6, Hungarian assignment on the confusion matrix
// beyond that.
double overall_misclassification(const LabelVector& truth, const LabelVector& estimate);

// Worst-case per-block misclassification: max over blocks of one minus
// the majority estimated-label share within the block.
double worstcase_misclassification(const LabelVector& truth, const LabelVector& estimate);

// Test oracles: force a particular evaluation path regardless of k.
double overall_misclassification_enum(const LabelVector& truth, const LabelVector& estimate);
double overall_misclassification_hungarian(const LabelVector& truth, const LabelVector& estimate);
double worstcase_misclassification_enum(const LabelVector& truth, const LabelVector& estimate);

// Maximum-weight assignment value on a square weight matrix (O(k^3)).
double max_assignment_value(const Eigen::MatrixXd& weights);

// Cost-of-privacy factor: max B at eps = inf, otherwise
// ((e^eps+1)/(e^eps-1)) (max B + 1/(e^eps-1)).
double g_eps(const Eigen::MatrixXd& B, PrivacyBudget budget);

struct BoundReport {
    double condition_value = 0;  // LHS of the applicability condition
    double condition_rhs = 0;    // threshold it is compared against
    bool condition_met = false;
    double l_bound = 0;
    double l_tilde_bound = 0;
    bool l_tilde_via_fallback = false;  // true when derived from L via n/n_min
    bool psi_warning = false;           // DCBM report on unnormalized psi
    double constant = 1.0;              // c1 or c2
    double gamma = 0;
};

// SBM finite-sample bound: condition (2+gamma) k n / (n_min^2 lambda_B^2)
// g_eps(B) < 1/c1 plus the two displayed bounds. Requires psi = 1.
BoundReport sbm_bound_report(const BlockModelParams& params, double gamma, PrivacyBudget budget,
                             double c1);

// DCBM finite-sample bound with the trivial (n/n_min) L~ fallback.
BoundReport dcbm_bound_report(const BlockModelParams& params, double gamma, PrivacyBudget budget,
                              double c2);

}  // namespace efsc
