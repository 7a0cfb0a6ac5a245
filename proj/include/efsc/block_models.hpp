// SBM / DCBM parameter containers, symmetric-variant constructors,
// Bernoulli samplers and expected-matrix construction.
#pragma once

#include <Eigen/Dense>

#include "efsc/graph.hpp"
#include "efsc/rng.hpp"

namespace efsc {

struct BlockModelParams {
    LabelVector labels;   // theta
    Eigen::VectorXd psi;  // all-ones in SBM mode
    Eigen::MatrixXd B;    // symmetric k x k, entries in (0, 1]

    // Set when built through the free-psi constructor without the
    // max_{i in C_j} psi_i = 1 normalization; bound reports warn on it.
    bool psi_normalized = true;

    bool sbm_mode() const { return (psi.array() == 1.0).all(); }
    int n() const { return labels.size(); }
    int k() const { return labels.k; }
};

// Symmetric-variant parameters: k equal-sized blocks,
// B = p*I + r*1*1^T, and (DCBM only) psi lower bound a.
struct SymmetricSpec {
    int n = 0;
    int k = 0;
    double p = 0;  // diagonal boost
    double r = 0;  // baseline probability
    double a = 1;  // psi lower bound, DCBM only
};

struct ModelDerived {
    std::vector<double> effective_sizes;  // n~_j = sum_{i in C_j} psi_i^2
    std::vector<double> heterogeneity;    // nu_j
    double n_tilde_min = 0;
    double lambda_B = 0;  // smallest absolute nonzero eigenvalue of B
    double max_B = 0;
};

BlockModelParams make_symmetric_sbm(const SymmetricSpec& spec);

// psi = 1 at each block's first node, Uniform(a, 1) elsewhere.
BlockModelParams make_symmetric_dcbm(const SymmetricSpec& spec, RngStream& rng);

// Free-psi constructor; flags the result "bounds inapplicable" unless psi
// happens to satisfy the per-block max-one normalization.
BlockModelParams make_dcbm(LabelVector labels, Eigen::VectorXd psi, Eigen::MatrixXd B);

// Y_ij ~ Bernoulli(psi_i psi_j B_{theta_i theta_j}) on the upper triangle.
Graph sample(const BlockModelParams& params, RngStream& rng);

// P_ij = psi_i psi_j B_{theta_i theta_j}, including the diagonal.
Eigen::MatrixXd expected_matrix(const BlockModelParams& params);

ModelDerived model_derived(const BlockModelParams& params);

}  // namespace efsc
