// The symmetric edge-flip mechanism and friends: the mixture-construction
// sampling oracle, the downshift transform, the SBM closure map tau_eps,
// and an exhaustive small-n privacy auditor.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "efsc/graph.hpp"
#include "efsc/rng.hpp"

namespace efsc {

// Privacy-loss budget; the infinite state is a distinguished value (the
// identity mechanism), never a float sentinel.
class PrivacyBudget {
public:
    static PrivacyBudget infinite() { return PrivacyBudget(); }
    static PrivacyBudget finite(double epsilon);

    // accepts a positive float or "inf"
    static PrivacyBudget parse(const std::string& text);

    bool is_infinite() const { return !epsilon_.has_value(); }
    double epsilon() const;  // throws when infinite

    // 1 / (1 + e^eps); 0 when infinite
    double flip_probability() const;
    // downshift amount s = 1 / (e^eps + 1); 0 when infinite
    double shift() const { return flip_probability(); }
    // (e^eps - 1) / (e^eps + 1); 1 when infinite
    double scale() const;

    std::string to_string() const;

    bool operator==(const PrivacyBudget& other) const { return epsilon_ == other.epsilon_; }

private:
    PrivacyBudget() = default;
    std::optional<double> epsilon_;
};

// Real symmetric matrix with zero diagonal; for finite eps the
// off-diagonal entries lie in {-s, 1-s}. Kept as graph-plus-shift so the
// large-n eigensolver can apply it without materializing a dense matrix.
struct DownshiftedMatrix {
    Graph graph;
    double shift = 0;  // s; 0 means the plain adjacency embedding

    int node_count() const { return graph.node_count(); }
    double entry(int i, int j) const {
        if (i == j) return 0.0;
        return (graph.edge(i, j) ? 1.0 : 0.0) - shift;
    }
    Eigen::MatrixXd dense() const;
    // y = (A - s(J - I)) x
    void apply(const double* x, double* y) const;
};

// Each upper-triangle entry independently complemented with probability
// 1/(1+e^eps); identity when eps is infinite. Flip randomness is consumed
// in upper-triangle row-major order.
Graph edge_flip(const Graph& graph, PrivacyBudget budget, RngStream& rng);

// Distributional oracle: mixture of the input with G(n, 1/2), selected
// entrywise by Bernoulli(2/(e^eps+1)) indicators. Finite eps only.
Graph mixture_sample(const Graph& graph, PrivacyBudget budget, RngStream& rng);

DownshiftedMatrix downshift(const Graph& graph, PrivacyBudget budget);

// tau_eps(B) = (e^eps+1)^{-1} 1 1^T + ((e^eps-1)/(e^eps+1)) B
Eigen::MatrixXd tau_eps(const Eigen::MatrixXd& B, PrivacyBudget budget);

// Enumerates all graph pairs differing in one edge and all outputs;
// returns the maximum likelihood ratio, which should equal e^eps. n <= 4.
double privacy_audit(int n, PrivacyBudget budget);

}  // namespace efsc
