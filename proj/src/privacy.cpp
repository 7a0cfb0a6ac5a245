#include "efsc/privacy.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace efsc {

PrivacyBudget PrivacyBudget::finite(double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon))
        throw std::invalid_argument("PrivacyBudget: epsilon must be a positive finite real");
    PrivacyBudget b;
    b.epsilon_ = epsilon;
    return b;
}

PrivacyBudget PrivacyBudget::parse(const std::string& text) {
    if (text == "inf" || text == "INF" || text == "Inf") return infinite();
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("PrivacyBudget: cannot parse '" + text + "'");
    return finite(v);
}

double PrivacyBudget::epsilon() const {
    if (!epsilon_) throw std::logic_error("PrivacyBudget: epsilon() on infinite budget");
    return *epsilon_;
}

double PrivacyBudget::flip_probability() const {
    if (!epsilon_) return 0.0;
    return 1.0 / (1.0 + std::exp(*epsilon_));
}

double PrivacyBudget::scale() const {
    if (!epsilon_) return 1.0;
    double e = std::exp(*epsilon_);
    return (e - 1.0) / (e + 1.0);
}

std::string PrivacyBudget::to_string() const {
    if (!epsilon_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *epsilon_);
    return buf;
}

Eigen::MatrixXd DownshiftedMatrix::dense() const {
    const int n = node_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, -shift);
    m.diagonal().setZero();
    graph.for_each_edge([&](int i, int j) {
        m(i, j) = 1.0 - shift;
        m(j, i) = 1.0 - shift;
    });
    return m;
}

void DownshiftedMatrix::apply(const double* x, double* y) const {
    const int n = node_count();
    double total = 0;
    for (int i = 0; i < n; ++i) total += x[i];
    // (A - sJ + sI) x = A x - s (sum x) 1 + s x
    for (int i = 0; i < n; ++i) y[i] = shift * (x[i] - total);
    graph.accumulate_matvec(x, y);
}

Graph edge_flip(const Graph& graph, PrivacyBudget budget, RngStream& rng) {
    if (budget.is_infinite()) return graph;
    if (budget.epsilon() > 36.0) {
        // flip probability underflows toward zero at this scale
        std::cerr << "edge_flip: epsilon " << budget.epsilon()
                  << " > 36, flip probability underflows; returning input unchanged\n";
        return graph;
    }
    const double flip = budget.flip_probability();
    const int n = graph.node_count();
    Graph out(n);
    // T(Y) + T(Y)^T: node i reports entries j > i, row by row
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool y = graph.edge(i, j);
            bool reported = rng.bernoulli(flip) ? !y : y;
            if (reported) out.set_edge(i, j, true);
        }
    }
    return out;
}

Graph mixture_sample(const Graph& graph, PrivacyBudget budget, RngStream& rng) {
    if (budget.is_infinite())
        throw std::invalid_argument("mixture_sample: mixture form undefined for infinite epsilon");
    const double weight = 2.0 / (std::exp(budget.epsilon()) + 1.0);
    const int n = graph.node_count();
    Graph out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool u = rng.bernoulli(weight);
            bool z = rng.bernoulli(0.5);
            bool v = u ? z : graph.edge(i, j);
            if (v) out.set_edge(i, j, true);
        }
    }
    return out;
}

DownshiftedMatrix downshift(const Graph& graph, PrivacyBudget budget) {
    return DownshiftedMatrix{graph, budget.shift()};
}

Eigen::MatrixXd tau_eps(const Eigen::MatrixXd& B, PrivacyBudget budget) {
    if (budget.is_infinite()) return B;
    double e = std::exp(budget.epsilon());
    return Eigen::MatrixXd::Constant(B.rows(), B.cols(), 1.0 / (e + 1.0)) +
           ((e - 1.0) / (e + 1.0)) * B;
}

double privacy_audit(int n, PrivacyBudget budget) {
    if (budget.is_infinite()) throw std::invalid_argument("privacy_audit: finite epsilon required");
    if (n < 2 || n > 4) throw std::invalid_argument("privacy_audit: n must lie in [2, 4]");
    const int m = n * (n - 1) / 2;  // number of potential edges
    const double flip = budget.flip_probability();
    const double keep = 1.0 - flip;

    // P(M(Y) = A) = prod over edges of (keep if A_e == Y_e else flip)
    auto prob = [&](unsigned y, unsigned a) {
        double p = 1.0;
        for (int e = 0; e < m; ++e) {
            bool same = ((y >> e) & 1u) == ((a >> e) & 1u);
            p *= same ? keep : flip;
        }
        return p;
    };

    double worst = 0.0;
    for (unsigned y = 0; y < (1u << m); ++y) {
        for (int e = 0; e < m; ++e) {
            unsigned y2 = y ^ (1u << e);  // neighboring graph
            for (unsigned a = 0; a < (1u << m); ++a) {
                double ratio = prob(y, a) / prob(y2, a);
                worst = std::max(worst, ratio);
            }
        }
    }
    return worst;
}

}  // namespace efsc
