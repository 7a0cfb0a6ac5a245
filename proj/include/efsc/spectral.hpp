// Leading-|lambda| eigenpairs of symmetric matrices, spectral embeddings
// of downshifted adjacency matrices, row normalization with zero-row
// tracking, and the orthogonal Procrustes alignment.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "efsc/graph.hpp"
#include "efsc/privacy.hpp"

namespace efsc {

struct Embedding {
    Eigen::MatrixXd vectors;  // n x k, columns orthonormal
    Eigen::VectorXd values;   // ordered by descending |lambda|
    std::vector<int> zero_rows;      // I_0: rows with l2 norm < 1e-12
    std::vector<int> positive_rows;  // I_+
};

// Dense path. Selection is by largest |lambda|; ties prefer the positive
// eigenvalue, then lower column index. Each eigenvector's sign is fixed so
// its largest-magnitude entry is positive.
Embedding leading_eigvecs(const Eigen::MatrixXd& matrix, int k);

// Operator path: dense decomposition for small n, Lanczos with the
// implicit rank-one downshift correction for large n.
Embedding leading_eigvecs(const DownshiftedMatrix& matrix, int k);

// leading_eigvecs(downshift(graph, budget), k)
Embedding spectral_embed(const Graph& graph, int k, PrivacyBudget budget);

// Row-normalized matrix over I_+ and the index map f (positions into the
// original rows).
std::pair<Eigen::MatrixXd, std::vector<int>> row_normalize(const Embedding& embedding);

// Orthogonal Q minimizing ||observed - expected Q||_F and that minimum.
std::pair<Eigen::MatrixXd, double> procrustes_distance(const Eigen::MatrixXd& observed,
                                                       const Eigen::MatrixXd& expected);

namespace detail {
// n threshold below which the operator path materializes a dense matrix
inline constexpr int kDenseEigThreshold = 256;
}  // namespace detail

}  // namespace efsc
