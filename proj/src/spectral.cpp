#include "efsc/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "efsc/rng.hpp"

namespace efsc {

namespace {

constexpr double kZeroRowTol = 1e-12;
constexpr double kLanczosTol = 1e-8;

// order candidate eigenvalues by |lambda| desc, then positive first,
// then original index
std::vector<int> select_by_magnitude(const Eigen::VectorXd& values, int k) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double ma = std::abs(values[a]), mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        if ((values[a] > 0) != (values[b] > 0)) return values[a] > 0;
        return a < b;
    });
    order.resize(k);
    return order;
}

void fix_signs(Eigen::MatrixXd& vectors) {
    for (int c = 0; c < vectors.cols(); ++c) {
        int best = 0;
        double mag = std::abs(vectors(0, c));
        for (int r = 1; r < vectors.rows(); ++r) {
            if (std::abs(vectors(r, c)) > mag) {
                mag = std::abs(vectors(r, c));
                best = r;
            }
        }
        if (vectors(best, c) < 0) vectors.col(c) = -vectors.col(c);
    }
}

Embedding finalize(Eigen::MatrixXd vectors, Eigen::VectorXd values) {
    fix_signs(vectors);
    Embedding e;
    e.vectors = std::move(vectors);
    e.values = std::move(values);
    for (int i = 0; i < e.vectors.rows(); ++i) {
        if (e.vectors.row(i).norm() < kZeroRowTol)
            e.zero_rows.push_back(i);
        else
            e.positive_rows.push_back(i);
    }
    return e;
}

// Lanczos with full reorthogonalization on the implicit downshifted
// operator. Deterministic start vector; block-restart on breakdown.
Embedding lanczos_leading(const DownshiftedMatrix& op, int k) {
    const int n = op.node_count();
    const int m_cap = std::min(n, 300);
    RngStream rng(RngStream::combine({0x1a2cf05u, static_cast<std::uint64_t>(n)}));

    Eigen::MatrixXd basis(n, m_cap);
    Eigen::VectorXd diag(m_cap), subdiag(m_cap);
    Eigen::VectorXd w(n);

    auto random_orthonormal = [&](int j) {
        Eigen::VectorXd v(n);
        for (int t = 0; t < 50; ++t) {
            for (int i = 0; i < n; ++i) v[i] = rng.uniform() - 0.5;
            if (j > 0) v -= basis.leftCols(j) * (basis.leftCols(j).transpose() * v);
            double nrm = v.norm();
            if (nrm > 1e-8) return Eigen::VectorXd(v / nrm);
        }
        throw std::runtime_error("lanczos: could not extend basis");
    };

    basis.col(0) = random_orthonormal(0);
    double beta_prev = 0;
    int m = 0;

    Eigen::VectorXd ritz_values;
    Eigen::MatrixXd ritz_S;

    auto converged_topk = [&](int size) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag.head(size), subdiag.head(size - 1),
                                  Eigen::ComputeEigenvectors);
        ritz_values = es.eigenvalues();
        ritz_S = es.eigenvectors();
        if (size < k) return false;
        auto order = select_by_magnitude(ritz_values, k);
        double beta = subdiag[size - 1];
        for (int idx : order) {
            double resid = std::abs(beta * ritz_S(size - 1, idx));
            if (resid > kLanczosTol * std::max(1.0, std::abs(ritz_values[idx]))) return false;
        }
        return true;
    };

    for (int j = 0; j < m_cap; ++j) {
        w.setZero();
        op.apply(basis.col(j).data(), w.data());
        diag[j] = basis.col(j).dot(w);
        w -= diag[j] * basis.col(j);
        if (j > 0 && beta_prev > 0) w -= beta_prev * basis.col(j - 1);
        // full reorthogonalization, twice
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        double beta = w.norm();
        m = j + 1;
        if (j + 1 == m_cap) {
            subdiag[j] = 0;
            break;
        }
        if (beta < 1e-10) {
            // invariant subspace found; either done or start a new block
            subdiag[j] = 0;
            if (m >= k && converged_topk(m)) break;
            if (m == n) break;
            basis.col(j + 1) = random_orthonormal(j + 1);
            beta_prev = 0;
            continue;
        }
        subdiag[j] = beta;
        basis.col(j + 1) = w / beta;
        beta_prev = beta;
        if (m >= std::max(2 * k + 2, 10) && m % 5 == 0 && converged_topk(m)) break;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag.head(m), subdiag.head(std::max(m - 1, 0)),
                              Eigen::ComputeEigenvectors);
    auto order = select_by_magnitude(es.eigenvalues(), k);
    Eigen::MatrixXd vectors(n, k);
    Eigen::VectorXd values(k);
    for (int c = 0; c < k; ++c) {
        values[c] = es.eigenvalues()[order[c]];
        vectors.col(c) = basis.leftCols(m) * es.eigenvectors().col(order[c]);
        vectors.col(c) /= vectors.col(c).norm();
    }
    // verify the per-pair residual contract
    for (int c = 0; c < k; ++c) {
        w.setZero();
        op.apply(vectors.col(c).data(), w.data());
        double resid = (w - values[c] * vectors.col(c)).norm();
        if (resid > 1e-7 * std::max(1.0, std::abs(values[c])))
            throw std::runtime_error("lanczos: eigenpair residual above tolerance");
    }
    return finalize(std::move(vectors), std::move(values));
}

}  // namespace

Embedding leading_eigvecs(const Eigen::MatrixXd& matrix, int k) {
    const int n = static_cast<int>(matrix.rows());
    if (matrix.cols() != n) throw std::invalid_argument("leading_eigvecs: matrix not square");
    if (k < 1 || k > n) throw std::invalid_argument("leading_eigvecs: k out of range");
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("leading_eigvecs: matrix not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("leading_eigvecs: solver failed");
    auto order = select_by_magnitude(es.eigenvalues(), k);
    Eigen::MatrixXd vectors(n, k);
    Eigen::VectorXd values(k);
    for (int c = 0; c < k; ++c) {
        values[c] = es.eigenvalues()[order[c]];
        vectors.col(c) = es.eigenvectors().col(order[c]);
    }
    return finalize(std::move(vectors), std::move(values));
}

Embedding leading_eigvecs(const DownshiftedMatrix& matrix, int k) {
    const int n = matrix.node_count();
    if (k < 1 || k > n) throw std::invalid_argument("leading_eigvecs: k out of range");
    if (n <= detail::kDenseEigThreshold) return leading_eigvecs(matrix.dense(), k);
    return lanczos_leading(matrix, k);
}

Embedding spectral_embed(const Graph& graph, int k, PrivacyBudget budget) {
    return leading_eigvecs(downshift(graph, budget), k);
}

std::pair<Eigen::MatrixXd, std::vector<int>> row_normalize(const Embedding& embedding) {
    const int m = static_cast<int>(embedding.positive_rows.size());
    Eigen::MatrixXd out(m, embedding.vectors.cols());
    for (int i = 0; i < m; ++i) {
        int r = embedding.positive_rows[i];
        out.row(i) = embedding.vectors.row(r) / embedding.vectors.row(r).norm();
    }
    return {out, embedding.positive_rows};
}

std::pair<Eigen::MatrixXd, double> procrustes_distance(const Eigen::MatrixXd& observed,
                                                       const Eigen::MatrixXd& expected) {
    if (observed.rows() != expected.rows() || observed.cols() != expected.cols())
        throw std::invalid_argument("procrustes_distance: shape mismatch");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(expected.transpose() * observed,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
    double dist = (observed - expected * q).norm();
    return {q, dist};
}

}  // namespace efsc
