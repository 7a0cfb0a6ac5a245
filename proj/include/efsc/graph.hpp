// Undirected binary graphs stored as an upper-triangle bit-set, plus
// edge-list / label-file ingestion and basic community statistics.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace efsc {

// Symmetric binary adjacency structure with zero diagonal. Only pairs
// i < j are stored; symmetry is structural. Treat as immutable once built.
class Graph {
public:
    explicit Graph(int n);

    int node_count() const { return n_; }

    bool edge(int i, int j) const {
        if (i == j) return false;
        std::size_t p = index(i, j);
        return (bits_[p >> 6] >> (p & 63)) & 1u;
    }

    void set_edge(int i, int j, bool value);

    std::size_t edge_count() const;

    // Calls fn(i, j) for every stored edge, i < j, in row-major order.
    template <typename F>
    void for_each_edge(F&& fn) const {
        std::size_t p = 0;
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j, ++p) {
                if ((bits_[p >> 6] >> (p & 63)) & 1u) fn(i, j);
            }
        }
    }

    // y += A x over stored edges (both triangles).
    void accumulate_matvec(const double* x, double* y) const;

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

private:
    std::size_t index(int i, int j) const {
        if (i > j) std::swap(i, j);
        // linear index of (i, j), i < j, in row-major upper triangle
        return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }

    int n_;
    std::vector<std::uint64_t> bits_;
};

// Block membership vector: entries in {1, ..., k}.
struct LabelVector {
    std::vector<int> labels;
    int k = 0;

    int size() const { return static_cast<int>(labels.size()); }
};

struct CommunityStats {
    std::vector<int> block_sizes;  // n_1, ..., n_k
    int n_min = 0;
    int n_max = 0;
    int n_max_prime = 0;  // second-largest; equals n_max when k == 1
};

struct LoadStats {
    int duplicate_edges = 0;
    int self_loops = 0;
};

enum class IndexBase { one_based, zero_based };

// Parses a whitespace-separated edge list ('#' comments skipped).
// Without `symmetrize` an edge is set for each listed pair; with it the
// loader applies Y_ij = max{Y_ij, Y_ji}, which is the same operation on a
// binary symmetric store, so the flag only matters for reporting intent.
// Self-loop lines are dropped and counted. Throws std::runtime_error with
// a line number on malformed or out-of-range input.
Graph load_edge_list(std::istream& text, int n, bool symmetrize = false,
                     IndexBase base = IndexBase::one_based, LoadStats* stats = nullptr);
Graph load_edge_list(const std::string& text, int n, bool symmetrize = false,
                     IndexBase base = IndexBase::one_based, LoadStats* stats = nullptr);

// String-vertex variant: node ids are arbitrary tokens, mapped to dense
// 0-based internal ids in first-appearance order (returned in id_map).
Graph load_edge_list_named(std::istream& text, std::vector<std::string>& id_map,
                           bool symmetrize = false, LoadStats* stats = nullptr);

// One token per line, exactly n lines; tokens mapped to {1..k} in
// first-appearance order.
LabelVector load_labels(std::istream& text, int n);
LabelVector load_labels(const std::string& text, int n);

CommunityStats community_stats(const LabelVector& labels);

// Writes "i j" lines (1-based) for each stored edge.
void write_edge_list(const Graph& graph, std::ostream& out);

}  // namespace efsc
