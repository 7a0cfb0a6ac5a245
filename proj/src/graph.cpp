#include "efsc/graph.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace efsc {

Graph::Graph(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("Graph: node count must be positive");
    std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    bits_.assign((pairs + 63) / 64, 0);
}

void Graph::set_edge(int i, int j, bool value) {
    if (i == j) throw std::invalid_argument("Graph: self-loops not representable");
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw std::out_of_range("Graph: node index out of range");
    std::size_t p = index(i, j);
    if (value)
        bits_[p >> 6] |= (std::uint64_t{1} << (p & 63));
    else
        bits_[p >> 6] &= ~(std::uint64_t{1} << (p & 63));
}

std::size_t Graph::edge_count() const {
    std::size_t c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
}

void Graph::accumulate_matvec(const double* x, double* y) const {
    // word-level scan of each row's contiguous bit range
    std::size_t row_start = 0;
    for (int i = 0; i < n_; ++i) {
        const std::size_t len = static_cast<std::size_t>(n_ - 1 - i);
        const std::size_t row_end = row_start + len;
        std::size_t p = row_start;
        while (p < row_end) {
            std::size_t w_idx = p >> 6;
            int bit0 = static_cast<int>(p & 63);
            std::uint64_t w = bits_[w_idx] >> bit0;
            int avail = 64 - bit0;
            std::size_t take = std::min<std::size_t>(avail, row_end - p);
            if (take < 64) w &= (take == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << take) - 1));
            while (w) {
                int b = std::countr_zero(w);
                std::size_t q = p + b;
                int j = i + 1 + static_cast<int>(q - row_start);
                y[i] += x[j];
                y[j] += x[i];
                w &= w - 1;
            }
            p += take;
        }
        row_start = row_end;
    }
}

namespace {

struct Line {
    std::string text;
    int number;
};

// strips comments/blank lines, yields remaining lines with numbers
std::vector<Line> content_lines(std::istream& in) {
    std::vector<Line> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        out.push_back({line, number});
    }
    return out;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::runtime_error("edge list, line " + std::to_string(line) + ": " + what);
}

}  // namespace

Graph load_edge_list(std::istream& text, int n, bool symmetrize, IndexBase base,
                     LoadStats* stats) {
    auto lines = content_lines(text);
    if (lines.empty()) throw std::runtime_error("edge list: empty input");
    Graph g(n);
    LoadStats local;
    const int lo = base == IndexBase::one_based ? 1 : 0;
    const int hi = base == IndexBase::one_based ? n : n - 1;
    (void)symmetrize;  // max-symmetrization coincides with plain insertion in a binary store
    for (const auto& ln : lines) {
        std::istringstream ss(ln.text);
        long a, b;
        if (!(ss >> a >> b)) parse_fail(ln.number, "expected two node identifiers");
        if (a < lo || a > hi || b < lo || b > hi)
            parse_fail(ln.number, "node identifier out of range [" + std::to_string(lo) + "," +
                                      std::to_string(hi) + "]");
        int i = static_cast<int>(a - lo);
        int j = static_cast<int>(b - lo);
        if (i == j) {
            ++local.self_loops;
            continue;
        }
        if (g.edge(i, j))
            ++local.duplicate_edges;
        else
            g.set_edge(i, j, true);
    }
    if (stats) *stats = local;
    return g;
}

Graph load_edge_list(const std::string& text, int n, bool symmetrize, IndexBase base,
                     LoadStats* stats) {
    std::istringstream ss(text);
    return load_edge_list(ss, n, symmetrize, base, stats);
}

Graph load_edge_list_named(std::istream& text, std::vector<std::string>& id_map,
                           bool symmetrize, LoadStats* stats) {
    auto lines = content_lines(text);
    if (lines.empty()) throw std::runtime_error("edge list: empty input");
    (void)symmetrize;
    std::unordered_map<std::string, int> ids;
    id_map.clear();
    std::vector<std::pair<int, int>> edges;
    LoadStats local;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = ids.emplace(tok, static_cast<int>(id_map.size()));
        if (fresh) id_map.push_back(tok);
        return it->second;
    };
    for (const auto& ln : lines) {
        std::istringstream ss(ln.text);
        std::string a, b;
        if (!(ss >> a >> b)) parse_fail(ln.number, "expected two node identifiers");
        int i = intern(a), j = intern(b);
        if (i == j) {
            ++local.self_loops;
            continue;
        }
        edges.emplace_back(i, j);
    }
    Graph g(static_cast<int>(id_map.size()));
    for (auto [i, j] : edges) {
        if (g.edge(i, j))
            ++local.duplicate_edges;
        else
            g.set_edge(i, j, true);
    }
    if (stats) *stats = local;
    return g;
}

LabelVector load_labels(std::istream& text, int n) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(text, line)) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::size_t last = line.find_last_not_of(" \t\r");
        tokens.push_back(line.substr(first, last - first + 1));
    }
    if (static_cast<int>(tokens.size()) != n)
        throw std::runtime_error("label file: expected " + std::to_string(n) + " lines, got " +
                                 std::to_string(tokens.size()));
    std::unordered_map<std::string, int> ids;
    LabelVector lv;
    lv.labels.reserve(n);
    for (const auto& tok : tokens) {
        auto [it, fresh] = ids.emplace(tok, lv.k + 1);
        if (fresh) ++lv.k;
        lv.labels.push_back(it->second);
    }
    return lv;
}

LabelVector load_labels(const std::string& text, int n) {
    std::istringstream ss(text);
    return load_labels(ss, n);
}

CommunityStats community_stats(const LabelVector& labels) {
    CommunityStats cs;
    cs.block_sizes.assign(labels.k, 0);
    for (int lbl : labels.labels) {
        if (lbl < 1 || lbl > labels.k)
            throw std::invalid_argument("community_stats: label out of range");
        ++cs.block_sizes[lbl - 1];
    }
    cs.n_min = labels.size();
    cs.n_max = 0;
    int second = 0;
    for (int s : cs.block_sizes) {
        cs.n_min = std::min(cs.n_min, s);
        if (s >= cs.n_max) {
            second = cs.n_max;
            cs.n_max = s;
        } else if (s > second) {
            second = s;
        }
    }
    cs.n_max_prime = labels.k == 1 ? cs.n_max : second;
    return cs;
}

void write_edge_list(const Graph& graph, std::ostream& out) {
    graph.for_each_edge([&](int i, int j) { out << (i + 1) << ' ' << (j + 1) << '\n'; });
}

}  // namespace efsc
