#include "efsc/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "efsc/block_models.hpp"
#include "efsc/metrics.hpp"

namespace efsc {

const char* kCsvHeader =
    "regime,n,epsilon,replication,seed,L,L_tilde,runtime_ms,condition_value,l_bound,"
    "l_tilde_bound,condition_met";

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t budget_tag(PrivacyBudget b) { return fnv1a(b.to_string()); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

void apply_regime_defaults(ExperimentConfig& c) {
    switch (c.regime) {
        case Regime::dense_ssbm:
            c.k = 3; c.p = 0.2; c.r = 0.05;
            break;
        case Regime::sparse_ssbm:
            c.k = 2; c.p_coef = 1.5; c.p_exp = 0.3; c.r_coef = 0.15; c.r_exp = 0.3;
            break;
        case Regime::dense_sdcbm:
            c.k = 3; c.p = 0.4; c.r = 0.05; c.a = 0.3;
            break;
        case Regime::sparse_sdcbm:
            c.k = 2; c.p_coef = 2.0; c.p_exp = 0.25; c.r_coef = 0.1; c.r_exp = 0.25; c.a = 0.3;
            break;
        case Regime::dataset:
            break;
    }
}

bool is_sparse(Regime r) { return r == Regime::sparse_ssbm || r == Regime::sparse_sdcbm; }
bool is_sdcbm(Regime r) { return r == Regime::dense_sdcbm || r == Regime::sparse_sdcbm; }

struct RepOutcome {
    double L = kNaN, L_tilde = kNaN, runtime_ms = 0;
    double condition_value = kNaN, l_bound = kNaN, l_tilde_bound = kNaN;
    bool condition_met = false;
    bool error = false;
};

RepOutcome run_replication(const ExperimentConfig& config, int n, PrivacyBudget eps,
                           std::uint64_t rep_seed) {
    RepOutcome out;
    auto t0 = std::chrono::steady_clock::now();
    try {
        RngStream root(rep_seed);
        RngStream psi_stream = root.substream(1);
        RngStream edge_stream = root.substream(2);
        RngStream flip_stream = root.substream(3);
        RngStream cluster_stream = root.substream(4);

        SymmetricSpec spec;
        spec.n = n;
        spec.k = config.k;
        spec.p = config.p_at(n);
        spec.r = config.r_at(n);
        spec.a = config.a;
        BlockModelParams params = is_sdcbm(config.regime)
                                      ? make_symmetric_dcbm(spec, psi_stream)
                                      : make_symmetric_sbm(spec);

        Graph y = sample(params, edge_stream);
        Graph observed = edge_flip(y, eps, flip_stream);

        bool use_kmedians = config.algorithm == Algorithm::kmedians ||
                            (config.algorithm == Algorithm::automatic && is_sdcbm(config.regime));
        ClusterConfig cc = config.cluster;
        LabelVector estimate =
            use_kmedians ? ef_spectral_kmedians(observed, config.k, cc.gamma, eps, cc,
                                                cluster_stream)
                         : ef_spectral_kmeans(observed, config.k, cc.gamma, eps, cc,
                                              cluster_stream);

        out.L = overall_misclassification(params.labels, estimate);
        out.L_tilde = worstcase_misclassification(params.labels, estimate);

        BoundReport br = is_sdcbm(config.regime)
                             ? dcbm_bound_report(params, cc.gamma, eps, config.c2)
                             : sbm_bound_report(params, cc.gamma, eps, config.c1);
        out.condition_value = br.condition_value;
        out.l_bound = br.l_bound;
        out.l_tilde_bound = br.l_tilde_bound;
        out.condition_met = br.condition_met;
    } catch (const std::exception&) {
        out.error = true;
    }
    if (config.timing) {
        out.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
    }
    return out;
}

// runs tasks [0, count) across config.threads workers, writing results by
// task index so output order is scheduling-independent
template <typename Task>
void run_parallel(int count, int threads, Task&& task) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

double ExperimentConfig::p_at(int n) const {
    return is_sparse(regime) ? p_coef * std::pow(n, -p_exp) : p;
}

double ExperimentConfig::r_at(int n) const {
    return is_sparse(regime) ? r_coef * std::pow(n, -r_exp) : r;
}

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::dense_ssbm: return "dense_ssbm";
        case Regime::sparse_ssbm: return "sparse_ssbm";
        case Regime::dense_sdcbm: return "dense_sdcbm";
        case Regime::sparse_sdcbm: return "sparse_sdcbm";
        case Regime::dataset: return "dataset";
    }
    return "?";
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    bool regime_seen = false;
    std::string line;
    int number = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("config, line " + std::to_string(number) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++number;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') continue;  // section header, informational
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        try {
            if (key == "regime") {
                if (value == "dense_ssbm") c.regime = Regime::dense_ssbm;
                else if (value == "sparse_ssbm") c.regime = Regime::sparse_ssbm;
                else if (value == "dense_sdcbm") c.regime = Regime::dense_sdcbm;
                else if (value == "sparse_sdcbm") c.regime = Regime::sparse_sdcbm;
                else if (value == "dataset") c.regime = Regime::dataset;
                else fail("unknown regime '" + value + "'");
                apply_regime_defaults(c);
                regime_seen = true;
            } else if (key == "n_grid") {
                c.n_grid.clear();
                for (const auto& tok : split(value, ',')) c.n_grid.push_back(std::stoi(tok));
            } else if (key == "epsilon_grid") {
                c.epsilon_grid.clear();
                for (const auto& tok : split(value, ','))
                    c.epsilon_grid.push_back(PrivacyBudget::parse(tok));
            } else if (key == "replications") c.replications = std::stoi(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else if (key == "k") c.k = std::stoi(value);
            else if (key == "p") c.p = std::stod(value);
            else if (key == "r") c.r = std::stod(value);
            else if (key == "a") c.a = std::stod(value);
            else if (key == "p_coef") c.p_coef = std::stod(value);
            else if (key == "p_exp") c.p_exp = std::stod(value);
            else if (key == "r_coef") c.r_coef = std::stod(value);
            else if (key == "r_exp") c.r_exp = std::stod(value);
            else if (key == "algorithm") {
                if (value == "kmeans") c.algorithm = Algorithm::kmeans;
                else if (value == "kmedians") c.algorithm = Algorithm::kmedians;
                else if (value == "auto") c.algorithm = Algorithm::automatic;
                else fail("unknown algorithm '" + value + "'");
            } else if (key == "restarts") c.cluster.restarts = std::stoi(value);
            else if (key == "max_iterations") c.cluster.max_iterations = std::stoi(value);
            else if (key == "tolerance") c.cluster.tolerance = std::stod(value);
            else if (key == "gamma") c.cluster.gamma = std::stod(value);
            else if (key == "c1") c.c1 = std::stod(value);
            else if (key == "c2") c.c2 = std::stod(value);
            else if (key == "edge_list") c.dataset_edge_list = value;
            else if (key == "labels") c.dataset_labels = value;
            else if (key == "threads") c.threads = std::stoi(value);
            else if (key == "timing") c.timing = (value == "true" || value == "1" || value == "on");
            else fail("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (!regime_seen) throw std::runtime_error("config: missing 'regime'");
    if (c.epsilon_grid.empty()) throw std::runtime_error("config: epsilon_grid must be nonempty");
    if (c.replications < 1) throw std::runtime_error("config: replications must be >= 1");
    if (c.regime == Regime::dataset) {
        if (c.dataset_edge_list.empty() || c.dataset_labels.empty())
            throw std::runtime_error("config: dataset regime requires edge_list and labels paths");
    } else if (c.n_grid.empty()) {
        throw std::runtime_error("config: n_grid must be nonempty");
    }
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
    if (config.regime == Regime::dataset) return run_dataset(config);
    const int n_count = static_cast<int>(config.n_grid.size());
    const int e_count = static_cast<int>(config.epsilon_grid.size());
    const int total = n_count * e_count * config.replications;
    std::vector<ResultRow> rows(total);

    run_parallel(total, config.threads, [&](int idx) {
        const int ni = idx / (e_count * config.replications);
        const int ei = (idx / config.replications) % e_count;
        const int rep = idx % config.replications;
        const int n = config.n_grid[ni];
        const PrivacyBudget eps = config.epsilon_grid[ei];
        const std::uint64_t rep_seed = RngStream::combine(
            {config.seed, static_cast<std::uint64_t>(n), budget_tag(eps),
             static_cast<std::uint64_t>(rep)});
        RepOutcome o = run_replication(config, n, eps, rep_seed);
        ResultRow& row = rows[idx];
        row.regime = regime_name(config.regime);
        row.n = n;
        row.epsilon = eps;
        row.replication = rep;
        row.seed = rep_seed;
        row.L = o.L;
        row.L_tilde = o.L_tilde;
        row.runtime_ms = o.runtime_ms;
        row.condition_value = o.condition_value;
        row.l_bound = o.l_bound;
        row.l_tilde_bound = o.l_tilde_bound;
        row.condition_met = o.condition_met;
        row.error = o.error;
    });
    return rows;
}

std::vector<ResultRow> run_dataset(const ExperimentConfig& config) {
    std::ifstream edges_in(config.dataset_edge_list);
    if (!edges_in)
        throw std::runtime_error("dataset: cannot open edge list " + config.dataset_edge_list);
    std::ifstream labels_in(config.dataset_labels);
    if (!labels_in)
        throw std::runtime_error("dataset: cannot open labels " + config.dataset_labels);

    // count label lines first to size the graph
    std::stringstream labels_text;
    labels_text << labels_in.rdbuf();
    int n = 0;
    {
        std::istringstream count(labels_text.str());
        std::string line;
        while (std::getline(count, line))
            if (!trim(line).empty()) ++n;
    }
    LabelVector truth = load_labels(labels_text.str(), n);
    Graph base = load_edge_list(edges_in, n, /*symmetrize=*/true);
    const int k = truth.k;

    const int e_count = static_cast<int>(config.epsilon_grid.size());
    const int total = e_count * config.replications;
    std::vector<ResultRow> rows(total);

    run_parallel(total, config.threads, [&](int idx) {
        const int ei = idx / config.replications;
        const int rep = idx % config.replications;
        const PrivacyBudget eps = config.epsilon_grid[ei];
        const std::uint64_t rep_seed =
            RngStream::combine({config.seed, static_cast<std::uint64_t>(n), budget_tag(eps),
                                static_cast<std::uint64_t>(rep)});
        ResultRow& row = rows[idx];
        row.regime = "dataset";
        row.n = n;
        row.epsilon = eps;
        row.replication = rep;
        row.seed = rep_seed;
        row.condition_value = kNaN;
        row.l_bound = kNaN;
        row.l_tilde_bound = kNaN;
        auto t0 = std::chrono::steady_clock::now();
        try {
            RngStream root(rep_seed);
            RngStream flip_stream = root.substream(3);
            RngStream cluster_stream = root.substream(4);
            Graph observed = edge_flip(base, eps, flip_stream);
            ClusterConfig cc = config.cluster;
            bool use_kmeans = config.algorithm == Algorithm::kmeans;
            LabelVector estimate =
                use_kmeans
                    ? ef_spectral_kmeans(observed, k, cc.gamma, eps, cc, cluster_stream)
                    : ef_spectral_kmedians(observed, k, cc.gamma, eps, cc, cluster_stream);
            row.L = overall_misclassification(truth, estimate);
            row.L_tilde = worstcase_misclassification(truth, estimate);
        } catch (const std::exception&) {
            row.L = kNaN;
            row.L_tilde = kNaN;
            row.error = true;
        }
        if (config.timing) {
            row.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
        }
    });
    return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
    // first-appearance cell order
    std::vector<AggregateRow> out;
    std::map<std::tuple<std::string, int, std::string>, std::size_t> index;
    std::vector<std::vector<double>> values_L, values_Lt;
    for (const auto& row : rows) {
        auto key = std::make_tuple(row.regime, row.n, row.epsilon.to_string());
        auto it = index.find(key);
        std::size_t cell;
        if (it == index.end()) {
            cell = out.size();
            index.emplace(key, cell);
            AggregateRow agg;
            agg.regime = row.regime;
            agg.n = row.n;
            agg.epsilon = row.epsilon;
            agg.log10_n = std::log10(static_cast<double>(row.n));
            out.push_back(agg);
            values_L.emplace_back();
            values_Lt.emplace_back();
        } else {
            cell = it->second;
        }
        if (!std::isnan(row.L)) {
            values_L[cell].push_back(row.L);
            values_Lt[cell].push_back(row.L_tilde);
        }
    }
    for (std::size_t c = 0; c < out.size(); ++c) {
        const auto& v = values_L[c];
        out[c].count = static_cast<int>(v.size());
        if (v.empty()) {
            out[c].mean_L = kNaN;
            out[c].sd_L = kNaN;
            out[c].mean_L_tilde = kNaN;
            out[c].log10_mean_L = kNaN;
            continue;
        }
        double mean = 0;
        for (double x : v) mean += x;
        mean /= v.size();
        double var = 0;
        for (double x : v) var += (x - mean) * (x - mean);
        out[c].mean_L = mean;
        out[c].sd_L = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
        double mt = 0;
        for (double x : values_Lt[c]) mt += x;
        out[c].mean_L_tilde = mt / v.size();
        out[c].log10_mean_L = mean > 0 ? std::log10(mean) : kNaN;
    }
    return out;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& outs) {
    outs << kCsvHeader << '\n';
    for (const auto& r : rows) {
        outs << r.regime << ',' << r.n << ',' << r.epsilon.to_string() << ',' << r.replication
             << ',' << r.seed << ',' << fmt(r.L) << ',' << fmt(r.L_tilde) << ','
             << fmt(r.runtime_ms) << ',' << fmt(r.condition_value) << ',' << fmt(r.l_bound)
             << ',' << fmt(r.l_tilde_bound) << ',' << (r.condition_met ? "true" : "false")
             << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (trim(line) != kCsvHeader) throw std::runtime_error("csv: unexpected header");
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 12)
            throw std::runtime_error("csv, line " + std::to_string(number) + ": expected 12 fields");
        ResultRow r;
        r.regime = f[0];
        r.n = std::stoi(f[1]);
        r.epsilon = PrivacyBudget::parse(f[2]);
        r.replication = std::stoi(f[3]);
        r.seed = std::stoull(f[4]);
        r.L = std::stod(f[5]);
        r.L_tilde = std::stod(f[6]);
        r.runtime_ms = std::stod(f[7]);
        r.condition_value = std::stod(f[8]);
        r.l_bound = std::stod(f[9]);
        r.l_tilde_bound = std::stod(f[10]);
        r.condition_met = (f[11] == "true" || f[11] == "1");
        r.error = std::isnan(r.L);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& outs) {
    outs << "regime,n,epsilon,mean_L,sd_L,mean_L_tilde,count,log10_n,log10_mean_L\n";
    for (const auto& r : rows) {
        outs << r.regime << ',' << r.n << ',' << r.epsilon.to_string() << ',' << fmt(r.mean_L)
             << ',' << fmt(r.sd_L) << ',' << fmt(r.mean_L_tilde) << ',' << r.count << ','
             << fmt(r.log10_n) << ',';
        if (std::isnan(r.log10_mean_L))
            outs << "undef";
        else
            outs << fmt(r.log10_mean_L);
        outs << '\n';
    }
}

}  // namespace efsc
