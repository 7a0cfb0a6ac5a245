// Batch experiment driver: config parsing, seeded replication sweeps over
// (regime, n, epsilon), dataset evaluation, CSV output and aggregation.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "efsc/clustering.hpp"
#include "efsc/privacy.hpp"

namespace efsc {

enum class Regime { dense_ssbm, sparse_ssbm, dense_sdcbm, sparse_sdcbm, dataset };
enum class Algorithm { kmeans, kmedians, automatic };

struct ExperimentConfig {
    Regime regime = Regime::dense_ssbm;
    std::vector<int> n_grid;
    std::vector<PrivacyBudget> epsilon_grid;
    int replications = 1;
    std::uint64_t seed = 0;
    int k = 3;
    // dense regimes: fixed probabilities; sparse regimes: p = p_coef * n^-p_exp
    double p = 0.2, r = 0.05, a = 0.3;
    double p_coef = 1.5, p_exp = 0.3, r_coef = 0.15, r_exp = 0.3;
    Algorithm algorithm = Algorithm::automatic;
    ClusterConfig cluster;
    double c1 = 1.0, c2 = 1.0;
    std::string dataset_edge_list;
    std::string dataset_labels;
    int threads = 1;
    bool timing = true;  // byte-identical reruns require timing = false

    // sparse-rule evaluation for a given n (regime defaults baked in)
    double p_at(int n) const;
    double r_at(int n) const;
};

struct ResultRow {
    std::string regime;
    int n = 0;
    PrivacyBudget epsilon = PrivacyBudget::infinite();
    int replication = 0;
    std::uint64_t seed = 0;
    double L = 0;
    double L_tilde = 0;
    double runtime_ms = 0;
    double condition_value = 0;
    double l_bound = 0;
    double l_tilde_bound = 0;
    bool condition_met = false;
    bool error = false;
};

// Parses the line-oriented `key = value` config format; `[section]`
// headers are allowed and ignored. Throws on unknown keys or bad values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

std::string regime_name(Regime regime);

// sample -> flip -> cluster -> score for every (n, epsilon, replication);
// rows in deterministic (n, epsilon, replication) order independent of
// config.threads. Per-replication failures become error rows.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

// Fixed observed graph from the dataset files; per (epsilon, replication)
// apply edge_flip then the normalized k-medians pipeline.
std::vector<ResultRow> run_dataset(const ExperimentConfig& config);

struct AggregateRow {
    std::string regime;
    int n = 0;
    PrivacyBudget epsilon = PrivacyBudget::infinite();
    double mean_L = 0;
    double sd_L = 0;
    double mean_L_tilde = 0;
    int count = 0;
    double log10_n = 0;
    double log10_mean_L = 0;  // NaN when mean_L == 0 (printed as a sentinel)
};

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);

extern const char* kCsvHeader;

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_csv(std::istream& in);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);

}  // namespace efsc
