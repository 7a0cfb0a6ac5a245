// Command-line driver: replication sweeps, dataset runs, aggregation of
// result CSVs, and the exhaustive privacy audit.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "efsc/experiments.hpp"
#include "efsc/privacy.hpp"

namespace {

int write_rows(const std::vector<efsc::ResultRow>& rows, const std::string& out_path) {
    if (out_path.empty()) {
        efsc::write_csv(rows, std::cout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file " << out_path << "\n";
        return 1;
    }
    efsc::write_csv(rows, out);
    return 0;
}

void apply_overrides(efsc::ExperimentConfig& config, bool seed_set, std::uint64_t seed,
                     bool threads_set, int threads) {
    if (seed_set) config.seed = seed;
    if (threads_set) config.threads = threads;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differentially private spectral community detection"};
    app.require_subcommand(1);

    std::string config_path, csv_path, out_path;
    std::uint64_t seed = 0;
    int threads = 1;
    int audit_n = 3;
    std::string audit_eps = "1";

    auto* sweep = app.add_subcommand("sweep", "Run a replication sweep over (n, epsilon)");
    sweep->add_option("config", config_path, "experiment config file")->required();
    auto* sweep_seed = sweep->add_option("--seed", seed, "override base seed");
    auto* sweep_threads = sweep->add_option("--threads", threads, "worker count");
    sweep->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* dataset = app.add_subcommand("dataset", "Evaluate a fixed observed network");
    dataset->add_option("config", config_path, "experiment config file")->required();
    auto* ds_seed = dataset->add_option("--seed", seed, "override base seed");
    auto* ds_threads = dataset->add_option("--threads", threads, "worker count");
    dataset->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* agg = app.add_subcommand("aggregate", "Aggregate a sweep CSV into per-cell means");
    agg->add_option("csv", csv_path, "sweep result CSV")->required();
    agg->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* audit = app.add_subcommand("audit", "Exhaustive privacy audit for small n");
    audit->add_option("--n", audit_n, "node count (2..4)")->required();
    audit->add_option("--epsilon", audit_eps, "privacy budget")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            auto config = efsc::parse_config_file(config_path);
            apply_overrides(config, sweep_seed->count() > 0, seed, sweep_threads->count() > 0,
                            threads);
            return write_rows(efsc::run_sweep(config), out_path);
        }
        if (dataset->parsed()) {
            auto config = efsc::parse_config_file(config_path);
            apply_overrides(config, ds_seed->count() > 0, seed, ds_threads->count() > 0, threads);
            return write_rows(efsc::run_dataset(config), out_path);
        }
        if (agg->parsed()) {
            std::ifstream in(csv_path);
            if (!in) {
                std::cerr << "cannot open " << csv_path << "\n";
                return 1;
            }
            auto table = efsc::aggregate(efsc::read_csv(in));
            if (out_path.empty()) {
                efsc::write_aggregate_csv(table, std::cout);
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) {
                    std::cerr << "cannot open output file " << out_path << "\n";
                    return 1;
                }
                efsc::write_aggregate_csv(table, out);
            }
            return 0;
        }
        if (audit->parsed()) {
            auto budget = efsc::PrivacyBudget::parse(audit_eps);
            double ratio = efsc::privacy_audit(audit_n, budget);
            std::cout << "max likelihood ratio: " << ratio << "\n"
                      << "e^epsilon:            " << std::exp(budget.epsilon()) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
