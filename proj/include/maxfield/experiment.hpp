#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "maxfield/estimators.hpp"

namespace maxfield {

inline constexpr const char* kExperimentSchema = "maxfield.experiment.v1";

/// Published reference values for one (R, k) cell of the Smith comparison tables.
struct ReferenceCell {
    double Q;
    double M;
    double ratio;
    double A;
    double P;
};

/// Reference values for (dim, R, k), if the published tables contain that cell.
std::optional<ReferenceCell> reference_value(int dim, double R, int k);

/// Smith-model comparison of the normalized sampler against Schlather's cut-off sampler.
struct ExperimentConfig {
    std::string name = "custom";
    int dim = 1;
    double sigma = 1.0;
    double grid_step = 0.1;
    std::vector<double> R_values{1.0};
    std::vector<int> k_values{2, 3};
    std::int64_t N = 5000;
    std::uint64_t seed = 0;
    int threads = 1;
    bool compare_reference = false;
    std::int64_t max_functions = 10'000'000;
};

/// d = 1, sigma = 1, h = 0.1, R in {1, 2, 5, 10, 50, 100}, k in {2, 3}, N = 5000.
ExperimentConfig table1_config();
/// d = 2, sigma = 1, h = 0.25, R in {1, 2, 5, 10}, k in {2, 3}, N = 2500.
ExperimentConfig table2_config();

struct ExperimentRow {
    double R = 0.0;
    int k = 0;
    std::int64_t N = 0;
    double c = 0.0;
    double window_volume = 0.0;
    stats::MeanSE Q;          // counted m, normalized sampler
    stats::MeanSE Q_formula;  // c / inf Z~
    stats::MeanSE M;          // counted M_k, Schlather sampler
    stats::MeanSE M_formula;  // |K (+) J| C / inf Z_J
    double ratio = 0.0;       // Q / M
    double A = 0.0;
    RatioEstimate P;
    FactorizationCheck factorization;
    stats::MeanSE count_gap;  // paired mean(M) - mean(m)
    std::optional<ReferenceCell> reference;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ExperimentRow> rows;
    double seconds = 0.0;
};

/// Runs N replications of each sampler per (R, k). Replication i of every
/// sampler uses stream (seed, i). Throws EmptyInput for N = 0.
ExperimentReport run_experiment(const ExperimentConfig& config);

void write_report_csv(std::ostream& os, const ExperimentReport& report);
nlohmann::json report_to_json(const ExperimentReport& report);

} // namespace maxfield
