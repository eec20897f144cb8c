#include "maxfield/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "maxfield/errors.hpp"
#include "maxfield/parallel.hpp"

namespace maxfield {

namespace {

struct ReferenceRow {
    int dim;
    double R;
    double Q;
    ReferenceCell k2;
    ReferenceCell k3;
};

// Published Smith-model comparison tables (sigma = 1; d = 1: h = 0.1, N = 5000; d = 2: h = 0.25, N = 2500).
constexpr ReferenceRow kReference[] = {
    {1, 1, 3.12, {3.12, 4.38, 0.71, 0.75, 0.94}, {3.12, 5.46, 0.57, 0.56, 1.00}},
    {1, 2, 5.73, {5.73, 7.57, 0.76, 0.81, 0.94}, {5.73, 8.93, 0.64, 0.65, 0.98}},
    {1, 5, 15.82, {15.82, 18.82, 0.84, 0.89, 0.95}, {15.82, 19.98, 0.79, 0.78, 1.02}},
    {1, 10, 35.63, {35.63, 40.57, 0.88, 0.94, 0.94}, {35.63, 41.16, 0.87, 0.87, 1.00}},
    {1, 50, 239.75, {239.75, 257.61, 0.93, 0.99, 0.94}, {239.75, 247.35, 0.97, 0.97, 1.00}},
    {1, 100, 540.44, {540.44, 579.11, 0.93, 0.99, 0.94}, {540.44, 550.70, 0.98, 0.98, 1.00}},
    {2, 1, 8.14, {8.14, 14.86, 0.55, 0.56, 0.96}, {8.14, 26.37, 0.31, 0.32, 0.96}},
    {2, 2, 26.32, {26.32, 40.17, 0.66, 0.66, 1.00}, {26.32, 61.07, 0.43, 0.42, 1.03}},
    {2, 5, 150.89, {150.89, 189.83, 0.79, 0.80, 0.99}, {150.89, 247.10, 0.61, 0.61, 1.00}},
    {2, 10, 636.03, {636.03, 727.33, 0.87, 0.88, 0.99}, {636.03, 839.55, 0.76, 0.75, 1.01}},
};

// Keeps only what the reductions need.
Realization summarize(Realization r) {
    r.field.resize(0);
    r.partial_sums.clear();
    r.partial_sums.shrink_to_fit();
    return r;
}

nlohmann::json to_json(const stats::MeanSE& m) { return {{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

} // namespace

std::optional<ReferenceCell> reference_value(int dim, double R, int k) {
    for (const auto& row : kReference) {
        if (row.dim != dim || std::abs(row.R - R) > 1e-12) continue;
        if (k == 2) return row.k2;
        if (k == 3) return row.k3;
    }
    return std::nullopt;
}

ExperimentConfig table1_config() {
    ExperimentConfig c;
    c.name = "table1";
    c.dim = 1;
    c.sigma = 1.0;
    c.grid_step = 0.1;
    c.R_values = {1, 2, 5, 10, 50, 100};
    c.k_values = {2, 3};
    c.N = 5000;
    return c;
}

ExperimentConfig table2_config() {
    ExperimentConfig c;
    c.name = "table2";
    c.dim = 2;
    c.sigma = 1.0;
    c.grid_step = 0.25;
    c.R_values = {1, 2, 5, 10};
    c.k_values = {2, 3};
    c.N = 2500;
    return c;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.N <= 0) throw EmptyInput("experiment needs N >= 1 replications");
    if (config.R_values.empty() || config.k_values.empty()) throw EmptyInput("experiment needs at least one R and one k");
    for (double R : config.R_values)
        if (!(R >= 0.0)) throw ConfigError("R must be non-negative");
    for (int k : config.k_values)
        if (k < 1) throw ConfigError("k must be a positive integer");

    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = config;
    SimulationOptions opts;
    opts.max_functions = config.max_functions;

    for (double R : config.R_values) {
        const SpectralModel model(RadialShape::gaussian(config.sigma, config.dim),
                                  RectDomain(config.dim, R, config.grid_step));
        const auto normalized = run_replications(config.N, config.threads, [&](std::int64_t i) {
            auto stream = derive_stream(config.seed, static_cast<std::uint64_t>(i));
            return summarize(simulate_normalized(model, stream, StoppingVariant::Exact, opts));
        });
        const auto Q = estimate_counts(normalized);
        const auto Q_formula = formula_estimate_Q(normalized, model.c());

        for (int k : config.k_values) {
            const auto window = schlather_window(model, k);
            const auto schlather = run_replications(config.N, config.threads, [&](std::int64_t i) {
                auto stream = derive_stream(config.seed, static_cast<std::uint64_t>(i));
                return summarize(simulate_schlather(model, k, stream, opts));
            });

            ExperimentRow row;
            row.R = R;
            row.k = k;
            row.N = config.N;
            row.c = model.c();
            row.window_volume = window.volume;
            row.Q = Q;
            row.Q_formula = Q_formula;
            row.M = estimate_counts(schlather);
            row.M_formula = formula_estimate_M(schlather, window.volume, model.peak());
            row.ratio = row.Q.mean / row.M.mean;
            row.A = A_factor(R, config.sigma, k, config.dim);
            row.P = P_factor(normalized, schlather);
            row.factorization = factorization_check(normalized, schlather, row.A);
            row.count_gap = paired_count_difference(normalized, schlather);
            if (config.compare_reference && std::abs(config.sigma - 1.0) < 1e-12)
                row.reference = reference_value(config.dim, R, k);
            report.rows.push_back(row);
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
    const bool ref = report.config.compare_reference;
    os << "dim,R,k,N,c,Q,Q_se,Q_formula,Q_formula_se,M,M_se,M_formula,M_formula_se,ratio,A,P,P_se,"
          "factorization_diff,factorization_se";
    if (ref) os << ",ref_Q,ref_M,ref_ratio,ref_A,ref_P";
    os << '\n';
    const auto old = os.precision(10);
    for (const auto& r : report.rows) {
        os << report.config.dim << ',' << r.R << ',' << r.k << ',' << r.N << ',' << r.c << ',' << r.Q.mean << ','
           << r.Q.se << ',' << r.Q_formula.mean << ',' << r.Q_formula.se << ',' << r.M.mean << ',' << r.M.se << ','
           << r.M_formula.mean << ',' << r.M_formula.se << ',' << r.ratio << ',' << r.A << ',' << r.P.value << ','
           << r.P.se << ',' << r.factorization.difference << ',' << r.factorization.se;
        if (ref) {
            if (r.reference)
                os << ',' << r.reference->Q << ',' << r.reference->M << ',' << r.reference->ratio << ','
                   << r.reference->A << ',' << r.reference->P;
            else
                os << ",,,,,";
        }
        os << '\n';
    }
    os.precision(old);
}

nlohmann::json report_to_json(const ExperimentReport& report) {
    const auto& c = report.config;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row = {
            {"R", r.R},
            {"k", r.k},
            {"N", r.N},
            {"c", r.c},
            {"window_volume", r.window_volume},
            {"Q", to_json(r.Q)},
            {"Q_formula", to_json(r.Q_formula)},
            {"M", to_json(r.M)},
            {"M_formula", to_json(r.M_formula)},
            {"ratio", r.ratio},
            {"A", r.A},
            {"P", {{"value", r.P.value}, {"se", r.P.se}}},
            {"factorization",
             {{"ratio", r.factorization.ratio},
              {"A_times_P", r.factorization.a_times_p},
              {"difference", r.factorization.difference},
              {"se", r.factorization.se}}},
            {"count_gap", to_json(r.count_gap)},
        };
        if (r.reference) {
            row["reference"] = {{"Q", r.reference->Q},
                                {"M", r.reference->M},
                                {"ratio", r.reference->ratio},
                                {"A", r.reference->A},
                                {"P", r.reference->P}};
        }
        rows.push_back(std::move(row));
    }
    return {
        {"schema", kExperimentSchema},
        {"config",
         {{"name", c.name},
          {"dim", c.dim},
          {"sigma", c.sigma},
          {"grid_step", c.grid_step},
          {"R", c.R_values},
          {"k", c.k_values},
          {"N", c.N},
          {"seed", c.seed},
          {"compare_reference", c.compare_reference},
          {"max_functions", c.max_functions}}},
        {"rows", std::move(rows)},
    };
}

} // namespace maxfield
