// maxfield: exact simulation of max-stable moving-maxima fields on rectangular grids.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxfield/errors.hpp"
#include "maxfield/estimators.hpp"
#include "maxfield/experiment.hpp"
#include "maxfield/parallel.hpp"
#include "maxfield/simulators.hpp"
#include "maxfield/validation.hpp"

namespace {

using namespace maxfield;
using json = nlohmann::json;

constexpr const char* kFieldSchema = "maxfield.field.v1";

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfig = 2, kBudget = 3 };

struct ModelFlags {
    std::string shape = "gaussian";
    double sigma = 1.0;
    double r = 1.0;
    std::string scaling = "unit";
    int dim = 1;
    double R = 1.0;
    double h = 0.1;

    SpectralModel build() const {
        RectDomain domain(dim, R, h);
        if (shape == "gaussian") return SpectralModel(RadialShape::gaussian(sigma, dim), domain);
        if (shape == "indicator") {
            IndicatorScaling s;
            if (scaling == "unit")
                s = IndicatorScaling::UnitIntegral;
            else if (scaling == "raw")
                s = IndicatorScaling::Raw;
            else
                throw ConfigError("scaling must be unit or raw");
            return SpectralModel(RadialShape::indicator(r, dim, s), domain);
        }
        throw ConfigError("shape must be gaussian or indicator");
    }

    json echo() const {
        return {{"shape", shape}, {"sigma", sigma}, {"r", r}, {"scaling", scaling}, {"dim", dim}, {"R", R}, {"h", h}};
    }
};

struct SimulateFlags {
    ModelFlags model;
    std::string method = "normalized";
    std::string variant = "exact";
    int k = 2;
    std::string weight = "gstar";
    std::uint64_t seed = 0;
    std::uint64_t replication = 0;
    std::int64_t max_functions = 10'000'000;
    std::string out = "field.csv";
    std::string trace;
    std::int64_t trace_n = 0;
    int threads = 1;
};

struct ExperimentFlags {
    std::string table = "table1";
    std::optional<std::int64_t> N;
    std::vector<double> R;
    std::vector<int> k;
    std::optional<double> h;
    std::optional<double> sigma;
    std::uint64_t seed = 0;
    int threads = 1;
    bool compare = false;
    std::string out = "report";
};

struct ValidateFlags {
    std::uint64_t seed = 0;
    std::int64_t N = 5000;
    std::int64_t N_large = 10000;
    int threads = 1;
    std::string out;
};

ShiftDensitySpec parse_weight(const std::string& text) {
    if (text == "gstar") return GStarWeight{};
    const std::string prefix = "uniform:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            return UniformWindowWeight{std::stod(text.substr(prefix.size()))};
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("weight must be gstar or uniform:<halfwidth>");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path);
    return os;
}

Realization simulate_one(const SpectralModel& model, const SimulateFlags& f, RngStream& stream) {
    SimulationOptions opts;
    opts.max_functions = f.max_functions;
    switch (parse_method(f.method)) {
    case Method::Normalized: return simulate_normalized(model, stream, parse_variant(f.variant), opts);
    case Method::Schlather: return simulate_schlather(model, f.k, stream, opts);
    case Method::Transformed: return simulate_transformed(model, parse_weight(f.weight), stream, opts);
    }
    throw ConfigError("unknown method");
}

int cmd_simulate(const SimulateFlags& f) {
    const SpectralModel model = f.model.build();
    if (f.k < 1) throw ConfigError("k must be a positive integer");
    parse_method(f.method);
    parse_variant(f.variant);

    auto stream = derive_stream(f.seed, f.replication);
    const Realization r = simulate_one(model, f, stream);

    {
        auto os = open_output(f.out);
        os.precision(17);
        const auto& grid = model.domain().grid();
        os << (model.dim() == 1 ? "y1,z\n" : "y1,y2,z\n");
        for (Eigen::Index i = 0; i < grid.rows(); ++i) {
            for (Eigen::Index j = 0; j < grid.cols(); ++j) os << grid(i, j) << ',';
            os << r.field[i] << '\n';
        }
    }

    json sidecar = {
        {"schema", kFieldSchema},
        {"config",
         {{"model", f.model.echo()},
          {"method", f.method},
          {"variant", f.variant},
          {"k", f.k},
          {"weight", f.weight},
          {"seed", f.seed},
          {"replication", f.replication},
          {"max_functions", f.max_functions}}},
        {"c", model.c()},
        {"m", r.n_spectral},
        {"inf", r.inf_field},
        {"sup", r.sup_field},
        {"first_arrival", r.first_arrival},
        {"arrivals_consumed", r.arrivals_consumed()},
        {"grid_points", model.domain().size()},
    };
    if (parse_method(f.method) == Method::Schlather) sidecar["window_volume"] = schlather_window(model, f.k).volume;
    auto js = open_output(f.out + ".json");
    js << sidecar.dump(2) << '\n';

    if (!f.trace.empty()) {
        const std::int64_t n = f.trace_n > 0 ? f.trace_n : 1;
        const auto reps = run_replications(n, f.threads, [&](std::int64_t i) {
            auto s = derive_stream(f.seed, f.replication + static_cast<std::uint64_t>(i));
            return simulate_one(model, f, s);
        });
        auto ts = open_output(f.trace);
        write_trace_csv(ts, reps);
    }
    return kOk;
}

int cmd_experiment(const ExperimentFlags& f) {
    ExperimentConfig cfg;
    if (f.table == "table1")
        cfg = table1_config();
    else if (f.table == "table2")
        cfg = table2_config();
    else
        throw ConfigError("experiment table must be table1 or table2");
    if (f.N) cfg.N = *f.N;
    if (!f.R.empty()) cfg.R_values = f.R;
    if (!f.k.empty()) cfg.k_values = f.k;
    if (f.h) cfg.grid_step = *f.h;
    if (f.sigma) cfg.sigma = *f.sigma;
    cfg.seed = f.seed;
    cfg.threads = f.threads;
    cfg.compare_reference = f.compare;
    if (cfg.N < 1) throw ConfigError("N must be positive");

    const ExperimentReport report = run_experiment(cfg);
    {
        auto os = open_output(f.out + ".csv");
        write_report_csv(os, report);
    }
    json j = report_to_json(report);
    j["config"]["threads"] = cfg.threads;
    auto js = open_output(f.out + ".json");
    js << j.dump(2) << '\n';

    for (const auto& row : report.rows) {
        std::cout << "R=" << row.R << " k=" << row.k << "  Q=" << row.Q.mean << " (se " << row.Q.se << ")  M=" << row.M.mean
                  << " (se " << row.M.se << ")  ratio=" << row.ratio << "  A=" << row.A << "  P=" << row.P.value;
        if (row.reference)
            std::cout << "   [reference Q=" << row.reference->Q << " M=" << row.reference->M << " P=" << row.reference->P
                      << "]";
        std::cout << '\n';
    }
    return kOk;
}

int cmd_validate(const ValidateFlags& f) {
    ValidationConfig cfg;
    cfg.seed = f.seed;
    cfg.N = f.N;
    cfg.N_large = f.N_large;
    cfg.threads = f.threads;
    if (cfg.N < 100 || cfg.N_large < 100) throw ConfigError("N must be at least 100");

    const auto checks = run_validation(cfg);
    const json j = validation_to_json(cfg, checks);
    if (!f.out.empty()) {
        auto os = open_output(f.out);
        os << j.dump(2) << '\n';
    }
    std::cout << j.dump(2) << '\n';
    for (const auto& c : checks)
        if (!c.passed) std::cerr << "check failed: " << c.name << '\n';
    return j["all_passed"].get<bool>() ? kOk : kCheckFailed;
}

void add_model_flags(CLI::App* app, ModelFlags& m) {
    app->add_option("--shape", m.shape, "gaussian | indicator")->capture_default_str();
    app->add_option("--sigma", m.sigma, "Gaussian standard deviation")->capture_default_str();
    app->add_option("--r", m.r, "indicator radius")->capture_default_str();
    app->add_option("--scaling", m.scaling, "indicator scaling: unit | raw")->capture_default_str();
    app->add_option("--dim", m.dim, "dimension (1 or 2)")->capture_default_str();
    app->add_option("--R", m.R, "half-width of K = [-R, R]^dim")->capture_default_str();
    app->add_option("--h", m.h, "grid step; must divide 2R")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulation of max-stable moving-maxima fields"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "key=value configuration file; flags take precedence");
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "simulate one field and write CSV + JSON sidecar");
    add_model_flags(simulate, sim.model);
    simulate->add_option("--method", sim.method, "normalized | schlather | transformed")->capture_default_str();
    simulate->add_option("--variant", sim.variant, "stopping rule: exact | strong | weak")->capture_default_str();
    simulate->add_option("--k", sim.k, "Schlather cut-off multiple")->capture_default_str();
    simulate->add_option("--weight", sim.weight, "shift density: gstar | uniform:<halfwidth>")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    simulate->add_option("--replication", sim.replication, "stream index")->capture_default_str();
    simulate->add_option("--max-functions", sim.max_functions, "spectral function budget")->capture_default_str();
    simulate->add_option("--out", sim.out, "field CSV path; sidecar is <out>.json")->capture_default_str();
    simulate->add_option("--trace", sim.trace, "per-replication trace CSV path");
    simulate->add_option("--trace-n", sim.trace_n, "replications in the trace");
    simulate->add_option("--threads", sim.threads, "worker threads")->envname("MAXFIELD_THREADS")->capture_default_str();

    ExperimentFlags exp;
    auto* experiment = app.add_subcommand("experiment", "normalized vs Schlather comparison on the Smith model");
    experiment->add_option("table", exp.table, "table1 (d=1) | table2 (d=2)")->required();
    experiment->add_option("--N", exp.N, "replications per sampler");
    experiment->add_option("--R", exp.R, "half-widths to run");
    experiment->add_option("--k", exp.k, "cut-off multiples");
    experiment->add_option("--h", exp.h, "grid step");
    experiment->add_option("--sigma", exp.sigma, "Gaussian standard deviation");
    experiment->add_option("--seed", exp.seed, "master seed")->required();
    experiment->add_option("--threads", exp.threads, "worker threads")->envname("MAXFIELD_THREADS")->capture_default_str();
    experiment->add_flag("--compare-paper", exp.compare, "attach published reference values");
    experiment->add_option("--out", exp.out, "output prefix (<out>.csv, <out>.json)")->capture_default_str();

    ValidateFlags val;
    auto* validate = app.add_subcommand("validate", "run the statistical self-check suite");
    validate->add_option("--seed", val.seed, "master seed")->required();
    validate->add_option("--N", val.N, "replications for distributional checks")->capture_default_str();
    validate->add_option("--N-large", val.N_large, "replications for count checks")->capture_default_str();
    validate->add_option("--threads", val.threads, "worker threads")->envname("MAXFIELD_THREADS")->capture_default_str();
    validate->add_option("--out", val.out, "also write the JSON result here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*experiment) return cmd_experiment(exp);
        if (*validate) return cmd_validate(val);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const RegularityViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kOk;
}
