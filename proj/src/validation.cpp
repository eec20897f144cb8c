#include "maxfield/validation.hpp"

#include <cmath>

#include "maxfield/estimators.hpp"
#include "maxfield/parallel.hpp"

namespace maxfield {

namespace {

std::vector<Realization> replicate(const ValidationConfig& cfg, std::int64_t n, auto&& sim) {
    return run_replications(n, cfg.threads, [&](std::int64_t i) {
        auto stream = derive_stream(cfg.seed, static_cast<std::uint64_t>(i));
        return sim(stream);
    });
}

SpectralModel smith_1d() { return SpectralModel(RadialShape::gaussian(1.0, 1), RectDomain(1, 1.0, 0.1)); }

SpectralModel raw_indicator_1d() {
    return SpectralModel(RadialShape::indicator(1.0, 1, IndicatorScaling::Raw), RectDomain(1, 1.0, 0.1));
}

CheckResult check_margins(const ValidationConfig& cfg, const SpectralModel& model, std::span<const Realization> reps) {
    CheckResult r{"frechet_margins", true, nlohmann::json::array()};
    for (const double y : {-1.0, 0.0, 0.5}) {
        Point p(1);
        p << y;
        const auto idx = model.domain().nearest_index(p);
        const auto ks = ks_margin_test(reps, idx, 1.0);
        const bool ok = ks.p_value > cfg.ks_alpha;
        r.passed = r.passed && ok;
        r.details.push_back({{"y", y}, {"ks_statistic", ks.statistic}, {"p_value", ks.p_value}, {"passed", ok}});
    }
    return r;
}

CheckResult check_sup_distribution(const SpectralModel& model, std::span<const Realization> reps) {
    std::size_t below = 0;
    for (const auto& rep : reps) below += rep.sup_field <= 1.0 ? 1 : 0;
    const double n = static_cast<double>(reps.size());
    const double p_hat = static_cast<double>(below) / n;
    const double p = std::exp(-model.c());
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const bool ok = std::abs(p_hat - p) <= 3.0 * sigma;
    return {"sup_distribution",
            ok,
            {{"c", model.c()},
             {"neg_log_p_hat", -std::log(p_hat)},
             {"p_hat", p_hat},
             {"p_expected", p},
             {"binomial_sigma", sigma},
             {"passed", ok}}};
}

CheckResult check_oracle(const SpectralModel& model, std::span<const Realization> reps) {
    struct Config {
        std::vector<double> ys;
        std::vector<double> zs;
    };
    const Config configs[] = {{{0.0, 0.5}, {1.0, 1.0}}, {{-1.0, 0.0, 1.0}, {1.0, 2.0, 1.5}}};
    CheckResult r{"exponent_oracle", true, nlohmann::json::array()};
    for (const auto& cfg : configs) {
        std::vector<Point> pts;
        std::vector<Eigen::Index> idx;
        for (double y : cfg.ys) {
            Point p(1);
            p << y;
            pts.push_back(p);
            idx.push_back(model.domain().nearest_index(p));
        }
        const double V = exponent_oracle(model, pts, cfg.zs);
        const double expected = std::exp(-V);
        const auto emp = joint_non_exceedance(reps, idx, cfg.zs);
        const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(reps.size()));
        const bool ok = std::abs(emp.mean - expected) <= 3.0 * sigma;
        r.passed = r.passed && ok;
        r.details.push_back({{"points", cfg.ys},
                             {"thresholds", cfg.zs},
                             {"exponent", V},
                             {"p_expected", expected},
                             {"p_hat", emp.mean},
                             {"binomial_sigma", sigma},
                             {"passed", ok}});
    }
    return r;
}

} // namespace

std::vector<CheckResult> run_validation(const ValidationConfig& cfg) {
    std::vector<CheckResult> out;

    const SpectralModel smith = smith_1d();
    const auto reps = replicate(cfg, cfg.N, [&](RngStream& s) { return simulate_normalized(smith, s); });
    out.push_back(check_margins(cfg, smith, reps));
    out.push_back(check_sup_distribution(smith, reps));
    out.push_back(check_oracle(smith, reps));

    {
        const auto big = replicate(cfg, cfg.N_large, [&](RngStream& s) { return simulate_normalized(smith, s); });
        std::int64_t mismatches = 0;
        for (const auto& r : big) mismatches += recompute_count(r, smith.c()) != r.n_spectral ? 1 : 0;
        out.push_back({"replication_identity",
                       mismatches == 0,
                       {{"replications", cfg.N_large}, {"mismatches", mismatches}}});
    }

    {
        const SpectralModel singleton(RadialShape::gaussian(1.0, 1), RectDomain(1, 0.0, 0.1));
        const auto s = replicate(cfg, cfg.N_large, [&](RngStream& st) { return simulate_normalized(singleton, st); });
        std::int64_t max_m = 0;
        for (const auto& r : s) max_m = std::max(max_m, r.n_spectral);
        out.push_back({"singleton_count", max_m == 1, {{"replications", cfg.N_large}, {"max_m", max_m}}});
    }

    {
        const auto w = replicate(cfg, cfg.N_large,
                                 [&](RngStream& st) { return simulate_normalized(smith, st, StoppingVariant::Weak); });
        std::int64_t max_m = 0;
        for (const auto& r : w) max_m = std::max(max_m, r.n_spectral);
        out.push_back({"weak_count", max_m == 1, {{"replications", cfg.N_large}, {"max_m", max_m}}});
    }

    const SpectralModel indicator = raw_indicator_1d();
    {
        const auto a = replicate(cfg, cfg.N_coincide, [&](RngStream& s) { return simulate_normalized(indicator, s); });
        const auto b = replicate(cfg, cfg.N_coincide, [&](RngStream& s) { return simulate_schlather(indicator, 1, s); });
        std::int64_t field_mismatch = 0, count_mismatch = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            field_mismatch += (a[i].field != b[i].field).any() ? 1 : 0;
            count_mismatch += a[i].n_spectral != b[i].n_spectral ? 1 : 0;
        }
        out.push_back({"indicator_coincidence",
                       field_mismatch == 0 && count_mismatch == 0,
                       {{"replications", cfg.N_coincide},
                        {"field_mismatches", field_mismatch},
                        {"count_mismatches", count_mismatch}}});
    }

    {
        const ShiftDensitySpec uniform = UniformWindowWeight{3.0};
        const auto norm = replicate(cfg, cfg.N_large, [&](RngStream& s) { return simulate_normalized(indicator, s); });
        const auto trans =
            replicate(cfg, cfg.N_large, [&](RngStream& s) { return simulate_transformed(indicator, uniform, s); });
        Point origin(1);
        origin << 0.0;
        const auto idx = indicator.domain().nearest_index(origin);
        std::vector<double> za, zb;
        for (const auto& r : norm) za.push_back(r.field[idx]);
        for (const auto& r : trans) zb.push_back(r.field[idx]);
        const auto ks = stats::ks_two_sample(za, zb);
        const auto gap = paired_count_difference(norm, trans);  // mean(trans) - mean(norm)
        const bool ks_ok = ks.p_value > cfg.ks_alpha;
        const bool order_ok = gap.mean > 3.0 * gap.se;
        out.push_back({"transformed_invariance",
                       ks_ok && order_ok,
                       {{"ks_p_value", ks.p_value},
                        {"bound_uniform", esssup_bound(indicator, uniform)},
                        {"c", indicator.c()},
                        {"mean_count_normalized", estimate_counts(norm).mean},
                        {"mean_count_transformed", estimate_counts(trans).mean},
                        {"count_gap", gap.mean},
                        {"count_gap_se", gap.se}}});
    }
    return out;
}

nlohmann::json validation_to_json(const ValidationConfig& config, const std::vector<CheckResult>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"details", c.details}});
        all = all && c.passed;
    }
    return {{"schema", kValidationSchema},
            {"config",
             {{"seed", config.seed},
              {"N", config.N},
              {"N_large", config.N_large},
              {"N_coincide", config.N_coincide},
              {"ks_alpha", config.ks_alpha}}},
            {"all_passed", all},
            {"checks", std::move(arr)}};
}

} // namespace maxfield
