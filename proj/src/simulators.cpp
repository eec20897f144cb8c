#include "maxfield/simulators.hpp"

#include <cmath>
#include <ostream>

#include "maxfield/errors.hpp"

namespace maxfield {

std::string to_string(Method m) {
    switch (m) {
    case Method::Normalized: return "normalized";
    case Method::Schlather: return "schlather";
    case Method::Transformed: return "transformed";
    }
    return "unknown";
}

std::string to_string(StoppingVariant v) {
    switch (v) {
    case StoppingVariant::Exact: return "exact";
    case StoppingVariant::Strong: return "strong";
    case StoppingVariant::Weak: return "weak";
    }
    return "unknown";
}

StoppingVariant parse_variant(const std::string& name) {
    if (name == "exact") return StoppingVariant::Exact;
    if (name == "strong") return StoppingVariant::Strong;
    if (name == "weak") return StoppingVariant::Weak;
    throw ConfigError("variant must be exact, strong or weak");
}

Method parse_method(const std::string& name) {
    if (name == "normalized") return Method::Normalized;
    if (name == "schlather") return Method::Schlather;
    if (name == "transformed") return Method::Transformed;
    throw ConfigError("method must be normalized, schlather or transformed");
}

namespace {

/// Grid-side scratch space for the max-scan of one spectral function.
class Overlay {
public:
    Overlay(const RectDomain& domain, const RadialShape& shape)
        : grid_(domain.grid()), shape_(shape), dist2_(domain.size()), values_(domain.size()) {}

    void squared_distances(const Point& x) {
        dist2_ = (grid_.col(0) - x[0]).square();
        for (Eigen::Index j = 1; j < grid_.cols(); ++j) dist2_ += (grid_.col(j) - x[j]).square();
    }

    /// field <- max(field, scale * f0(||y - x||)).
    void apply(Eigen::ArrayXd& field, const Point& x, double scale) {
        squared_distances(x);
        values_ = shape_.eval_squared(dist2_) * scale;
        field = field.max(values_);
    }

    /// field <- max(field, level * min(1, f0(||y - x||) / peak)); values never exceed level.
    void apply_normalized(Eigen::ArrayXd& field, const Point& x, double level, double peak) {
        squared_distances(x);
        values_ = (shape_.eval_squared(dist2_) * (1.0 / peak)).min(1.0) * level;
        field = field.max(values_);
    }

    /// As apply(), with the shape zeroed where y - x leaves the cube [-a, a]^d.
    void apply_cube_window(Eigen::ArrayXd& field, const Point& x, double scale, double a) {
        squared_distances(x);
        values_ = shape_.eval_squared(dist2_) * scale;
        for (Eigen::Index j = 0; j < grid_.cols(); ++j) values_ = ((grid_.col(j) - x[j]).abs() <= a).select(values_, 0.0);
        field = field.max(values_);
    }

private:
    const GridCoords& grid_;
    const RadialShape& shape_;
    Eigen::ArrayXd dist2_;
    Eigen::ArrayXd values_;
};

void finish(Realization& r) {
    r.inf_field = r.field.minCoeff();
    r.sup_field = r.field.maxCoeff();
    r.first_arrival = 1.0 / r.partial_sums.front();
}

[[noreturn]] void exhausted(std::int64_t cap) {
    throw BudgetExhausted("spectral function budget of " + std::to_string(cap) + " exhausted before stopping");
}

} // namespace

Realization simulate_normalized(const SpectralModel& model, RngStream& stream, StoppingVariant variant,
                                const SimulationOptions& opts) {
    const double c = model.c();
    if (!std::isfinite(c)) throw NonFiniteConstant("normalizing constant is not finite");

    Realization r;
    r.method = Method::Normalized;
    r.variant = variant;
    r.field = Eigen::ArrayXd::Zero(model.domain().size());
    Overlay overlay(model.domain(), model.shape());

    ArrivalSequence arrivals;
    arrivals.push(sample_exponential(stream));
    // Every normalized function peaks at exactly c t_i over the continuum rectangle.
    double continuum_sup = 0.0;
    for (;;) {
        const double S = arrivals.last_sum();
        const Point x = sample_shift_gstar(model, stream);
        overlay.apply_normalized(r.field, x, c / S, sup_shifted(model, x));
        continuum_sup = std::max(continuum_sup, c / S);
        ++r.n_spectral;
        if (opts.observer) opts.observer(r.n_spectral, r.field);

        arrivals.push(sample_exponential(stream));
        const double threshold = c / arrivals.last_sum();
        const double level = variant == StoppingVariant::Weak ? continuum_sup : r.field.minCoeff();
        if (threshold <= level) break;
        if (r.n_spectral >= opts.max_functions) exhausted(opts.max_functions);
    }
    r.partial_sums = arrivals.partial_sums();
    finish(r);
    return r;
}

SchlatherWindow schlather_window(const SpectralModel& model, int cutoff_k) {
    if (cutoff_k < 1) throw ConfigError("cutoff_k must be a positive integer");
    const RadialShape& shape = model.shape();
    SchlatherWindow w{};
    if (const auto* g = std::get_if<GaussianShape>(&shape.kind())) {
        w.kind = DilationKind::Cube;
        w.halfwidth = cutoff_k * g->sigma;
    } else {
        w.kind = DilationKind::Ball;
        w.halfwidth = cutoff_k * std::get<IndicatorShape>(shape.kind()).radius;
    }
    w.volume = dilated_volume(model.domain(), w.halfwidth, w.kind);
    return w;
}

Realization simulate_schlather(const SpectralModel& model, int cutoff_k, RngStream& stream,
                               const SimulationOptions& opts) {
    const SchlatherWindow window = schlather_window(model, cutoff_k);
    const double peak = model.peak();
    // The field is kept pre-multiplied by |K (+) J|; the stopping rule is scaled alike.
    const double bound = window.volume * peak;
    const bool needs_mask = window.kind == DilationKind::Cube;

    Realization r;
    r.method = Method::Schlather;
    r.field = Eigen::ArrayXd::Zero(model.domain().size());
    Overlay overlay(model.domain(), model.shape());

    ArrivalSequence arrivals;
    arrivals.push(sample_exponential(stream));
    for (;;) {
        const double S = arrivals.last_sum();
        const Point u = sample_uniform_dilation(model.domain(), window.halfwidth, window.kind, stream);
        if (needs_mask)
            overlay.apply_cube_window(r.field, u, window.volume / S, window.halfwidth);
        else
            overlay.apply(r.field, u, window.volume / S);
        ++r.n_spectral;
        if (opts.observer) opts.observer(r.n_spectral, r.field);

        arrivals.push(sample_exponential(stream));
        if (bound / arrivals.last_sum() <= r.field.minCoeff()) break;
        if (r.n_spectral >= opts.max_functions) exhausted(opts.max_functions);
    }
    r.partial_sums = arrivals.partial_sums();
    finish(r);
    return r;
}

Realization simulate_transformed(const SpectralModel& model, const ShiftDensitySpec& weight, RngStream& stream,
                                 const SimulationOptions& opts) {
    if (std::holds_alternative<GStarWeight>(weight)) {
        Realization r = simulate_normalized(model, stream, StoppingVariant::Strong, opts);
        r.method = Method::Transformed;
        return r;
    }
    const double bound = esssup_bound(model, weight);

    Realization r;
    r.method = Method::Transformed;
    r.variant = StoppingVariant::Strong;
    r.field = Eigen::ArrayXd::Zero(model.domain().size());
    Overlay overlay(model.domain(), model.shape());

    ArrivalSequence arrivals;
    arrivals.push(sample_exponential(stream));
    for (;;) {
        const double S = arrivals.last_sum();
        const Point x = sample_weight(model, weight, stream);
        overlay.apply(r.field, x, 1.0 / S / weight_density(model, weight, x));
        ++r.n_spectral;
        if (opts.observer) opts.observer(r.n_spectral, r.field);

        arrivals.push(sample_exponential(stream));
        if (bound / arrivals.last_sum() <= r.field.minCoeff()) break;
        if (r.n_spectral >= opts.max_functions) exhausted(opts.max_functions);
    }
    r.partial_sums = arrivals.partial_sums();
    finish(r);
    return r;
}

std::int64_t recompute_count(const Realization& r, double c) {
    for (std::size_t k = 1; k < r.partial_sums.size(); ++k)
        if (c / r.partial_sums[k] < r.inf_field) return static_cast<std::int64_t>(k);
    return -1;
}

void write_trace_csv(std::ostream& os, std::span<const Realization> reps) {
    os << "replication,m,inf,sup,t1\n";
    const auto old = os.precision(17);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& r = reps[i];
        os << i << ',' << r.n_spectral << ',' << r.inf_field << ',' << r.sup_field << ',' << r.first_arrival << '\n';
    }
    os.precision(old);
}

} // namespace maxfield
