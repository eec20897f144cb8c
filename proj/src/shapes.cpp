#include "maxfield/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "maxfield/errors.hpp"
#include "maxfield/quadrature.hpp"

namespace maxfield {

namespace {

constexpr double kPi = std::numbers::pi;

double unit_ball_volume(int dim) { return dim == 1 ? 2.0 : kPi; }

// \int_R f0(|t|) dt for the dim-dimensional profile; the edge-band mass per unit edge length.
double line_integral(const RadialShape& shape) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, GaussianShape>) {
                return shape.peak() * k.sigma * std::sqrt(2.0 * kPi);
            } else {
                return shape.peak() * 2.0 * k.radius;
            }
        },
        shape.kind());
}

} // namespace

RadialShape::RadialShape(std::variant<GaussianShape, IndicatorShape> kind, int dim) : kind_(kind), dim_(dim) {
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
    if (const auto* g = std::get_if<GaussianShape>(&kind_)) {
        if (!(g->sigma > 0.0) || !std::isfinite(g->sigma)) throw ConfigError("sigma must be positive");
        peak_ = std::pow(2.0 * kPi * g->sigma * g->sigma, -0.5 * dim);
        integral_ = 1.0;
        inv_two_sigma2_ = 1.0 / (2.0 * g->sigma * g->sigma);
    } else {
        const auto& ind = std::get<IndicatorShape>(kind_);
        if (!(ind.radius > 0.0) || !std::isfinite(ind.radius)) throw ConfigError("r must be positive");
        const double vol = unit_ball_volume(dim) * std::pow(ind.radius, dim);
        peak_ = ind.scaling == IndicatorScaling::UnitIntegral ? 1.0 / vol : 1.0;
        integral_ = peak_ * vol;
        radius2_ = ind.radius * ind.radius;
    }
}

RadialShape RadialShape::gaussian(double sigma, int dim) { return RadialShape(GaussianShape{sigma}, dim); }

RadialShape RadialShape::indicator(double radius, int dim, IndicatorScaling scaling) {
    return RadialShape(IndicatorShape{radius, scaling}, dim);
}

double RadialShape::operator()(double r) const noexcept {
    if (is_gaussian()) return peak_ * std::exp(-r * r * inv_two_sigma2_);
    return r * r <= radius2_ ? peak_ : 0.0;
}

Eigen::ArrayXd RadialShape::eval_squared(const Eigen::ArrayXd& dist2) const {
    if (is_gaussian()) return peak_ * (-dist2 * inv_two_sigma2_).exp();
    return (dist2 <= radius2_).cast<double>() * peak_;
}

double RadialShape::support_radius() const noexcept {
    if (is_gaussian()) return std::numeric_limits<double>::infinity();
    return std::get<IndicatorShape>(kind_).radius;
}

std::string RadialShape::describe() const {
    std::ostringstream os;
    if (const auto* g = std::get_if<GaussianShape>(&kind_)) {
        os << "gaussian(sigma=" << g->sigma << ", dim=" << dim_ << ")";
    } else {
        const auto& ind = std::get<IndicatorShape>(kind_);
        os << "indicator(r=" << ind.radius << ", dim=" << dim_ << ", scaling="
           << (ind.scaling == IndicatorScaling::Raw ? "raw" : "unit") << ")";
    }
    return os.str();
}

SpectralModel::SpectralModel(RadialShape shape, RectDomain domain)
    : shape_(std::move(shape)), domain_(std::move(domain)) {
    if (shape_.dim() != domain_.dim()) throw ConfigError("shape and domain dimensions differ");
    const double R = domain_.half_width();
    const double C = shape_.peak();
    const double line = line_integral(shape_);
    if (dim() == 1) {
        region_masses_ = {2.0 * R * C, shape_.total_integral()};
    } else {
        region_masses_ = {4.0 * R * R * C, 4.0 * R * line, shape_.total_integral()};
    }
    if (const auto* ind = std::get_if<IndicatorShape>(&shape_.kind())) {
        // Same arithmetic as the Schlather window volume, so both samplers agree bit for bit.
        c_ = C * dilated_volume(domain_, ind->radius, DilationKind::Ball);
    } else {
        c_ = std::accumulate(region_masses_.begin(), region_masses_.end(), 0.0);
    }
    if (!std::isfinite(c_) || !(c_ > 0.0)) throw NonFiniteConstant("normalizing constant is not finite");
}

std::vector<double> SpectralModel::region_probabilities() const {
    std::vector<double> p(region_masses_);
    for (auto& v : p) v /= c_;
    return p;
}

double sup_shifted(const SpectralModel& model, const Point& x) { return model.shape()(dist_to_K(model.domain(), x)); }

double normalizing_constant(const SpectralModel& model) { return model.c(); }

double normalizing_constant_quadrature(const RadialProfile& profile, const RectDomain& domain, double rel_tol) {
    const double R = domain.half_width();
    const double s = profile.support_radius;
    const double inf = std::numeric_limits<double>::infinity();

    auto axis_breaks = [&](double reach) {
        std::vector<double> b{-inf, -R, R, inf};
        if (std::isfinite(reach) && reach > 0.0) {
            b.insert(b.begin() + 1, -R - reach);
            b.insert(b.end() - 1, R + reach);
        }
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    };

    quad::Options opts;
    opts.rel_tol = rel_tol;
    quad::Result res;
    if (domain.dim() == 1) {
        const auto breaks = axis_breaks(s);
        res = quad::integrate([&](double x) { return profile.f0(std::max(std::abs(x) - R, 0.0)); }, breaks, opts);
    } else {
        quad::Options inner_opts;
        inner_opts.rel_tol = rel_tol * 1e-2;
        inner_opts.abs_tol = 1e-300;
        bool inner_failed = false;
        auto inner = [&](double x1) {
            const double g1 = std::max(std::abs(x1) - R, 0.0);
            const double reach = std::isfinite(s) ? (g1 <= s ? std::sqrt(s * s - g1 * g1) : 0.0) : inf;
            if (std::isfinite(s) && g1 > s) return 0.0;
            const auto breaks = axis_breaks(reach);
            const auto r = quad::integrate(
                [&](double x2) {
                    const double g2 = std::max(std::abs(x2) - R, 0.0);
                    return profile.f0(std::hypot(g1, g2));
                },
                breaks, inner_opts);
            if (!r.converged) inner_failed = true;
            return r.value;
        };
        res = quad::integrate(inner, axis_breaks(s), opts);
        if (inner_failed) res.converged = false;
    }
    if (!res.converged || !std::isfinite(res.value))
        throw NonFiniteConstant("normalizing constant quadrature did not converge (c appears infinite)");
    return res.value;
}

double normalizing_constant_quadrature(const RadialShape& shape, const RectDomain& domain, double rel_tol) {
    return normalizing_constant_quadrature(RadialProfile{[&shape](double r) { return shape(r); }, shape.support_radius()},
                                           domain, rel_tol);
}

int shift_region(const RectDomain& domain, const Point& x) {
    const double R = domain.half_width();
    int outside = 0;
    for (int j = 0; j < domain.dim(); ++j) outside += std::abs(x[j]) > R ? 1 : 0;
    return outside;
}

Point sample_shift_gstar(const SpectralModel& model, RngStream& stream) {
    const RectDomain& domain = model.domain();
    const RadialShape& shape = model.shape();
    if (const auto* ind = std::get_if<IndicatorShape>(&shape.kind())) {
        // f~0 is constant on K (+) b(0, r).
        return sample_uniform_dilation(domain, ind->radius, DilationKind::Ball, stream);
    }

    const double sigma = std::get<GaussianShape>(shape.kind()).sigma;
    const double R = domain.half_width();
    const auto& mass = model.region_masses();
    const double u = stream.uniform() * model.c();
    Point x(domain.dim());

    if (domain.dim() == 1) {
        if (u < mass[0]) {
            x[0] = R * (2.0 * stream.uniform() - 1.0);
        } else {
            const double sign = (u - mass[0]) < 0.5 * mass[1] ? -1.0 : 1.0;
            x[0] = sign * (R + sample_half_normal(stream, sigma));
        }
        return x;
    }

    if (u < mass[0]) {
        x[0] = R * (2.0 * stream.uniform() - 1.0);
        x[1] = R * (2.0 * stream.uniform() - 1.0);
    } else if (u < mass[0] + mass[1]) {
        const auto side = std::min(static_cast<int>(std::floor(4.0 * (u - mass[0]) / mass[1])), 3);
        const double along = R * (2.0 * stream.uniform() - 1.0);
        const double out = R + sample_half_normal(stream, sigma);
        switch (side) {
        case 0: x << out, along; break;
        case 1: x << -out, along; break;
        case 2: x << along, out; break;
        default: x << along, -out; break;
        }
    } else {
        // Separable Gaussian: both corner offsets are independent half-normals.
        const auto corner = std::min(static_cast<int>(std::floor(4.0 * (u - mass[0] - mass[1]) / mass[2])), 3);
        const double s1 = (corner & 1) ? -1.0 : 1.0;
        const double s2 = (corner & 2) ? -1.0 : 1.0;
        x[0] = s1 * (R + sample_half_normal(stream, sigma));
        x[1] = s2 * (R + sample_half_normal(stream, sigma));
    }
    return x;
}

// ---------------------------------------------------------------------------

TabulatedWeight make_tabulated_weight(std::vector<double> edges, std::vector<double> heights) {
    if (edges.size() < 2 || heights.size() + 1 != edges.size())
        throw ConfigError("tabulated weight needs n+1 edges for n heights");
    double mass = 0.0;
    for (std::size_t j = 0; j < heights.size(); ++j) {
        if (!(edges[j + 1] > edges[j])) throw ConfigError("tabulated weight edges must increase");
        if (!(heights[j] >= 0.0) || !std::isfinite(heights[j])) throw ConfigError("tabulated weight heights must be >= 0");
        mass += heights[j] * (edges[j + 1] - edges[j]);
    }
    if (!(mass > 0.0)) throw ConfigError("tabulated weight has zero mass");
    for (auto& h : heights) h /= mass;
    return {std::move(edges), std::move(heights)};
}

namespace {

TabulatedWeight as_table(const ShiftDensitySpec& weight) {
    if (const auto* u = std::get_if<UniformWindowWeight>(&weight)) {
        if (!(u->halfwidth > 0.0)) throw ConfigError("uniform window halfwidth must be positive");
        return make_tabulated_weight({-u->halfwidth, u->halfwidth}, {1.0});
    }
    return std::get<TabulatedWeight>(weight);
}

double table_axis_density(const TabulatedWeight& t, double x) {
    if (x < t.edges.front() || x > t.edges.back()) return 0.0;
    auto it = std::upper_bound(t.edges.begin(), t.edges.end(), x);
    auto j = static_cast<std::size_t>(std::distance(t.edges.begin(), it));
    j = std::clamp<std::size_t>(j, 1, t.density.size()) - 1;
    return t.density[j];
}

double table_axis_sample(const TabulatedWeight& t, double u) {
    double acc = 0.0;
    for (std::size_t j = 0; j < t.density.size(); ++j) {
        const double width = t.edges[j + 1] - t.edges[j];
        const double m = t.density[j] * width;
        if (m > 0.0 && (u < acc + m || j + 1 == t.density.size())) {
            return t.edges[j] + std::min((u - acc) / t.density[j], width);
        }
        acc += m;
    }
    return t.edges.back();
}

// Distance between intervals [lo, hi] and [-R, R].
double interval_gap(double lo, double hi, double R) { return std::max({0.0, lo - R, -R - hi}); }

} // namespace

double weight_density(const SpectralModel& model, const ShiftDensitySpec& weight, const Point& x) {
    if (std::holds_alternative<GStarWeight>(weight)) return sup_shifted(model, x) / model.c();
    const auto table = as_table(weight);
    double w = 1.0;
    for (int j = 0; j < model.dim(); ++j) w *= table_axis_density(table, x[j]);
    return w;
}

double weight_total_mass(const SpectralModel& model, const ShiftDensitySpec& weight) {
    if (std::holds_alternative<GStarWeight>(weight)) {
        return normalizing_constant_quadrature(model.shape(), model.domain()) / model.c();
    }
    const auto table = as_table(weight);
    double axis = 0.0;
    for (std::size_t j = 0; j < table.density.size(); ++j) axis += table.density[j] * (table.edges[j + 1] - table.edges[j]);
    return std::pow(axis, model.dim());
}

Point sample_weight(const SpectralModel& model, const ShiftDensitySpec& weight, RngStream& stream) {
    if (std::holds_alternative<GStarWeight>(weight)) return sample_shift_gstar(model, stream);
    const auto table = as_table(weight);
    Point x(model.dim());
    for (int j = 0; j < model.dim(); ++j) x[j] = table_axis_sample(table, stream.uniform());
    return x;
}

double esssup_bound(const SpectralModel& model, const ShiftDensitySpec& weight) {
    if (std::holds_alternative<GStarWeight>(weight)) return model.c();

    const auto table = as_table(weight);
    const RadialShape& shape = model.shape();
    const double R = model.domain().half_width();
    const int dim = model.dim();

    // Outside the table's box the weight is zero; f~0 must vanish there.
    const double outside_gap = std::min(std::max(0.0, table.edges.back() - R), std::max(0.0, -R - table.edges.front()));
    if (shape.ess_value(outside_gap) > 0.0)
        throw RegularityViolation("shift density vanishes where the shape is positive (outside its support box)");

    const std::size_t n = table.density.size();
    double bound = 0.0;
    auto visit_cell = [&](double gap2, double w) {
        const double f = shape.ess_value(std::sqrt(gap2));
        if (f <= 0.0) return;
        if (w <= 0.0) throw RegularityViolation("shift density vanishes on a cell where the shape is positive");
        bound = std::max(bound, f / w);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double g1 = interval_gap(table.edges[i], table.edges[i + 1], R);
        if (dim == 1) {
            visit_cell(g1 * g1, table.density[i]);
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double g2 = interval_gap(table.edges[j], table.edges[j + 1], R);
            visit_cell(g1 * g1 + g2 * g2, table.density[i] * table.density[j]);
        }
    }
    return bound;
}

std::string describe(const ShiftDensitySpec& weight) {
    std::ostringstream os;
    if (std::holds_alternative<GStarWeight>(weight)) {
        os << "gstar";
    } else if (const auto* u = std::get_if<UniformWindowWeight>(&weight)) {
        os << "uniform(" << u->halfwidth << ")";
    } else {
        os << "tabulated(" << std::get<TabulatedWeight>(weight).density.size() << " bins)";
    }
    return os.str();
}

} // namespace maxfield
