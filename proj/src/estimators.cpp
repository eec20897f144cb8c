#include "maxfield/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "maxfield/errors.hpp"
#include "maxfield/quadrature.hpp"

namespace maxfield {

namespace {

std::vector<double> collect(std::span<const Realization> reps, auto&& fn) {
    std::vector<double> out;
    out.reserve(reps.size());
    for (const auto& r : reps) out.push_back(fn(r));
    return out;
}

void require_nonempty(std::span<const Realization> reps, const char* what) {
    if (reps.empty()) throw EmptyInput(std::string(what) + ": no realizations");
}

} // namespace

stats::MeanSE estimate_counts(std::span<const Realization> reps) {
    if (reps.size() < 2) throw EmptyInput("estimate_counts: need at least two realizations");
    const auto counts = collect(reps, [](const Realization& r) { return static_cast<double>(r.n_spectral); });
    return stats::mean_se(counts);
}

stats::MeanSE formula_estimate_Q(std::span<const Realization> reps, double c) {
    require_nonempty(reps, "formula_estimate_Q");
    return stats::mean_se(collect(reps, [c](const Realization& r) { return c / r.inf_field; }));
}

stats::MeanSE formula_estimate_M(std::span<const Realization> reps, double volume, double peak) {
    require_nonempty(reps, "formula_estimate_M");
    const double scale = volume * peak;
    return stats::mean_se(collect(reps, [scale](const Realization& r) { return scale / r.inf_field; }));
}

double A_factor(double R, double sigma, double k, int dim) {
    constexpr double pi = std::numbers::pi;
    if (dim == 1) return (R + std::sqrt(pi / 2.0) * sigma) / (R + k * sigma);
    if (dim == 2) {
        const double denom = (R + k * sigma) * (R + k * sigma);
        return (R * R + std::sqrt(2.0 * pi) * sigma * R + 0.5 * pi * sigma * sigma) / denom;
    }
    throw ConfigError("dim must be 1 or 2");
}

stats::MeanSE mean_inverse_inf(std::span<const Realization> reps) {
    require_nonempty(reps, "mean_inverse_inf");
    return stats::mean_se(collect(reps, [](const Realization& r) { return 1.0 / r.inf_field; }));
}

RatioEstimate P_factor(std::span<const Realization> normalized, std::span<const Realization> schlather) {
    require_nonempty(normalized, "P_factor");
    require_nonempty(schlather, "P_factor");
    const auto num = mean_inverse_inf(normalized);
    const auto den = mean_inverse_inf(schlather);
    RatioEstimate r;
    r.value = num.mean / den.mean;
    r.se = r.value * std::sqrt(std::pow(num.se / num.mean, 2) + std::pow(den.se / den.mean, 2));
    return r;
}

stats::KsResult ks_margin_test(std::span<const Realization> reps, Eigen::Index grid_index, double scale) {
    if (reps.size() < 100) throw EmptyInput("ks_margin_test: need at least 100 realizations");
    auto values = collect(reps, [grid_index](const Realization& r) { return r.field[grid_index]; });
    return stats::ks_one_sample(std::move(values), [scale](double z) { return z > 0.0 ? std::exp(-scale / z) : 0.0; });
}

double exponent_oracle(const SpectralModel& model, std::span<const Point> points, std::span<const double> thresholds,
                       double rel_tol) {
    if (points.empty() || points.size() > 4) throw ConfigError("exponent_oracle takes 1 to 4 points");
    if (points.size() != thresholds.size()) throw ConfigError("exponent_oracle: one threshold per point");
    for (double z : thresholds)
        if (!(z > 0.0)) throw ConfigError("exponent_oracle: thresholds must be positive");

    const RadialShape& shape = model.shape();
    const int dim = model.dim();
    const double support = shape.support_radius();
    const double reach = std::isfinite(support) ? support : 10.0 * std::get<GaussianShape>(shape.kind()).sigma;

    auto integrand = [&](const Point& x) {
        double v = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) v = std::max(v, shape((points[i] - x).norm()) / thresholds[i]);
        return v;
    };

    auto breaks_along = [&](int axis, double lo, double hi, const Point* partial) {
        std::vector<double> b{lo, hi};
        for (const auto& p : points) {
            b.push_back(p[axis]);
            if (!std::isfinite(support)) continue;
            double half = support;
            if (partial) {
                const double off = std::abs((*partial)[0] - p[0]);
                if (off > support) continue;
                half = std::sqrt(support * support - off * off);
            }
            b.push_back(p[axis] - half);
            b.push_back(p[axis] + half);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::remove_if(b.begin(), b.end(), [&](double v) { return v < lo || v > hi; }), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    };

    std::array<double, 2> lo{}, hi{};
    for (int j = 0; j < dim; ++j) {
        lo[j] = std::numeric_limits<double>::infinity();
        hi[j] = -std::numeric_limits<double>::infinity();
        for (const auto& p : points) {
            lo[j] = std::min(lo[j], p[j] - reach);
            hi[j] = std::max(hi[j], p[j] + reach);
        }
    }

    quad::Options outer;
    outer.rel_tol = rel_tol;
    outer.max_intervals = 20000;
    quad::Result res;
    bool inner_failed = false;
    if (dim == 1) {
        const auto b = breaks_along(0, lo[0], hi[0], nullptr);
        res = quad::integrate(
            [&](double t) {
                Point x(1);
                x << t;
                return integrand(x);
            },
            b, outer);
    } else {
        quad::Options inner;
        inner.rel_tol = rel_tol * 1e-2;
        inner.abs_tol = 1e-300;
        inner.max_intervals = 20000;
        res = quad::integrate(
            [&](double x1) {
                Point x(2);
                x << x1, 0.0;
                const auto b = breaks_along(1, lo[1], hi[1], &x);
                const auto r = quad::integrate(
                    [&](double x2) {
                        x[1] = x2;
                        return integrand(x);
                    },
                    b, inner);
                if (!r.converged) inner_failed = true;
                return r.value;
            },
            breaks_along(0, lo[0], hi[0], nullptr), outer);
    }
    if (!res.converged || inner_failed) throw QuadratureFailure("exponent_oracle: quadrature did not reach tolerance");
    return res.value;
}

stats::MeanSE joint_non_exceedance(std::span<const Realization> reps, std::span<const Eigen::Index> grid_indices,
                                   std::span<const double> thresholds) {
    require_nonempty(reps, "joint_non_exceedance");
    if (grid_indices.size() != thresholds.size()) throw ConfigError("joint_non_exceedance: one threshold per point");
    std::size_t hits = 0;
    for (const auto& r : reps) {
        bool below = true;
        for (std::size_t i = 0; i < grid_indices.size(); ++i) below = below && r.field[grid_indices[i]] <= thresholds[i];
        hits += below ? 1 : 0;
    }
    stats::MeanSE out;
    out.n = reps.size();
    out.mean = static_cast<double>(hits) / static_cast<double>(reps.size());
    out.sd = std::sqrt(out.mean * (1.0 - out.mean));
    out.se = out.sd / std::sqrt(static_cast<double>(reps.size()));
    return out;
}

FactorizationCheck factorization_check(std::span<const Realization> normalized, std::span<const Realization> schlather,
                                       double A) {
    if (normalized.size() < 2 || schlather.size() < 2) throw EmptyInput("factorization_check: need N >= 2 per method");

    auto columns = [](std::span<const Realization> reps) {
        Eigen::MatrixXd x(static_cast<Eigen::Index>(reps.size()), 2);
        for (std::size_t i = 0; i < reps.size(); ++i) {
            x(static_cast<Eigen::Index>(i), 0) = static_cast<double>(reps[i].n_spectral);
            x(static_cast<Eigen::Index>(i), 1) = 1.0 / reps[i].inf_field;
        }
        return x;
    };
    auto cov_of_mean = [](const Eigen::MatrixXd& x) {
        const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
        const double n = static_cast<double>(x.rows());
        return Eigen::MatrixXd((centered.transpose() * centered) / (n - 1.0) / n);
    };

    const Eigen::MatrixXd xn = columns(normalized);
    const Eigen::MatrixXd xs = columns(schlather);
    Eigen::Vector4d means;
    means << xn.col(0).mean(), xn.col(1).mean(), xs.col(0).mean(), xs.col(1).mean();

    Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
    if (xn.rows() == xs.rows()) {
        Eigen::MatrixXd joint(xn.rows(), 4);
        joint << xn, xs;
        cov = cov_of_mean(joint);
    } else {
        cov.topLeftCorner<2, 2>() = cov_of_mean(xn);
        cov.bottomRightCorner<2, 2>() = cov_of_mean(xs);
    }

    const double a = means[0], b = means[1], u = means[2], v = means[3];
    Eigen::Vector4d grad;
    grad << 1.0 / u, -A / v, -a / (u * u), A * b / (v * v);

    FactorizationCheck out;
    out.ratio = a / u;
    out.a_times_p = A * b / v;
    out.difference = out.ratio - out.a_times_p;
    out.se = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
    return out;
}

stats::MeanSE paired_count_difference(std::span<const Realization> normalized, std::span<const Realization> schlather) {
    if (normalized.size() != schlather.size()) throw ConfigError("paired_count_difference: sample sizes differ");
    require_nonempty(normalized, "paired_count_difference");
    std::vector<double> diff(normalized.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff[i] = static_cast<double>(schlather[i].n_spectral - normalized[i].n_spectral);
    return stats::mean_se(diff);
}

} // namespace maxfield
