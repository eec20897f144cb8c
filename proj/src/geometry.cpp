#include "maxfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxfield/errors.hpp"

namespace maxfield {

RectDomain::RectDomain(int dim, double half_width, double grid_step)
    : dim_(dim), half_width_(half_width), grid_step_(grid_step) {
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
    if (!(half_width >= 0.0) || !std::isfinite(half_width)) throw ConfigError("R must be nonnegative and finite");
    if (!(grid_step > 0.0) || !std::isfinite(grid_step)) throw ConfigError("grid_step must be positive");

    const double cells = 2.0 * half_width / grid_step;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) throw ConfigError("grid_step must divide 2R");
    per_axis_ = static_cast<Eigen::Index>(rounded) + 1;

    Eigen::ArrayXd axis(per_axis_);
    for (Eigen::Index i = 0; i < per_axis_; ++i) axis[i] = -half_width + static_cast<double>(i) * grid_step;
    axis[per_axis_ - 1] = half_width;

    if (dim == 1) {
        grid_ = axis;
    } else {
        grid_.resize(per_axis_ * per_axis_, 2);
        for (Eigen::Index i = 0; i < per_axis_; ++i)
            for (Eigen::Index j = 0; j < per_axis_; ++j) {
                grid_(i * per_axis_ + j, 0) = axis[i];
                grid_(i * per_axis_ + j, 1) = axis[j];
            }
    }
}

Eigen::Index RectDomain::nearest_index(const Point& p) const {
    Eigen::Index idx = 0;
    for (int j = 0; j < dim_; ++j) {
        const double s = std::round((std::clamp(p[j], -half_width_, half_width_) + half_width_) / grid_step_);
        const auto k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(s), 0, per_axis_ - 1);
        idx = idx * per_axis_ + k;
    }
    return idx;
}

double dist_to_K(const RectDomain& domain, const Point& x) {
    const double R = domain.half_width();
    return (x.array().abs() - R).max(0.0).matrix().norm();
}

double dilated_volume(const RectDomain& domain, double a, DilationKind kind) {
    const double R = domain.half_width();
    if (domain.dim() == 1) return 2.0 * (R + a);
    if (kind == DilationKind::Cube) return 4.0 * (R + a) * (R + a);
    // Steiner formula for a rectangle.
    return 4.0 * R * R + 8.0 * R * a + std::numbers::pi * a * a;
}

Point sample_uniform_dilation(const RectDomain& domain, double a, DilationKind kind, RngStream& stream) {
    const double R = domain.half_width();
    const int dim = domain.dim();
    Point x(dim);
    if (dim == 1 || kind == DilationKind::Cube) {
        for (int j = 0; j < dim; ++j) x[j] = (R + a) * (2.0 * stream.uniform() - 1.0);
        return x;
    }

    // Rounded square: center, four edge slabs, four quarter discs.
    const double center = 4.0 * R * R;
    const double edges = 8.0 * R * a;
    const double total = dilated_volume(domain, a, kind);
    const double u = stream.uniform() * total;
    if (u < center) {
        x[0] = R * (2.0 * stream.uniform() - 1.0);
        x[1] = R * (2.0 * stream.uniform() - 1.0);
    } else if (u < center + edges) {
        const auto side = static_cast<int>(std::floor((u - center) / (2.0 * R * a)));
        const double along = R * (2.0 * stream.uniform() - 1.0);
        const double out = R + a * stream.uniform();
        switch (std::min(side, 3)) {
        case 0: x << out, along; break;
        case 1: x << -out, along; break;
        case 2: x << along, out; break;
        default: x << along, -out; break;
        }
    } else {
        const double radius = a * std::sqrt(stream.uniform());
        const double angle = 2.0 * std::numbers::pi * stream.uniform();
        const double dx = radius * std::cos(angle);
        const double dy = radius * std::sin(angle);
        x << std::copysign(R + std::abs(dx), dx), std::copysign(R + std::abs(dy), dy);
    }
    return x;
}

} // namespace maxfield
