#pragma once

#include <Eigen/Core>

#include "maxfield/rng.hpp"

namespace maxfield {

/// A point in R^1 or R^2; stack-allocated.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

/// Grid coordinates, one row per grid point, one column per dimension.
using GridCoords = Eigen::ArrayXXd;

enum class DilationKind { Ball, Cube };

/**
 * Compact rectangle K = [-R, R]^dim together with its evaluation lattice
 * {-R, -R + h, ..., R}^dim. Rows of grid() are in lexicographic order of
 * (y1, y2). R = 0 is allowed and yields the singleton {0}^dim.
 */
class RectDomain {
public:
    RectDomain(int dim, double half_width, double grid_step);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return half_width_; }
    double grid_step() const noexcept { return grid_step_; }
    Eigen::Index points_per_axis() const noexcept { return per_axis_; }
    Eigen::Index size() const noexcept { return grid_.rows(); }
    const GridCoords& grid() const noexcept { return grid_; }
    Point grid_point(Eigen::Index i) const { return grid_.row(i).transpose(); }

    /// Index of the grid point closest to p.
    Eigen::Index nearest_index(const Point& p) const;

private:
    int dim_;
    double half_width_;
    double grid_step_;
    Eigen::Index per_axis_;
    GridCoords grid_;
};

/// Euclidean distance from x to the continuum rectangle [-R, R]^dim.
double dist_to_K(const RectDomain& domain, const Point& x);

/// Volume of K (+) b(0, a) for Ball or K (+) [-a, a]^dim for Cube.
double dilated_volume(const RectDomain& domain, double a, DilationKind kind);

/// Uniform draw on K (+) b(0, a) or K (+) [-a, a]^dim.
Point sample_uniform_dilation(const RectDomain& domain, double a, DilationKind kind, RngStream& stream);

} // namespace maxfield
