#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "maxfield/geometry.hpp"
#include "maxfield/rng.hpp"

namespace maxfield {

enum class IndicatorScaling { UnitIntegral, Raw };

/// Isotropic Gaussian density N(0, sigma^2 Id) in `dim` dimensions.
struct GaussianShape {
    double sigma;
};

/// Indicator of the closed ball b(0, radius), optionally scaled to unit integral.
struct IndicatorShape {
    double radius;
    IndicatorScaling scaling;
};

/**
 * Monotone radial shape f0 : [0, inf) -> [0, inf), evaluated as f0(||x||) on
 * R^dim. Peak C = f0(0); total integral I = \int_{R^dim} f0(||x||) dx.
 */
class RadialShape {
public:
    static RadialShape gaussian(double sigma, int dim);
    static RadialShape indicator(double radius, int dim, IndicatorScaling scaling = IndicatorScaling::UnitIntegral);

    double operator()(double r) const noexcept;
    /// f0 applied elementwise to squared distances.
    Eigen::ArrayXd eval_squared(const Eigen::ArrayXd& dist2) const;

    int dim() const noexcept { return dim_; }
    double peak() const noexcept { return peak_; }
    double total_integral() const noexcept { return integral_; }
    /// Radius beyond which f0 vanishes; infinite for the Gaussian.
    double support_radius() const noexcept;
    /// f0 restricted to points strictly inside the support; used for essential suprema.
    double ess_value(double r) const noexcept { return r < support_radius() ? (*this)(r) : 0.0; }

    const std::variant<GaussianShape, IndicatorShape>& kind() const noexcept { return kind_; }
    bool is_gaussian() const noexcept { return std::holds_alternative<GaussianShape>(kind_); }
    std::string describe() const;

private:
    RadialShape(std::variant<GaussianShape, IndicatorShape> kind, int dim);

    std::variant<GaussianShape, IndicatorShape> kind_;
    int dim_;
    double peak_;
    double integral_;
    double inv_two_sigma2_ = 0.0;
    double radius2_ = 0.0;
};

inline double eval_shape(const RadialShape& shape, double r) { return shape(r); }

/**
 * Moving-maxima spectral measure H(A) = Lebesgue{x : f0(||. - x||) in A}
 * restricted to the rectangle K, together with everything the normalized
 * representation needs: c = \int f0(d(x, K)) dx and the region decomposition
 * of the shift density f0(d(x, K)) / c.
 *
 * Regions: d = 1 -> {interior, tails}; d = 2 -> {interior, edge bands, corners}.
 */
class SpectralModel {
public:
    SpectralModel(RadialShape shape, RectDomain domain);

    const RadialShape& shape() const noexcept { return shape_; }
    const RectDomain& domain() const noexcept { return domain_; }
    int dim() const noexcept { return domain_.dim(); }
    double c() const noexcept { return c_; }
    double peak() const noexcept { return shape_.peak(); }
    /// Unnormalized region masses; they sum to c.
    const std::vector<double>& region_masses() const noexcept { return region_masses_; }
    /// Region probabilities; they sum to 1.
    std::vector<double> region_probabilities() const;

private:
    RadialShape shape_;
    RectDomain domain_;
    double c_;
    std::vector<double> region_masses_;
};

/// f~0(x) = sup_{y in K} f0(||y - x||) = f0(d(x, K)).
double sup_shifted(const SpectralModel& model, const Point& x);

/// c from the closed form of the region decomposition.
double normalizing_constant(const SpectralModel& model);

/// Radial profile with known support radius (may be infinite).
struct RadialProfile {
    std::function<double(double)> f0;
    double support_radius = std::numeric_limits<double>::infinity();
};

/**
 * c = \int_{R^dim} f0(d(x, K)) dx by adaptive quadrature (nested in 2-d).
 * Throws NonFiniteConstant when the integral does not converge.
 */
double normalizing_constant_quadrature(const RadialProfile& profile, const RectDomain& domain,
                                       double rel_tol = 1e-10);
double normalizing_constant_quadrature(const RadialShape& shape, const RectDomain& domain, double rel_tol = 1e-10);

/// Region index a point falls in (see SpectralModel).
int shift_region(const RectDomain& domain, const Point& x);

/// Draws X with density f~0(x) / c.
Point sample_shift_gstar(const SpectralModel& model, RngStream& stream);

// ---------------------------------------------------------------------------
// Shift densities for the density-transformed representation.

struct GStarWeight {};

/// Uniform density on [-a, a]^dim.
struct UniformWindowWeight {
    double halfwidth;
};

/// Product over axes of one piecewise-constant density (same table per axis).
struct TabulatedWeight {
    std::vector<double> edges;
    std::vector<double> density;
};

using ShiftDensitySpec = std::variant<GStarWeight, UniformWindowWeight, TabulatedWeight>;

/// Builds a tabulated weight from bin edges and nonnegative heights, normalized
/// to integrate to 1 along each axis.
TabulatedWeight make_tabulated_weight(std::vector<double> edges, std::vector<double> heights);

/// Value of the shift density at x.
double weight_density(const SpectralModel& model, const ShiftDensitySpec& weight, const Point& x);

/// Total mass of the weight on R^dim (1 for valid specs).
double weight_total_mass(const SpectralModel& model, const ShiftDensitySpec& weight);

Point sample_weight(const SpectralModel& model, const ShiftDensitySpec& weight, RngStream& stream);

/**
 * B_w = ess sup_x f~0(x) / w(x). Exact for the supported weights: on each
 * cell of a piecewise-constant weight the sup of f~0 is attained at the
 * point nearest K. Equals c for g*. Throws RegularityViolation when w
 * vanishes on a set of positive measure where f~0 > 0.
 */
double esssup_bound(const SpectralModel& model, const ShiftDensitySpec& weight);

std::string describe(const ShiftDensitySpec& weight);

} // namespace maxfield
