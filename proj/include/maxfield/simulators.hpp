#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "maxfield/shapes.hpp"

namespace maxfield {

enum class Method { Normalized, Schlather, Transformed };

/**
 * Stopping rules for the normalized representation.
 *
 * Exact and Strong coincide for moving maxima with shifts over all of R^d:
 * at every y the pointwise ratio f(y) / g*(f) has essential supremum c, so
 * both reduce to c * t_{m+1} <= inf_K Z^(m). Weak compares against the
 * supremum of Z^(m) over the continuum rectangle, which equals c * t_1.
 */
enum class StoppingVariant { Exact, Strong, Weak };

std::string to_string(Method m);
std::string to_string(StoppingVariant v);
StoppingVariant parse_variant(const std::string& name);
Method parse_method(const std::string& name);

/// One simulated field on the grid of the model's domain.
struct Realization {
    Eigen::ArrayXd field;
    std::int64_t n_spectral = 0;
    double inf_field = 0.0;
    double sup_field = 0.0;
    double first_arrival = 0.0;
    /// S_1, ..., S_{m+1}; the last sum triggered the stop and its function was never drawn.
    std::vector<double> partial_sums;
    Method method = Method::Normalized;
    StoppingVariant variant = StoppingVariant::Exact;

    std::size_t arrivals_consumed() const noexcept { return partial_sums.size(); }
};

struct SimulationOptions {
    std::int64_t max_functions = 10'000'000;
    /// Called after every overlay with (m, Z^(m)).
    std::function<void(std::int64_t, const Eigen::ArrayXd&)> observer;
};

Realization simulate_normalized(const SpectralModel& model, RngStream& stream,
                                StoppingVariant variant = StoppingVariant::Exact, const SimulationOptions& opts = {});

/// Cut-off window J of Schlather's algorithm and |K (+) J|.
struct SchlatherWindow {
    DilationKind kind;
    double halfwidth;
    double volume;
};

/// Gaussian: J = [-k sigma, k sigma]^d. Indicator: J = b(0, k r), which contains the support.
SchlatherWindow schlather_window(const SpectralModel& model, int cutoff_k);

Realization simulate_schlather(const SpectralModel& model, int cutoff_k, RngStream& stream,
                               const SimulationOptions& opts = {});

/// Density-transformed representation with shifts drawn from `weight`.
Realization simulate_transformed(const SpectralModel& model, const ShiftDensitySpec& weight, RngStream& stream,
                                 const SimulationOptions& opts = {});

/**
 * m recomputed from the final field and the recorded partial sums:
 * min{ m : c / S_{m+1} < inf Z }. Equals the counted m for the normalized
 * Exact rule. The comparison is strict: on a grid, the function after the
 * last counted one can lift an isolated boundary minimum exactly to its peak
 * c / S. Returns -1 if no recorded sum qualifies.
 */
std::int64_t recompute_count(const Realization& r, double c);

/// CSV trace: replication,m,inf,sup,t1
void write_trace_csv(std::ostream& os, std::span<const Realization> reps);

} // namespace maxfield
