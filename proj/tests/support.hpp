#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "maxfield/parallel.hpp"
#include "maxfield/shapes.hpp"
#include "maxfield/simulators.hpp"

namespace testing {

inline maxfield::Point pt(double a) {
    maxfield::Point p(1);
    p << a;
    return p;
}
inline maxfield::Point pt(double a, double b) {
    maxfield::Point p(2);
    p << a, b;
    return p;
}

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline maxfield::SpectralModel smith(int dim, double R, double h, double sigma = 1.0) {
    return {maxfield::RadialShape::gaussian(sigma, dim), maxfield::RectDomain(dim, R, h)};
}

inline maxfield::SpectralModel raw_indicator(int dim, double R, double h, double r = 1.0) {
    return {maxfield::RadialShape::indicator(r, dim, maxfield::IndicatorScaling::Raw), maxfield::RectDomain(dim, R, h)};
}

/// Replication i uses stream (seed, i).
template <class Sim>
std::vector<maxfield::Realization> replicate(std::int64_t n, std::uint64_t seed, Sim&& sim, int threads = 4) {
    return maxfield::run_replications(n, threads, [&](std::int64_t i) {
        auto s = maxfield::derive_stream(seed, static_cast<std::uint64_t>(i));
        return sim(s);
    });
}

inline std::vector<double> column(const std::vector<maxfield::Realization>& reps, Eigen::Index i) {
    std::vector<double> out;
    out.reserve(reps.size());
    for (const auto& r : reps) out.push_back(r.field[i]);
    return out;
}

inline std::vector<double> counts(const std::vector<maxfield::Realization>& reps) {
    std::vector<double> out;
    out.reserve(reps.size());
    for (const auto& r : reps) out.push_back(static_cast<double>(r.n_spectral));
    return out;
}

/// Smith bivariate exponent V(z1, z2) at Mahalanobis distance a.
inline double smith_pair_exponent(double a, double z1, double z2) {
    return Phi(a / 2 + std::log(z2 / z1) / a) / z1 + Phi(a / 2 + std::log(z1 / z2) / a) / z2;
}

} // namespace testing
