#pragma once

#include <functional>
#include <span>

namespace maxfield::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

using Integrand = std::function<double(double)>;

/**
 * Globally adaptive Gauss-Kronrod (7/15) quadrature over [a, b]. Either bound
 * may be infinite; infinite ranges are mapped onto finite ones with
 * x = a + t / (1 - t). The interval with the largest error estimate is
 * bisected until the total error meets max(abs_tol, rel_tol * |value|).
 */
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// As integrate(), with the range pre-split at the sorted breakpoints
/// (first and last entries are the bounds).
Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& opts = {});

} // namespace maxfield::quad
