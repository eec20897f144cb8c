#include "maxfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace maxfield::quad {

namespace {

// Kronrod 15-point abscissae (nonnegative half) and weights; Gauss 7-point weights.
constexpr double kXk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kWk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    const double value = kronrod * half;
    double error = std::abs((kronrod - gauss) * half);
    // Floor the estimate at rounding level so smooth pieces settle.
    error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(value));
    return {a, b, value, error};
}

} // namespace

Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& opts) {
    Result res;
    if (breakpoints.size() < 2) return res;

    // Map infinite ends onto finite ranges; each mapped piece is integrated on its own scale.
    std::vector<std::pair<Integrand, std::pair<double, double>>> pieces;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(a < b)) continue;
        const bool inf_a = std::isinf(a);
        const bool inf_b = std::isinf(b);
        if (inf_a && inf_b) {
            pieces.push_back({[&f](double t) {
                                  const double x = t / (1.0 - t * t);
                                  return f(x) * (1.0 + t * t) / ((1.0 - t * t) * (1.0 - t * t));
                              },
                              {-1.0, 1.0}});
        } else if (inf_b) {
            pieces.push_back({[&f, a](double t) {
                                  const double s = 1.0 - t;
                                  return f(a + t / s) / (s * s);
                              },
                              {0.0, 1.0}});
        } else if (inf_a) {
            pieces.push_back({[&f, b](double t) {
                                  const double s = 1.0 - t;
                                  return f(b - t / s) / (s * s);
                              },
                              {0.0, 1.0}});
        } else {
            pieces.push_back({f, {a, b}});
        }
    }

    double total = 0.0;
    double total_err = 0.0;
    std::vector<std::priority_queue<Segment>> heaps(pieces.size());
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        const auto seg = gauss_kronrod(pieces[p].first, pieces[p].second.first, pieces[p].second.second);
        heaps[p].push(seg);
        total += seg.value;
        total_err += seg.error;
    }
    int count = static_cast<int>(pieces.size());

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (total_err > tolerance() && count < opts.max_intervals) {
        std::size_t worst = 0;
        double worst_err = -1.0;
        for (std::size_t p = 0; p < heaps.size(); ++p)
            if (!heaps[p].empty() && heaps[p].top().error > worst_err) {
                worst_err = heaps[p].top().error;
                worst = p;
            }
        const Segment seg = heaps[worst].top();
        const double mid = 0.5 * (seg.a + seg.b);
        if (!(mid > seg.a && mid < seg.b)) break;
        heaps[worst].pop();
        const auto left = gauss_kronrod(pieces[worst].first, seg.a, mid);
        const auto right = gauss_kronrod(pieces[worst].first, mid, seg.b);
        heaps[worst].push(left);
        heaps[worst].push(right);
        total += left.value + right.value - seg.value;
        total_err += left.error + right.error - seg.error;
        ++count;
    }

    // Re-sum to shed drift from the running updates.
    total = 0.0;
    total_err = 0.0;
    for (auto& h : heaps)
        while (!h.empty()) {
            total += h.top().value;
            total_err += h.top().error;
            h.pop();
        }
    res.value = total;
    res.error = total_err;
    res.intervals = count;
    res.converged = std::isfinite(total) && total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return res;
}

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
    const double bounds[2] = {a, b};
    return integrate(f, std::span<const double>(bounds, 2), opts);
}

} // namespace maxfield::quad
