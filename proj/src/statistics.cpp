#include "maxfield/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxfield/errors.hpp"

namespace maxfield::stats {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

MeanSE mean_se(std::span<const double> xs) {
    if (xs.empty()) throw EmptyInput("mean of an empty sample");
    CompensatedSum s;
    for (double x : xs) s.add(x);
    MeanSE out;
    out.n = xs.size();
    out.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        CompensatedSum ss;
        for (double x : xs) ss.add((x - out.mean) * (x - out.mean));
        out.sd = std::sqrt(ss.value() / static_cast<double>(xs.size() - 1));
        out.se = out.sd / std::sqrt(static_cast<double>(xs.size()));
    }
    return out;
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("covariance: size mismatch");
    if (xs.size() < 2) return 0.0;
    const double mx = mean_se(xs).mean;
    const double my = mean_se(ys).mean;
    CompensatedSum s;
    for (std::size_t i = 0; i < xs.size(); ++i) s.add((xs[i] - mx) * (ys[i] - my));
    return s.value() / static_cast<double>(xs.size() - 1);
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.18) {
        // Jacobi-transformed series converges fast for small x.
        const double y = std::exp(-1.23370055013616983 / (x * x)); // pi^2 / 8
        const double w = 2.50662827463100050 / x;                 // sqrt(2 pi)
        double sum = 0.0;
        for (int k = 1; k < 20; k += 2) sum += std::pow(y, k * k);
        return 1.0 - w * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// Stephens' small-sample correction to the asymptotic Kolmogorov law.
double ks_p_value(double d, double n_eff) {
    const double s = std::sqrt(n_eff);
    return kolmogorov_survival((s + 0.12 + 0.11 / s) * d);
}

} // namespace

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw EmptyInput("KS test on an empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p_value(d, n)};
}

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty()) throw EmptyInput("KS test on an empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] <= v) ++i;
        while (j < ys.size() && ys[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    return {d, ks_p_value(d, n1 * n2 / (n1 + n2))};
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: invalid arguments");
    if (x == 0.0) return 1.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        // Series for P(a, x).
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int n = 0; n < 10000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefactor);
    }
    // Modified Lentz continued fraction for Q(a, x).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefactor) * h;
}

double chi_square_survival(double statistic, double dof) { return gamma_q(0.5 * dof, 0.5 * statistic); }

ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                int fitted_parameters) {
    if (observed.size() != expected.size() || observed.empty()) throw EmptyInput("chi-square test needs matching bins");
    ChiSquareResult r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) throw std::invalid_argument("chi-square test: expected count must be positive");
        const double diff = observed[i] - expected[i];
        r.statistic += diff * diff / expected[i];
    }
    r.dof = static_cast<double>(observed.size()) - 1.0 - fitted_parameters;
    r.p_value = chi_square_survival(r.statistic, r.dof);
    return r;
}

} // namespace maxfield::stats
