#pragma once

#include <functional>
#include <span>
#include <vector>

namespace maxfield::stats {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

/// Sample mean, sample standard deviation (n - 1) and standard error sd / sqrt(n).
MeanSE mean_se(std::span<const double> xs);

/// Sample covariance of two equally long samples.
double covariance(std::span<const double> xs, std::span<const double> ys);

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// One-sample two-sided KS test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);

/// Two-sample two-sided KS test.
KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// P(chi^2_dof > statistic).
double chi_square_survival(double statistic, double dof);

/// Pearson chi-square test of observed counts against expected counts.
struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 0.0;
};
ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                int fitted_parameters = 0);

} // namespace maxfield::stats
