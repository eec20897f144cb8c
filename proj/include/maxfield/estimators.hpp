#pragma once

#include <span>
#include <vector>

#include "maxfield/shapes.hpp"
#include "maxfield/simulators.hpp"
#include "maxfield/statistics.hpp"

namespace maxfield {

/// Mean and standard error of the spectral-function counts. Needs N >= 2.
stats::MeanSE estimate_counts(std::span<const Realization> reps);

/// Mean of c / inf Z over normalized realizations; estimates E m under the exact rule.
stats::MeanSE formula_estimate_Q(std::span<const Realization> reps, double c);

/// Mean of |K (+) J| C / inf Z over Schlather realizations; estimates E M.
stats::MeanSE formula_estimate_M(std::span<const Realization> reps, double volume, double peak);

/**
 * Domain-size factor of Q_{g*} / E M_k for the Smith model on [-R, R]^d with
 * cut-off window [-k sigma, k sigma]^d.
 *   d = 1: (R + sqrt(pi/2) sigma) / (R + k sigma)
 *   d = 2: (R^2 + sqrt(2 pi) sigma R + (pi/2) sigma^2) / (R + k sigma)^2
 */
double A_factor(double R, double sigma, double k, int dim);

struct RatioEstimate {
    double value = 0.0;
    double se = 0.0;
};

/// Ratio of means E(1/inf Z~) / E(1/inf Z_J) with a delta-method standard error
/// (samples treated as independent).
RatioEstimate P_factor(std::span<const Realization> normalized, std::span<const Realization> schlather);

/// Mean of 1 / inf Z.
stats::MeanSE mean_inverse_inf(std::span<const Realization> reps);

/// Two-sided KS test of Z(y_i) against the Frechet law exp(-scale / z). Needs N >= 100.
stats::KsResult ks_margin_test(std::span<const Realization> reps, Eigen::Index grid_index, double scale = 1.0);

/**
 * Exponent measure -log P(Z(y_i) <= z_i for all i)
 *     = \int_{R^d} max_i f0(||y_i - x||) / z_i dx
 * by adaptive quadrature over the bounding box of the points dilated by
 * 10 sigma (Gaussian) or r (indicator). Accepts 1 to 4 points.
 */
double exponent_oracle(const SpectralModel& model, std::span<const Point> points, std::span<const double> thresholds,
                       double rel_tol = 1e-8);

/// Empirical P(Z(y_i) <= z_i for all i) over realizations, with binomial SE.
stats::MeanSE joint_non_exceedance(std::span<const Realization> reps, std::span<const Eigen::Index> grid_indices,
                                   std::span<const double> thresholds);

/**
 * Difference Q^/M^ - A P^ and its delta-method standard error. The four
 * per-replication series (m, 1/inf Z~, M, 1/inf Z_J) are paired by
 * replication index, so the full 4x4 covariance enters the propagation.
 */
struct FactorizationCheck {
    double ratio = 0.0;
    double a_times_p = 0.0;
    double difference = 0.0;
    double se = 0.0;
};
FactorizationCheck factorization_check(std::span<const Realization> normalized, std::span<const Realization> schlather,
                                       double A);

/// Paired difference of mean counts, mean(M) - mean(m), and its standard error.
stats::MeanSE paired_count_difference(std::span<const Realization> normalized, std::span<const Realization> schlather);

} // namespace maxfield
