#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "maxfield/errors.hpp"
#include "maxfield/estimators.hpp"
#include "maxfield/experiment.hpp"
#include "maxfield/statistics.hpp"
#include "support.hpp"

using namespace maxfield;
using namespace testing;

namespace {

std::vector<Realization> synthetic(std::initializer_list<std::int64_t> ms) {
    std::vector<Realization> out;
    for (auto m : ms) {
        Realization r;
        r.n_spectral = m;
        r.field = Eigen::ArrayXd::Constant(3, 2.0);
        r.inf_field = r.sup_field = 2.0;
        out.push_back(r);
    }
    return out;
}

// Riemann sum of max_i f0(|y_i - x|) / z_i over [lo, hi].
double riemann_exponent(const RadialShape& f, const std::vector<double>& ys, const std::vector<double>& zs, double lo, double hi) {
    const int n = 2'000'000;
    const double dx = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (i + 0.5) * dx;
        double m = 0.0;
        for (std::size_t j = 0; j < ys.size(); ++j) m = std::max(m, f(std::abs(ys[j] - x)) / zs[j]);
        sum += m;
    }
    return sum * dx;
}

} // namespace

TEST_SUITE("estimators") {

TEST_CASE("count estimates") {
    const auto a = estimate_counts(synthetic({1, 1, 1}));
    CHECK(a.mean == 1.0);
    CHECK(a.se == 0.0);
    const auto b = estimate_counts(synthetic({2, 4}));
    CHECK(b.mean == 3.0);
    CHECK(b.se == doctest::Approx(1.0));
    CHECK_THROWS_AS(estimate_counts(std::vector<Realization>{}), EmptyInput);
    CHECK_THROWS_AS(estimate_counts(synthetic({3})), EmptyInput);
}

TEST_CASE("formula estimates on synthetic fields") {
    const auto reps = synthetic({1, 2});
    CHECK(formula_estimate_Q(reps, 2.0).mean == 1.0);
    CHECK(formula_estimate_M(reps, 4.0, 0.5).mean == 1.0);
    CHECK_THROWS_AS(formula_estimate_Q(std::vector<Realization>{}, 1.0), EmptyInput);
    CHECK_THROWS_AS(formula_estimate_M(std::vector<Realization>{}, 1.0, 1.0), EmptyInput);
}

TEST_CASE("formula estimate of Q matches the counted mean for the Smith model") {
    const auto m = smith(1, 1.0, 0.1);
    const auto reps = replicate(5000, 101, [&](RngStream& s) { return simulate_normalized(m, s); });
    std::vector<double> diff;
    for (const auto& r : reps) diff.push_back(m.c() / r.inf_field - static_cast<double>(r.n_spectral));
    const auto d = stats::mean_se(diff);
    CHECK(std::abs(d.mean) < 3 * d.se);
    CHECK(formula_estimate_Q(reps, m.c()).mean - estimate_counts(reps).mean == doctest::Approx(d.mean));
}

TEST_CASE("formula estimate of Q bounds the counted mean for the raw indicator") {
    const auto m = raw_indicator(1, 1.0, 0.1);
    const auto reps = replicate(5000, 102, [&](RngStream& s) { return simulate_normalized(m, s); });
    std::vector<double> diff;
    for (const auto& r : reps) diff.push_back(m.c() / r.inf_field - static_cast<double>(r.n_spectral));
    const auto d = stats::mean_se(diff);
    CHECK(d.mean > -3 * d.se);
}

TEST_CASE("formula estimate of M matches the counted mean for the Smith model") {
    const auto m = smith(1, 1.0, 0.1);
    const auto w = schlather_window(m, 2);
    const auto reps = replicate(5000, 103, [&](RngStream& s) { return simulate_schlather(m, 2, s); });
    std::vector<double> diff;
    for (const auto& r : reps) diff.push_back(w.volume * m.peak() / r.inf_field - static_cast<double>(r.n_spectral));
    const auto d = stats::mean_se(diff);
    CHECK(std::abs(d.mean) < 3 * d.se);
}

TEST_CASE("A factor") {
    CHECK(A_factor(1, 1, 2, 1) == doctest::Approx(0.7511).epsilon(1e-4));
    CHECK(A_factor(1, 1, 3, 1) == doctest::Approx(0.5633).epsilon(1e-4));
    CHECK(A_factor(1, 1, 3, 2) == doctest::Approx(0.317339).epsilon(1e-5));
    const double k0 = std::sqrt(std::numbers::pi / 2);
    for (int dim : {1, 2})
        for (double R : {0.5, 1.0, 10.0}) {
            CHECK(A_factor(R, 1, k0 + 1e-3, dim) < 1.0);
            CHECK(A_factor(R, 1, k0 - 1e-3, dim) > 1.0);
            CHECK(A_factor(R, 1, k0, dim) == doctest::Approx(1.0).epsilon(1e-14));
        }
}

TEST_CASE("P factor") {
    const auto m = smith(1, 1.0, 0.1);
    const auto reps = replicate(200, 104, [&](RngStream& s) { return simulate_normalized(m, s); });
    CHECK(P_factor(reps, reps).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(P_factor(reps, std::vector<Realization>{}), EmptyInput);
}

TEST_CASE("P factor of the Smith model") {
    struct Case {
        double R;
        int k;
        double expected;
    };
    for (const auto& c : {Case{1.0, 2, 0.94}, Case{5.0, 3, 1.00}}) {
        const auto m = smith(1, c.R, 0.1);
        const auto n = replicate(5000, 105, [&](RngStream& s) { return simulate_normalized(m, s); });
        const auto s = replicate(5000, 105, [&](RngStream& st) { return simulate_schlather(m, c.k, st); });
        CHECK_MESSAGE(std::abs(P_factor(n, s).value - c.expected) <= 0.03, "R=" << c.R << " k=" << c.k);
    }
}

TEST_CASE("margin test on exact Frechet samples") {
    std::vector<Realization> reps;
    RngStream s(106, 0);
    for (int i = 0; i < 5000; ++i) {
        Realization r;
        r.field = Eigen::ArrayXd::Constant(1, -1.0 / std::log(s.uniform()));
        reps.push_back(r);
    }
    CHECK(ks_margin_test(reps, 0).p_value > 1e-3);
    CHECK(ks_margin_test(reps, 0, 2.0).p_value < 1e-6);
    reps.resize(50);
    CHECK_THROWS_AS(ks_margin_test(reps, 0), EmptyInput);
}

TEST_CASE("Smith margins at the centre") {
    const auto m = smith(1, 1.0, 0.1);
    const auto reps = replicate(5000, 107, [&](RngStream& s) { return simulate_normalized(m, s); });
    const Eigen::Index mid = m.domain().nearest_index(pt(0.0));
    CHECK(ks_margin_test(reps, mid).p_value > 1e-3);
    const std::vector<Eigen::Index> idx{mid};
    const std::vector<double> z{1.0};
    const auto p = joint_non_exceedance(reps, idx, z);
    CHECK(std::abs(p.mean - std::exp(-1.0)) < 3 * p.se);
}

TEST_CASE("exponent oracle: trivial cases") {
    const auto g = smith(1, 1.0, 0.1);
    const std::vector<Point> one{pt(0.0)};
    const std::vector<double> z1{1.0};
    CHECK(exponent_oracle(g, one, z1) == doctest::Approx(1.0).epsilon(1e-8));
    const std::vector<Point> far{pt(-1.0), pt(60.0)};
    const std::vector<double> z2{1.0, 1.0};
    CHECK(exponent_oracle(g, far, z2) == doctest::Approx(2.0).epsilon(1e-8));
    const SpectralModel ind(RadialShape::indicator(1.0, 1), RectDomain(1, 1.0, 0.1));
    const std::vector<Point> near{pt(0.0), pt(1.0)};
    const double v = exponent_oracle(ind, near, z2);
    CHECK(v == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(v == doctest::Approx(riemann_exponent(ind.shape(), {0.0, 1.0}, {1.0, 1.0}, -2.0, 3.0)).epsilon(1e-5));
}

TEST_CASE("exponent oracle: Smith pairs in closed form") {
    const auto g1 = smith(1, 1.0, 0.1);
    const std::vector<Point> p1{pt(0.0), pt(0.5)};
    const std::vector<double> z{1.0, 2.0};
    CHECK(exponent_oracle(g1, p1, z) == doctest::Approx(smith_pair_exponent(0.5, 1.0, 2.0)).epsilon(1e-8));
    const auto g2 = smith(2, 1.0, 0.25, 0.8);
    const std::vector<Point> p2{pt(0.0, 0.0), pt(0.75, -0.5)};
    const double a = std::hypot(0.75, 0.5) / 0.8;
    CHECK(exponent_oracle(g2, p2, z) == doctest::Approx(smith_pair_exponent(a, 1.0, 2.0)).epsilon(1e-8));
}

TEST_CASE("exponent oracle: three points against a Riemann sum") {
    const auto g = smith(1, 1.0, 0.1);
    const std::vector<Point> p{pt(-1.0), pt(0.0), pt(1.0)};
    const std::vector<double> z{1.0, 2.0, 1.5};
    CHECK(exponent_oracle(g, p, z) ==
          doctest::Approx(riemann_exponent(g.shape(), {-1.0, 0.0, 1.0}, {1.0, 2.0, 1.5}, -12.0, 12.0)).epsilon(1e-7));
}

TEST_CASE("empirical joint non-exceedance matches the oracle") {
    const auto m = smith(1, 1.0, 0.1);
    const auto reps = replicate(5000, 108, [&](RngStream& s) { return simulate_normalized(m, s); });
    const std::vector<Point> pts{pt(-1.0), pt(0.0), pt(1.0)};
    const std::vector<double> z{1.0, 2.0, 1.5};
    std::vector<Eigen::Index> idx;
    for (const auto& p : pts) idx.push_back(m.domain().nearest_index(p));
    const auto emp = joint_non_exceedance(reps, idx, z);
    const double expected = std::exp(-exponent_oracle(m, pts, z));
    CHECK(std::abs(emp.mean - expected) < 3 * std::sqrt(expected * (1 - expected) / 5000));
}

TEST_CASE("factorization of the count ratio") {
    const auto m = smith(1, 2.0, 0.1);
    const auto n = replicate(5000, 109, [&](RngStream& s) { return simulate_normalized(m, s); });
    const auto s = replicate(5000, 109, [&](RngStream& st) { return simulate_schlather(m, 2, st); });
    const auto f = factorization_check(n, s, A_factor(2.0, 1.0, 2, 1));
    CHECK(f.se > 0.0);
    CHECK(std::abs(f.difference) < 3 * f.se);
    CHECK(f.ratio == doctest::Approx(estimate_counts(n).mean / estimate_counts(s).mean));
    const auto gap = paired_count_difference(n, s);
    CHECK(gap.mean > 3 * gap.se);
}

TEST_CASE("experiment rejects empty input") {
    auto cfg = table1_config();
    cfg.N = 0;
    CHECK_THROWS_AS(run_experiment(cfg), EmptyInput);
}

}

TEST_SUITE("estimators") {

TEST_CASE("published reference cells") {
    const auto a = reference_value(1, 1.0, 2);
    REQUIRE(a.has_value());
    CHECK(a->Q == 3.12);
    CHECK(a->M == 4.38);
    const auto b = reference_value(2, 10.0, 3);
    REQUIRE(b.has_value());
    CHECK(b->M == 839.55);
    CHECK_FALSE(reference_value(1, 3.0, 2).has_value());
    CHECK_FALSE(reference_value(2, 1.0, 4).has_value());
}

}
