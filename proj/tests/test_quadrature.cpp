#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "maxfield/quadrature.hpp"

using namespace maxfield;

TEST_SUITE("quadrature") {

TEST_CASE("finite smooth integrals") {
    const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    const auto p = quad::integrate([](double x) { return x * x * x; }, -1.0, 2.0);
    CHECK(p.value == doctest::Approx(3.75).epsilon(1e-13));
}

TEST_CASE("infinite ranges") {
    const auto g = quad::integrate([](double x) { return std::exp(-0.5 * x * x); }, -INFINITY, INFINITY);
    CHECK(g.converged);
    CHECK(g.value == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-11));
    const auto e = quad::integrate([](double x) { return std::exp(-x); }, 1.0, INFINITY);
    CHECK(e.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
}

TEST_CASE("kinks and jumps at breakpoints") {
    const std::vector<double> bp{-1.0, 0.0, 0.5, 2.0};
    const auto r = quad::integrate([](double x) { return x < 0.5 ? std::abs(x) : 3.0; }, bp);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.5 + 0.125 + 4.5).epsilon(1e-13));
}

TEST_CASE("divergent integral is reported") {
    quad::Options o;
    o.max_intervals = 200;
    const auto r = quad::integrate([](double x) { return 1.0 / (1.0 + x); }, 0.0, INFINITY, o);
    CHECK_FALSE(r.converged);
}

}
