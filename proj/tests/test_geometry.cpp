#include <cmath>
#include <numbers>

#include "doctest.h"

#include "maxfield/errors.hpp"
#include "maxfield/geometry.hpp"
#include "maxfield/rng.hpp"

using namespace maxfield;

static Point pt(double a) {
    Point p(1);
    p << a;
    return p;
}
static Point pt(double a, double b) {
    Point p(2);
    p << a, b;
    return p;
}

TEST_SUITE("geometry") {

TEST_CASE("grid size and corners") {
    RectDomain d1(1, 1.0, 0.1);
    CHECK(d1.size() == 21);
    CHECK(d1.grid()(0, 0) == -1.0);
    CHECK(d1.grid()(20, 0) == 1.0);
    RectDomain d2(2, 1.0, 0.25);
    CHECK(d2.size() == 81);
    CHECK(d2.grid()(0, 0) == -1.0);
    CHECK(d2.grid()(80, 1) == 1.0);
    // Lexicographic: second coordinate varies fastest.
    CHECK(d2.grid()(1, 0) == -1.0);
    CHECK(d2.grid()(1, 1) == -0.75);
    CHECK(d2.nearest_index(pt(0.0, 0.0)) == 40);
}

TEST_CASE("singleton domain") {
    RectDomain d(2, 0.0, 0.5);
    CHECK(d.size() == 1);
    CHECK(d.grid()(0, 0) == 0.0);
}

TEST_CASE("misaligned grid is a configuration error") {
    CHECK_THROWS_WITH_AS(RectDomain(1, 1.0, 0.3), doctest::Contains("grid_step must divide 2R"), ConfigError);
    CHECK_THROWS_AS(RectDomain(3, 1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(RectDomain(1, -1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(RectDomain(1, 1.0, 0.0), ConfigError);
    CHECK_NOTHROW(RectDomain(1, 100.0, 0.1));
}

TEST_CASE("distance to K") {
    RectDomain d1(1, 1.0, 0.1);
    CHECK(dist_to_K(d1, pt(0.5)) == 0.0);
    CHECK(dist_to_K(d1, pt(1.5)) == doctest::Approx(0.5));
    RectDomain d2(2, 1.0, 0.25);
    CHECK(dist_to_K(d2, pt(2.0, 2.0)) == doctest::Approx(1.414214).epsilon(1e-6));
    CHECK(dist_to_K(d2, pt(2.0, 0.5)) == doctest::Approx(1.0));
}

TEST_CASE("distance to K is zero exactly on K and 1-Lipschitz") {
    RectDomain d(2, 1.0, 0.25);
    RngStream s(3, 3);
    for (int i = 0; i < 10000; ++i) {
        const Point x = pt(6 * s.uniform() - 3, 6 * s.uniform() - 3);
        const Point y = pt(6 * s.uniform() - 3, 6 * s.uniform() - 3);
        const bool inside = std::abs(x[0]) <= 1.0 && std::abs(x[1]) <= 1.0;
        REQUIRE((dist_to_K(d, x) == 0.0) == inside);
        REQUIRE(std::abs(dist_to_K(d, x) - dist_to_K(d, y)) <= (x - y).norm() + 1e-14);
    }
}

TEST_CASE("dilated volumes") {
    RectDomain d1(1, 1.0, 0.1);
    RectDomain d2(2, 1.0, 0.25);
    CHECK(dilated_volume(d1, 2.0, DilationKind::Cube) == 6.0);
    CHECK(dilated_volume(d1, 2.0, DilationKind::Ball) == 6.0);
    CHECK(dilated_volume(d2, 3.0, DilationKind::Cube) == 64.0);
    CHECK(dilated_volume(d2, 1.0, DilationKind::Ball) == doctest::Approx(15.14159).epsilon(1e-6));
    double prev = 0.0;
    for (double a = 0.0; a < 5.0; a += 0.25) {
        const double v = dilated_volume(d2, a, DilationKind::Ball);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("Steiner formula against hit counting") {
    // Independent oracle: fraction of uniform points in [-2, 2]^2 within distance 1 of K.
    RectDomain d(2, 1.0, 0.25);
    RngStream s(17, 0);
    const int n = 400000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double x = 4 * s.uniform() - 2, y = 4 * s.uniform() - 2;
        const double dx = std::max(std::abs(x) - 1.0, 0.0), dy = std::max(std::abs(y) - 1.0, 0.0);
        hits += dx * dx + dy * dy <= 1.0;
    }
    const double p = static_cast<double>(hits) / n;
    const double est = 16.0 * p;
    const double se = 16.0 * std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(est - dilated_volume(d, 1.0, DilationKind::Ball)) < 4 * se);
}

TEST_CASE("uniform dilation sampler stays inside and fills the corners") {
    RectDomain d(2, 1.0, 0.25);
    RngStream s(23, 0);
    const int n = 200000;
    int corner = 0;
    for (int i = 0; i < n; ++i) {
        const Point x = sample_uniform_dilation(d, 1.0, DilationKind::Ball, s);
        REQUIRE(dist_to_K(d, x) <= 1.0 + 1e-12);
        corner += std::abs(x[0]) > 1.0 && std::abs(x[1]) > 1.0;
    }
    const double p = std::numbers::pi / dilated_volume(d, 1.0, DilationKind::Ball);
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(corner) / n - p) < 4 * se);
}

}
