#include "vortex/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace vortex;

TEST_CASE("gauss rules integrate polynomials exactly") {
    // order-n Gauss is exact up to degree 2n - 1
    auto poly = [](double x) { return ((3.0 * x - 1.0) * x + 2.0) * x * x * x - 0.5; };
    const double exact = -2.0 / 5.0 - 1.0; // odd powers drop out on [-1, 1]
    CHECK(fixed_gauss(poly, -1.0, 1.0, 4) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(fixed_gauss(poly, -1.0, 1.0, 7) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive integration of smooth and peaked integrands") {
    const QuadratureResult g = adaptive_integrate(
        [](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(g.converged);
    CHECK(g.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

    const QuadratureResult peak = adaptive_integrate(
        [](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
    const double exact = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
    CHECK(peak.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("adaptive integration with an integrable endpoint singularity") {
    const QuadratureResult r = adaptive_integrate(
        [](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));

    const QuadratureResult s = adaptive_integrate(
        [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("tensor 4x4 Gauss is exact through degree 7 per axis") {
    auto f = [](Vec2 p) {
        const double x7 = std::pow(p.x, 7), y6 = std::pow(p.y, 6);
        return x7 * p.y + 3.0 * y6 + p.x * p.x;
    };
    // over [0,1]^2: int x^7 y = 1/16, int 3 y^6 = 3/7, int x^2 = 1/3
    const double exact = 1.0 / 16.0 + 3.0 / 7.0 + 1.0 / 3.0;
    CHECK(tensor_gauss4(f, {0.0, 1.0, 0.0, 1.0}) == doctest::Approx(exact).epsilon(1e-14));
}
