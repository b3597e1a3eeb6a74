#include "vortex/discretize.hpp"

#include "oracles.hpp"
#include "vortex/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace vortex;

namespace {

double total_circulation(const VortexSystem& sys) {
    double s = 0.0, c = 0.0;
    for (double g : sys.circulations) {
        const double y = g - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double second_moment(const VortexSystem& sys) {
    double s = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i)
        s += sys.circulations[i] * sys.positions[i].norm2();
    return s;
}

// independent cell-sum of the density over the same corner-anchored covering
double covering_quadrature_total(const InitialVorticity& iv, double eta) {
    const Rect& box = iv.support_box;
    const long i0 = static_cast<long>(std::floor(box.xmin / eta));
    const long i1 = static_cast<long>(std::ceil(box.xmax / eta));
    const long j0 = static_cast<long>(std::floor(box.ymin / eta));
    const long j1 = static_cast<long>(std::ceil(box.ymax / eta));
    double s = 0.0, c = 0.0;
    for (long j = j0; j < j1; ++j) {
        for (long i = i0; i < i1; ++i) {
            const double g = tensor_gauss4(iv.density, {i * eta, (i + 1) * eta, j * eta, (j + 1) * eta});
            const double y = g - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
        }
    }
    return s;
}

} // namespace

TEST_CASE("uniform density on the unit square with eta = 1/2") {
    InitialVorticity iv;
    iv.kind = InitialVorticity::Kind::area_density;
    iv.density = [](Vec2 p) {
        return (p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0) ? 1.0 : 0.0;
    };
    iv.support_box = {0.0, 1.0, 0.0, 1.0};

    const VortexSystem sys = discretize_density(iv, 0.5, 0.0, make_blob_kernel(), 0.25);
    REQUIRE(sys.size() == 4);
    const std::vector<Vec2> expected = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
    for (const Vec2& e : expected) {
        bool found = false;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            if ((sys.positions[i] - e).norm() < 1e-12) {
                CHECK(sys.circulations[i] == doctest::Approx(0.25).epsilon(1e-13));
                found = true;
            }
        }
        CHECK(found);
    }
    CHECK(sys.grid_eta == 0.5);
}

TEST_CASE("discretization conserves the covering quadrature total") {
    const InitialVorticity gauss = builtin_initial_data("gaussian_patch");
    const InitialVorticity patch = builtin_initial_data("uniform_patch");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> etad(0.07, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        const double eta = etad(rng);
        for (const InitialVorticity* iv : {&gauss, &patch}) {
            const VortexSystem sys = discretize_density(*iv, eta, 0.0, make_blob_kernel(), eta);
            CHECK(std::abs(total_circulation(sys) - covering_quadrature_total(*iv, eta)) <= 1e-10);
        }
    }
}

TEST_CASE("gaussian patch total circulation approaches pi") {
    const InitialVorticity iv = builtin_initial_data("gaussian_patch");
    const VortexSystem sys = discretize_density(iv, 0.1, 0.0, make_blob_kernel(), 0.1);
    CHECK(std::abs(total_circulation(sys) - M_PI) <= 1e-6);
}

TEST_CASE("sign preservation and the eta/eps metadata") {
    const InitialVorticity iv = builtin_initial_data("gaussian_patch");
    const VortexSystem sys = discretize_density(iv, 0.25, 0.0, make_blob_kernel(), 0.25);
    for (double g : sys.circulations) CHECK(g >= 0.0);
    CHECK(sys.grid_eta / sys.eps == doctest::Approx(1.0));
}

TEST_CASE("refinement consistency of total mass and second moment") {
    const InitialVorticity iv = builtin_initial_data("gaussian_patch");
    // int |x|^2 e^{-|x|^2} = pi over the plane
    std::vector<double> etas, m2err;
    double q_ref = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double eta = 0.4 / (1 << k);
        const VortexSystem sys = discretize_density(iv, eta, 0.0, make_blob_kernel(), eta);
        if (k == 0) q_ref = total_circulation(sys);
        CHECK(std::abs(total_circulation(sys) - q_ref) <= 1e-10);
        etas.push_back(eta);
        m2err.push_back(std::abs(second_moment(sys) - M_PI));
    }
    CHECK(oracles::loglog_slope(etas, m2err) >= 1.9);
}

TEST_CASE("empty discretization and oversized cells") {
    InitialVorticity iv;
    iv.kind = InitialVorticity::Kind::area_density;
    iv.density = [](Vec2) { return 1e-18; };
    iv.support_box = {0.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(discretize_density(iv, 0.5, 1e-6, make_blob_kernel(), 1.0),
                    std::invalid_argument);

    // eta larger than the box: warns and yields the covering cells
    const InitialVorticity patch = builtin_initial_data("uniform_patch", {{"radius", 0.4}});
    const VortexSystem sys = discretize_density(patch, 3.0, 0.0, make_blob_kernel(), 1.0);
    CHECK(sys.size() >= 1);
    CHECK(total_circulation(sys) == doctest::Approx(covering_quadrature_total(patch, 3.0)));
}

TEST_CASE("flat sheet markers sit at circulation midpoints") {
    const InitialVorticity iv = builtin_initial_data("flat_sheet", {{"density", 0.5}});
    const VortexSystem sys = discretize_sheet(iv, 4, make_blob_kernel(), 0.1);
    REQUIRE(sys.size() == 4);
    const std::vector<double> expected = {-0.75, -0.25, 0.25, 0.75};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(sys.positions[i].x == doctest::Approx(expected[i]).epsilon(1e-10));
        CHECK(sys.positions[i].y == 0.0);
        CHECK(sys.circulations[i] == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("circular sheet markers at the angle midpoints") {
    const InitialVorticity iv = builtin_initial_data("circular_sheet");
    const VortexSystem sys = discretize_sheet(iv, 8, make_blob_kernel(), 0.1);
    REQUIRE(sys.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) {
        const double th = M_PI / 8.0 + k * M_PI / 4.0;
        CHECK(sys.positions[k].x == doctest::Approx(std::cos(th)).epsilon(1e-9));
        CHECK(sys.positions[k].y == doctest::Approx(std::sin(th)).epsilon(1e-9));
        CHECK(sys.circulations[k] == doctest::Approx(2.0 * M_PI / 8.0).epsilon(1e-12));
    }
}

TEST_CASE("elliptically loaded sheet lands on Chebyshev abscissae") {
    // density (1 - x^2)^{-1/2} along [-1, 1]: cumulative circulation is
    // arcsin, so the equal-circulation markers are cos(pi (k - 1/2) / n)
    InitialVorticity iv;
    iv.kind = InitialVorticity::Kind::sheet_curve;
    iv.curve = [](double s) { return Vec2{-1.0 + 2.0 * s, 0.0}; };
    iv.gamma_density = [](double s) {
        // 2 / sqrt(1 - x(s)^2) written as 1 / sqrt(s (1 - s)); points that
        // collapse onto the endpoints in floating point carry no mass
        const double u = s * (1.0 - s);
        return u > 0.0 ? 1.0 / std::sqrt(u) : 0.0;
    };
    iv.support_box = {-1.0, 1.0, 0.0, 0.0};

    const int n = 10;
    const VortexSystem sys = discretize_sheet(iv, n, make_blob_kernel(), 0.1);
    REQUIRE(sys.size() == static_cast<std::size_t>(n));
    std::vector<double> xs;
    for (const Vec2& p : sys.positions) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    std::vector<double> expected;
    for (int k = n; k >= 1; --k) expected.push_back(std::cos(M_PI * (k - 0.5) / n));
    // endpoint-singular density: the cumulative integral is good to ~1e-8
    for (int k = 0; k < n; ++k) CHECK(std::abs(xs[k] - expected[k]) <= 3e-8);
    CHECK(std::abs(total_circulation(sys) - M_PI) <= 5e-7);
}

TEST_CASE("zero-circulation sheet is rejected") {
    const InitialVorticity iv = builtin_initial_data("flat_sheet", {{"density", 0.0}});
    CHECK_THROWS_AS(discretize_sheet(iv, 4, make_blob_kernel(), 0.1), std::invalid_argument);
}

TEST_CASE("builtin catalogue") {
    CHECK_THROWS_WITH_AS(builtin_initial_data("square_patch"),
                         doctest::Contains("uniform_patch"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_initial_data("uniform_patch", {{"strngth", 2.0}}),
                    std::invalid_argument);
    const InitialVorticity g = builtin_initial_data("gaussian_patch");
    CHECK(g.density({6.5, 0.0}) == 0.0);
    CHECK(g.density({1.0, 0.0}) == doctest::Approx(std::exp(-1.0)));
    const InitialVorticity f = builtin_initial_data("flat_sheet");
    CHECK(f.kind == InitialVorticity::Kind::sheet_curve);
}
