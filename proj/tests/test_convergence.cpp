#include "vortex/convergence.hpp"

#include "oracles.hpp"
#include "vortex/io.hpp"
#include "vortex/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vortex;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ConvergenceConfig small_family() {
    ConvergenceConfig cfg;
    cfg.kernel_spec = "blob";
    cfg.initial_name = "uniform_patch";
    cfg.eps_list = {0.4, 0.2, 0.1};
    cfg.grid_ratio = 1.0;
    cfg.dt = 0.05;
    cfg.t_end = 0.5;
    cfg.snapshot_stride = 5;
    cfg.sample_grid = Grid::cover({-2.2, 2.2, -2.2, 2.2}, 0.1);
    cfg.local_radius = 2.0;
    cfg.vmf_radii = {0.05, 0.1, 0.2};
    return cfg;
}

} // namespace

TEST_CASE("l2_local_diff basics") {
    const Grid grid = Grid::cover({-2.0, 2.0, -2.0, 2.0}, 0.1);
    VelocityField a{grid, std::vector<Vec2>(grid.size(), {0.0, 0.0})};
    VelocityField b = a;
    CHECK(l2_local_diff(a, b, 1.5) == 0.0);

    for (Vec2& v : b.values) v = {0.0, 1.0};
    std::size_t inside = 0, k = 0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i, ++k)
            if (grid.point(i, j).norm2() <= 1.5 * 1.5 * (1.0 + 1e-12)) ++inside;
    const double discrete_area = static_cast<double>(inside) * 0.1 * 0.1;
    CHECK(l2_local_diff(a, b, 1.5) == doctest::Approx(std::sqrt(discrete_area)).epsilon(1e-14));

    VelocityField c{Grid::cover({-2.0, 2.0, -2.0, 2.0}, 0.2), {}};
    c.values.resize(c.grid.size());
    CHECK_THROWS_AS(l2_local_diff(a, c, 1.0), std::invalid_argument);
}

TEST_CASE("single-vortex field difference matches radial quadrature") {
    // || u^{0.4} - u^{0.2} ||_{L2(B_R)} for one unit vortex at the origin:
    // the squared integrand is radial, so a 1D quadrature gives the truth
    VortexSystem sys;
    sys.positions = {{0.0, 0.0}};
    sys.circulations = {1.0};
    sys.kernel = make_blob_kernel();
    const double e1 = 0.4, e2 = 0.2, R = 2.0;

    const Grid grid = Grid::cover({-2.1, 2.1, -2.1, 2.1}, 0.02);
    VortexSystem s1 = sys;
    s1.eps = e1;
    VortexSystem s2 = sys;
    s2.eps = e2;
    const double grid_diff = l2_local_diff(sample_velocity(s1, grid), sample_velocity(s2, grid), R);

    QuadratureOptions opts;
    opts.abs_tol = 1e-14;
    const double radial =
        adaptive_integrate(
            [&](double r) {
                const double f1 = r / (2.0 * M_PI * (r * r + e1 * e1));
                const double f2 = r / (2.0 * M_PI * (r * r + e2 * e2));
                return 2.0 * M_PI * r * (f1 - f2) * (f1 - f2);
            },
            0.0, R, opts)
            .value;
    CHECK(std::abs(grid_diff - std::sqrt(radial)) <= 1e-3);
}

TEST_CASE("frozen-positions kernel limit decreases with eps") {
    VortexSystem sys;
    sys.kernel = make_blob_kernel();
    sys.eps = 1.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            sys.positions.push_back({0.203 * i - 0.4, 0.203 * j - 0.4});
            sys.circulations.push_back(0.04);
        }
    const Grid grid = Grid::cover({-1.6, 1.6, -1.6, 1.6}, 0.05);
    const std::vector<double> eps_list = {0.4, 0.2, 0.1, 0.05};
    const std::vector<double> dists = frozen_kernel_limit(sys, eps_list, grid, 1.5);
    REQUIRE(dists.size() == 4);
    for (std::size_t i = 1; i < dists.size(); ++i) CHECK(dists[i] < dists[i - 1]);
}

TEST_CASE("family run produces decreasing pairwise distances and coupled grids") {
    const ConvergenceConfig cfg = small_family();
    const ConvergenceReport rep = run_family(cfg);
    REQUIRE(rep.complete);
    REQUIRE(rep.runs.size() == 3);
    for (const EpsRunResult& run : rep.runs) {
        CHECK(run.eta / run.eps == doctest::Approx(cfg.grid_ratio));
        CHECK(run.trajectory.grid_eta == doctest::Approx(run.eta));
        CHECK(run.diagnostics.size() == rep.snap_times.size());
        CHECK(run.velocity.size() == rep.snap_times.size());
    }
    REQUIRE(rep.pairwise.size() == 2);
    for (std::size_t i = 0; i < rep.snap_times.size(); ++i)
        CHECK(rep.pairwise[1][i] < rep.pairwise[0][i]);
    REQUIRE(rep.frozen_kernel_limit.size() == 3);
    CHECK(rep.frozen_kernel_limit[2] < rep.frozen_kernel_limit[0]);
    CHECK(rep.rates_per_time.size() == rep.snap_times.size());
}

TEST_CASE("family of single-cell patches reduces to the closed-form kernel difference") {
    ConvergenceConfig cfg = small_family();
    cfg.initial_name = "uniform_patch";
    cfg.initial_params = {{"radius", 0.03}, {"center_x", 0.05}, {"center_y", 0.05}};
    cfg.dt = 0.05;
    cfg.t_end = 0.1;
    cfg.snapshot_stride = 1;
    const ConvergenceReport rep = run_family(cfg);
    REQUIRE(rep.complete);
    for (const EpsRunResult& run : rep.runs) REQUIRE(run.n_vortices == 1);

    // recompute the first pairwise distance from the closed-form fields of
    // the two single vortices (different cells, so different centers)
    for (std::size_t pair = 0; pair + 1 < rep.runs.size(); ++pair) {
        const EpsRunResult& a = rep.runs[pair];
        const EpsRunResult& b = rep.runs[pair + 1];
        VelocityField fa{cfg.sample_grid, {}}, fb{cfg.sample_grid, {}};
        for (int j = 0; j < cfg.sample_grid.ny; ++j) {
            for (int i = 0; i < cfg.sample_grid.nx; ++i) {
                const Vec2 p = cfg.sample_grid.point(i, j);
                fa.values.push_back(a.trajectory.circulations[0] *
                                    eval_K_eps(make_blob_kernel(),
                                               p - a.trajectory.positions[0][0], a.eps));
                fb.values.push_back(b.trajectory.circulations[0] *
                                    eval_K_eps(make_blob_kernel(),
                                               p - b.trajectory.positions[0][0], b.eps));
            }
        }
        const double expected = l2_local_diff(fa, fb, cfg.local_radius);
        CHECK(rep.pairwise[pair][0] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("a one-member family has no pairwise section") {
    ConvergenceConfig cfg = small_family();
    cfg.eps_list = {0.3};
    const ConvergenceReport rep = run_family(cfg);
    CHECK(rep.complete);
    CHECK(rep.runs.size() == 1);
    CHECK(rep.pairwise.empty());
    CHECK(rep.rates_per_time.empty());
}

TEST_CASE("config validation names the offending constraint") {
    ConvergenceConfig cfg = small_family();
    cfg.eps_list = {0.1, 0.2};
    CHECK_THROWS_WITH_AS(run_family(cfg), doctest::Contains("strictly decrease"),
                         std::invalid_argument);
    cfg = small_family();
    cfg.grid_ratio = 0.0;
    CHECK_THROWS_AS(run_family(cfg), std::invalid_argument);
    cfg = small_family();
    cfg.initial_name = "flat_sheet";
    CHECK_THROWS_AS(run_family(cfg), std::invalid_argument);
}

TEST_CASE("report emission is deterministic") {
    namespace fs = std::filesystem;
    ConvergenceConfig cfg = small_family();
    cfg.eps_list = {0.4, 0.2};
    const fs::path dir_a = "report_det_a", dir_b = "report_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    write_report(run_family(cfg), dir_a.string());
    write_report(run_family(cfg), dir_b.string());

    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), dir_a);
        CHECK(slurp(entry.path()) == slurp(dir_b / rel));
        ++compared;
    }
    CHECK(compared >= 4 * 2 + 2); // four files per eps run plus the tables
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
