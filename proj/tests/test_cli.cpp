#include "vortex/cli.hpp"

#include "vortex/config.hpp"
#include "vortex/diagnostics.hpp"
#include "vortex/initial_data.hpp"
#include "vortex/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vortex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VORTEX_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const std::string kPairConfig =
    "[run]\n"
    "kernel = blob\n"
    "eps = 1.0\n"
    "[initial]\n"
    "type = builtin\n"
    "name = flat_sheet\n"
    "half_length = 1\n"
    "density = 1\n"
    "n_markers = 2\n"
    "[integrate]\n"
    "scheme = rk4\n"
    "dt = 0.01\n"
    "t_end = 0.1\n"
    "snapshot_stride = 2\n";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("config parser essentials") {
    const Config cfg = Config::parse_string("# comment\n[a]\nx = 1.5\nlist = 1, 2,3\ns = hi\n[b]\nn = 7\n");
    CHECK(cfg.get_double("a", "x") == 1.5);
    CHECK(cfg.get_int("b", "n") == 7);
    CHECK(cfg.get_string("a", "s") == "hi");
    CHECK(cfg.get_double_list("a", "list") == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(cfg.get_double_or("a", "missing", 9.0) == 9.0);
    CHECK_THROWS_WITH_AS(cfg.get_double("a", "nope"), doctest::Contains("[a] nope"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(cfg.get_double("a", "s"), doctest::Contains("expected a number"),
                         std::invalid_argument);
    CHECK_THROWS_AS(Config::parse_string("key_without_section\n"), std::invalid_argument);
}

TEST_CASE("trajectory files round-trip bit-exactly") {
    VortexSystem sys;
    sys.positions = {{0.123456789012345, -2.0 / 3.0}, {1e-17, 5.5}};
    sys.circulations = {M_PI, 0.25};
    sys.eps = 0.37;
    sys.kernel = make_alpha_kernel();
    sys.grid_eta = 0.05;
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 0.3;
    cfg.snapshot_stride = 2;
    const Trajectory traj = integrate(sys, cfg);

    const std::string path = "roundtrip_traj.txt";
    write_trajectory(traj, path);
    const Trajectory back = read_trajectory(path);
    CHECK(back.kernel.name() == "alpha");
    CHECK(back.eps == traj.eps);
    CHECK(back.grid_eta == traj.grid_eta);
    REQUIRE(back.snapshots() == traj.snapshots());
    for (std::size_t s = 0; s < traj.snapshots(); ++s) {
        CHECK(back.times[s] == traj.times[s]);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            CHECK(back.positions[s][i].x == traj.positions[s][i].x);
            CHECK(back.positions[s][i].y == traj.positions[s][i].y);
        }
    }
    CHECK(back.circulations == traj.circulations);

    // writing the re-read trajectory reproduces the bytes
    const std::string path2 = "roundtrip_traj2.txt";
    write_trajectory(back, path2);
    CHECK(slurp(path) == slurp(path2));
    fs::remove(path);
    fs::remove(path2);
}

TEST_CASE("format_double is shortest round-trip") {
    for (double v : {0.1, 1.0 / 3.0, M_PI, 1e-300, 123456.789, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("simulate: two-marker sheet produces two rows per snapshot") {
    TempDir tmp("cli_sim_pair");
    spit(tmp.path / "config.txt", kPairConfig);
    const int rc = run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                           tmp.path.string());
    REQUIRE(rc == 0);
    const std::string traj = slurp(tmp.path / "trajectory.txt");
    std::size_t data_rows = 0, header_rows = 0;
    std::istringstream in(traj);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        (line[0] == '#' ? header_rows : data_rows)++;
    }
    // snapshots at steps 0, 2, 4, 6, 8, 10 -> 6 snapshots x 2 markers
    CHECK(data_rows == 12);
    CHECK(header_rows >= 4);
    CHECK(fs::exists(tmp.path / "diagnostics.txt"));
}

TEST_CASE("simulate: nonpositive eps exits 1 naming the field") {
    TempDir tmp("cli_sim_bad_eps");
    std::string cfg = kPairConfig;
    cfg.replace(cfg.find("eps = 1.0"), 9, "eps = 0.0");
    spit(tmp.path / "config.txt", cfg);
    const int rc = run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                           tmp.path.string());
    CHECK(rc == 1);
    CHECK(slurp("cli_stderr.txt").find("eps") != std::string::npos);
}

TEST_CASE("simulate: unknown config key exits 1") {
    TempDir tmp("cli_sim_unknown");
    spit(tmp.path / "config.txt", kPairConfig + "dtt = 0.1\n");
    const int rc = run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                           tmp.path.string());
    CHECK(rc == 1);
    CHECK(slurp("cli_stderr.txt").find("dtt") != std::string::npos);
}

TEST_CASE("simulate: blow-up exits 2") {
    TempDir tmp("cli_sim_blowup");
    spit(tmp.path / "config.txt",
         "[run]\nkernel = blob\neps = 1e-6\n"
         "[initial]\nname = flat_sheet\nhalf_length = 1e-8\ndensity = 1e17\nn_markers = 2\n"
         "[integrate]\ndt = 1.0\nt_end = 5.0\n");
    const int rc = run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                           tmp.path.string());
    CHECK(rc == 2);
}

TEST_CASE("diagnose reproduces the in-run diagnostics bit-exactly") {
    TempDir tmp("cli_diag_roundtrip");
    spit(tmp.path / "config.txt", kPairConfig);
    REQUIRE(run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                    tmp.path.string()) == 0);
    fs::create_directories(tmp.path / "re");
    REQUIRE(run_cli("diagnose --trajectory " + (tmp.path / "trajectory.txt").string() +
                    " --select conserved --out " + (tmp.path / "re").string()) == 0);
    CHECK(slurp(tmp.path / "diagnostics.txt") == slurp(tmp.path / "re" / "diagnostics.txt"));
}

TEST_CASE("diagnose: missing trajectory exits 1; full selection writes reports") {
    TempDir tmp("cli_diag_missing");
    CHECK(run_cli("diagnose --trajectory no_such_file.txt --out " + tmp.path.string()) == 1);

    spit(tmp.path / "config.txt",
         "[run]\nkernel = blob\neps = 0.15\n"
         "[initial]\nname = flat_sheet\nn_markers = 24\n"
         "[integrate]\ndt = 0.01\nt_end = 0.4\nsnapshot_stride = 10\n");
    REQUIRE(run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                    tmp.path.string()) == 0);
    REQUIRE(run_cli("diagnose --trajectory " + (tmp.path / "trajectory.txt").string() +
                    " --select conserved,vmf,decay,weak --radii 0.02,0.05,0.1 --out " +
                    (tmp.path / "re").string()) == 0);
    CHECK(fs::exists(tmp.path / "re" / "diagnostics.txt"));
    CHECK(fs::exists(tmp.path / "re" / "vmf.txt"));
    CHECK(fs::exists(tmp.path / "re" / "decay_report.txt"));
    CHECK(fs::exists(tmp.path / "re" / "weak_report.txt"));

    // vmf rows are monotone in r at fixed t
    std::istringstream in(slurp(tmp.path / "re" / "vmf.txt"));
    std::string line;
    double last_t = -1.0, last_m = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double t, r, m;
        ls >> t >> r >> m;
        if (t != last_t) {
            last_t = t;
            last_m = 0.0;
        }
        CHECK(m >= last_m);
        last_m = m;
    }
}

TEST_CASE("kernel-check passes the built-ins and fails a degenerate table") {
    CHECK(run_cli("kernel-check blob") == 0);
    const std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("pass = true") != std::string::npos);
    CHECK(run_cli("kernel-check alpha") == 0);

    spit("zero_table.txt", "0.1 0\n1 0\n10 0\n");
    CHECK(run_cli("kernel-check custom:zero_table.txt") == 1);
    fs::remove("zero_table.txt");
}

TEST_CASE("simulate output is byte-identical across worker counts") {
    TempDir tmp("cli_workers");
    spit(tmp.path / "config.txt", kPairConfig);
    REQUIRE(run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                    (tmp.path / "w1").string() + " --workers 1") == 0);
    REQUIRE(run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                    (tmp.path / "w4").string() + " --workers 4") == 0);
    CHECK(slurp(tmp.path / "w1" / "trajectory.txt") == slurp(tmp.path / "w4" / "trajectory.txt"));
    CHECK(slurp(tmp.path / "w1" / "diagnostics.txt") == slurp(tmp.path / "w4" / "diagnostics.txt"));
}

TEST_CASE("gridded density files feed the simulate pipeline") {
    TempDir tmp("cli_density_file");
    {
        std::ofstream out(tmp.path / "density.txt");
        out << "# x y q\n";
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 20; ++j) {
                const double x = -1.0 + 0.1 * i, y = -1.0 + 0.1 * j;
                out << x << " " << y << " " << std::exp(-(x * x + y * y) * 4.0) << "\n";
            }
    }
    const InitialVorticity iv = density_from_file((tmp.path / "density.txt").string());
    CHECK(iv.kind == InitialVorticity::Kind::area_density);
    CHECK(iv.density({0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(iv.density({1.5, 0.0}) == 0.0);

    spit(tmp.path / "config.txt",
         "[run]\nkernel = blob\neps = 0.2\n"
         "[initial]\ntype = density_file\nfile = " + (tmp.path / "density.txt").string() +
             "\neta = 0.2\n"
             "[integrate]\ndt = 0.05\nt_end = 0.1\n");
    CHECK(run_cli("simulate --config " + (tmp.path / "config.txt").string() + " --out " +
                  tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "trajectory.txt"));
}

TEST_CASE("converge subcommand emits a complete report directory") {
    TempDir tmp("cli_converge");
    spit(tmp.path / "config.txt",
         "[family]\nkernel = blob\neps_list = 0.4, 0.2\ngrid_ratio = 1\n"
         "dt = 0.05\nt_end = 0.2\nsnapshot_stride = 2\n"
         "[initial]\nname = uniform_patch\nradius = 1\n"
         "[sample]\nxmin = -2\nxmax = 2\nymin = -2\nymax = 2\nresolution = 0.1\n"
         "local_radius = 1.5\n");
    REQUIRE(run_cli("converge --config " + (tmp.path / "config.txt").string() + " --out " +
                    (tmp.path / "rep").string()) == 0);
    CHECK(fs::exists(tmp.path / "rep" / "summary.txt"));
    CHECK(fs::exists(tmp.path / "rep" / "pairwise_distances.txt"));
    CHECK(fs::exists(tmp.path / "rep" / "eps_0.4" / "trajectory.txt"));
    CHECK(fs::exists(tmp.path / "rep" / "eps_0.2" / "velocity.txt"));
    const std::string summary = slurp(tmp.path / "rep" / "summary.txt");
    CHECK(summary.find("complete = true") != std::string::npos);
    CHECK(summary.find("eta_over_eps_0 = 1") != std::string::npos);
}
