#include "vortex/cli.hpp"

#include "vortex/config.hpp"
#include "vortex/convergence.hpp"
#include "vortex/diagnostics.hpp"
#include "vortex/discretize.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/io.hpp"
#include "vortex/parallel.hpp"
#include "vortex/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

namespace vortex::cli {

namespace {

namespace fs = std::filesystem;

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const NumericalAbort& abort) {
        std::cerr << "numerical abort: " << abort.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}

void check_section_keys(const Config& cfg, const std::string& section,
                        const std::set<std::string>& known) {
    for (const std::string& key : cfg.keys(section))
        if (!known.count(key))
            throw std::invalid_argument("config: unknown field [" + section + "] " + key);
}

double required_positive(const Config& cfg, const std::string& section, const std::string& key) {
    const double v = cfg.get_double(section, key);
    if (!(v > 0.0))
        throw std::invalid_argument("config: field [" + section + "] " + key + " must be positive");
    return v;
}

VortexSystem build_system(const Config& cfg, const SmoothingKernel& kernel, double eps) {
    const std::string type = cfg.get_string_or("initial", "type", "builtin");
    const std::set<std::string> control = {"type", "name", "file", "eta", "n_markers", "drop_tol"};

    InitialVorticity iv;
    if (type == "builtin") {
        ParamMap params;
        for (const std::string& key : cfg.keys("initial"))
            if (!control.count(key)) params[key] = cfg.get_double("initial", key);
        iv = builtin_initial_data(cfg.get_string("initial", "name"), params);
    } else if (type == "density_file") {
        check_section_keys(cfg, "initial", control);
        iv = density_from_file(cfg.get_string("initial", "file"));
    } else {
        throw std::invalid_argument(
            "config: field [initial] type must be 'builtin' or 'density_file'");
    }

    if (iv.kind == InitialVorticity::Kind::area_density) {
        const double eta = required_positive(cfg, "initial", "eta");
        const double drop_tol = cfg.get_double_or("initial", "drop_tol", 0.0);
        return discretize_density(iv, eta, drop_tol, kernel, eps);
    }
    const long n_markers = cfg.get_int("initial", "n_markers");
    if (n_markers < 2)
        throw std::invalid_argument("config: field [initial] n_markers must be >= 2");
    return discretize_sheet(iv, static_cast<int>(n_markers), kernel, eps);
}

IntegratorConfig build_integrator(const Config& cfg) {
    check_section_keys(cfg, "integrate",
                       {"scheme", "dt", "t_end", "snapshot_stride", "abs_tol", "rel_tol"});
    IntegratorConfig icfg;
    icfg.scheme = scheme_from_string(cfg.get_string_or("integrate", "scheme", "rk4"));
    icfg.dt = required_positive(cfg, "integrate", "dt");
    icfg.t_end = required_positive(cfg, "integrate", "t_end");
    icfg.snapshot_stride = static_cast<int>(cfg.get_int_or("integrate", "snapshot_stride", 1));
    if (icfg.snapshot_stride < 1)
        throw std::invalid_argument("config: field [integrate] snapshot_stride must be >= 1");
    icfg.abs_tol = cfg.get_double_or("integrate", "abs_tol", 1e-9);
    icfg.rel_tol = cfg.get_double_or("integrate", "rel_tol", 1e-9);
    return icfg;
}

} // namespace

int cmd_simulate(const Options& opts) {
    return run_guarded([&]() -> int {
        const Config cfg = Config::parse_file(opts.config_path);
        check_section_keys(cfg, "run", {"kernel", "eps", "workers", "seed"});
        set_worker_count(opts.workers > 0 ? opts.workers
                                          : static_cast<int>(cfg.get_int_or("run", "workers", 1)));

        const SmoothingKernel kernel = kernel_from_spec(cfg.get_string("run", "kernel"));
        const double eps = required_positive(cfg, "run", "eps");

        const AdmissibilityReport adm = check_admissibility(kernel);
        if (!adm.pass) {
            std::cerr << "error: kernel '" << kernel.name() << "' fails admissibility ("
                      << (adm.note.empty() ? "moment conditions violated" : adm.note) << ")\n";
            return 1;
        }

        VortexSystem system = build_system(cfg, kernel, eps);
        const IntegratorConfig icfg = build_integrator(cfg);

        check_section_keys(cfg, "output", {"trajectory", "diagnostics", "vmf", "vmf_radii"});
        fs::create_directories(opts.out_dir);
        const std::string traj_path =
            opts.out_dir + "/" + cfg.get_string_or("output", "trajectory", "trajectory.txt");
        const std::string diag_path =
            opts.out_dir + "/" + cfg.get_string_or("output", "diagnostics", "diagnostics.txt");
        std::vector<double> vmf_radii;
        if (cfg.has("output", "vmf_radii")) vmf_radii = cfg.get_double_list("output", "vmf_radii");

        std::vector<DiagnosticsRecord> records;
        const Observer collect = [&](const VortexSystem& snap, std::size_t) {
            DiagnosticsRecord rec = conserved_quantities(snap);
            if (!vmf_radii.empty()) rec.vmf_samples = vorticity_maximal(snap, vmf_radii);
            records.push_back(std::move(rec));
        };

        const Trajectory traj = integrate(system, icfg, {collect});
        write_trajectory(traj, traj_path);
        write_diagnostics_series(records, diag_path);
        if (!vmf_radii.empty())
            write_vmf_series(records,
                             opts.out_dir + "/" + cfg.get_string_or("output", "vmf", "vmf.txt"));
        return 0;
    });
}

int cmd_converge(const Options& opts) {
    return run_guarded([&]() -> int {
        const Config cfg = Config::parse_file(opts.config_path);
        check_section_keys(cfg, "family",
                           {"kernel", "eps_list", "grid_ratio", "drop_tol", "scheme", "dt", "t_end",
                            "snapshot_stride", "vmf_radii", "workers"});
        check_section_keys(cfg, "sample",
                           {"xmin", "xmax", "ymin", "ymax", "resolution", "local_radius"});
        set_worker_count(opts.workers > 0
                             ? opts.workers
                             : static_cast<int>(cfg.get_int_or("family", "workers", 1)));

        ConvergenceConfig ccfg;
        ccfg.kernel_spec = cfg.get_string("family", "kernel");
        ccfg.initial_name = cfg.get_string("initial", "name");
        const std::set<std::string> control = {"type", "name"};
        for (const std::string& key : cfg.keys("initial"))
            if (!control.count(key)) ccfg.initial_params[key] = cfg.get_double("initial", key);
        ccfg.eps_list = cfg.get_double_list("family", "eps_list");
        ccfg.grid_ratio = cfg.get_double_or("family", "grid_ratio", 1.0);
        ccfg.drop_tol = cfg.get_double_or("family", "drop_tol", 0.0);
        ccfg.scheme = scheme_from_string(cfg.get_string_or("family", "scheme", "rk4"));
        ccfg.dt = required_positive(cfg, "family", "dt");
        ccfg.t_end = required_positive(cfg, "family", "t_end");
        ccfg.snapshot_stride = static_cast<int>(cfg.get_int_or("family", "snapshot_stride", 1));
        if (cfg.has("family", "vmf_radii"))
            ccfg.vmf_radii = cfg.get_double_list("family", "vmf_radii");

        const Rect rect{cfg.get_double("sample", "xmin"), cfg.get_double("sample", "xmax"),
                        cfg.get_double("sample", "ymin"), cfg.get_double("sample", "ymax")};
        ccfg.sample_grid = Grid::cover(rect, required_positive(cfg, "sample", "resolution"));
        ccfg.local_radius = required_positive(cfg, "sample", "local_radius");

        const ConvergenceReport report = run_family(ccfg);
        write_report(report, opts.out_dir);
        if (!report.complete) {
            std::cerr << "numerical abort: " << report.failure << " (partial report written)\n";
            return 2;
        }
        return 0;
    });
}

int cmd_kernel_check(const Options& opts) {
    return run_guarded([&]() -> int {
        set_worker_count(opts.workers > 0 ? opts.workers : 1);
        const SmoothingKernel kernel = kernel_from_spec(opts.kernel_spec);
        const AdmissibilityReport adm = check_admissibility(kernel);

        std::cout << "kernel = " << kernel.name() << "\n";
        std::cout << "l1_mass = " << format_double(adm.l1_mass) << "\n";
        std::cout << "w1_l1 = " << format_double(adm.w1_l1) << "\n";
        std::cout << "w3_linf = " << format_double(adm.w3_linf) << "\n";
        std::cout << "positive = " << (adm.positive ? "true" : "false") << "\n";
        std::cout << "normalization = " << format_double(kernel.normalization()) << "\n";
        if (!adm.note.empty()) std::cout << "note = " << adm.note << "\n";

        // P_K property suite: cumulative-mass quadrature at random radii,
        // monotonicity and bounds, kernel scale identity, antisymmetry.
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> radius(1e-3, 50.0);
        std::vector<double> radii(200);
        for (double& r : radii) r = radius(rng);
        std::sort(radii.begin(), radii.end());

        double worst_pk = 0.0;
        bool monotone = true, bounded = true;
        double prev = -1.0;
        QuadratureOptions qopts;
        qopts.abs_tol = 1e-12;
        for (double r : radii) {
            const double pk = kernel.pk(r);
            const double oracle =
                adaptive_integrate([&](double s) { return 2.0 * M_PI * s * kernel.h_radial(s); },
                                   0.0, r, qopts)
                    .value;
            worst_pk = std::max(worst_pk, std::abs(pk - oracle));
            if (pk < prev) monotone = false;
            if (pk < 0.0 || pk > 1.0 + 1e-12) bounded = false;
            prev = pk;
        }

        std::uniform_real_distribution<double> coord(-5.0, 5.0), scale(0.05, 4.0);
        double worst_scale = 0.0, worst_antisym = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vec2 x{coord(rng), coord(rng)};
            const double e = scale(rng);
            const Vec2 a = eval_K_eps(kernel, x, e);
            const Vec2 b = eval_K_eps(kernel, x * (1.0 / e), 1.0) * (1.0 / e);
            worst_scale = std::max(worst_scale, (a - b).norm());
            const Vec2 c = eval_K_eps(kernel, -x, e);
            worst_antisym = std::max(worst_antisym, (a + c).norm());
        }

        const bool pk_ok = worst_pk <= 1e-7 && monotone && bounded;
        const bool ident_ok = worst_scale <= 1e-12 && worst_antisym <= 1e-15;
        std::cout << "pk_quadrature_max_err = " << format_double(worst_pk) << "\n";
        std::cout << "pk_monotone = " << (monotone ? "true" : "false") << "\n";
        std::cout << "pk_bounded = " << (bounded ? "true" : "false") << "\n";
        std::cout << "scale_identity_max_err = " << format_double(worst_scale) << "\n";
        std::cout << "antisymmetry_max_err = " << format_double(worst_antisym) << "\n";
        const bool pass = adm.pass && pk_ok && ident_ok;
        std::cout << "pass = " << (pass ? "true" : "false") << "\n";
        return pass ? 0 : 1;
    });
}

int cmd_diagnose(const Options& opts) {
    return run_guarded([&]() -> int {
        set_worker_count(opts.workers > 0 ? opts.workers : 1);
        const Trajectory traj = read_trajectory(opts.trajectory_path);
        fs::create_directories(opts.out_dir);

        std::set<std::string> selected;
        {
            std::istringstream in(opts.select);
            std::string token;
            while (std::getline(in, token, ',')) {
                token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
                if (token.empty()) continue;
                if (token != "conserved" && token != "vmf" && token != "decay" && token != "weak")
                    throw std::invalid_argument("diagnose: unknown selection '" + token +
                                                "' (conserved | vmf | decay | weak)");
                selected.insert(token);
            }
        }
        if (selected.empty()) selected.insert("conserved");

        std::vector<DiagnosticsRecord> records;
        records.reserve(traj.snapshots());
        const bool want_vmf = selected.count("vmf") > 0;
        for (std::size_t i = 0; i < traj.snapshots(); ++i) {
            const VortexSystem snap = traj.system_at(i);
            DiagnosticsRecord rec = conserved_quantities(snap);
            if (want_vmf) rec.vmf_samples = vorticity_maximal(snap, opts.radii);
            records.push_back(std::move(rec));
        }
        if (selected.count("conserved"))
            write_diagnostics_series(records, opts.out_dir + "/diagnostics.txt");
        if (want_vmf) write_vmf_series(records, opts.out_dir + "/vmf.txt");
        if (selected.count("decay"))
            write_decay_report(decay_bound_check(traj, opts.radii),
                               opts.out_dir + "/decay_report.txt");
        if (selected.count("weak")) {
            // Auto-sized bump: centered on the initial circulation centroid,
            // wide enough to cover every stored position.
            const DiagnosticsRecord first = conserved_quantities(traj.system_at(0));
            const double q = first.total_circulation;
            const Vec2 center = q != 0.0 ? first.centroid * (1.0 / q) : Vec2{0.0, 0.0};
            double max_r2 = 0.0;
            for (const auto& snap : traj.positions)
                for (const Vec2& p : snap) max_r2 = std::max(max_r2, (p - center).norm2());
            const double t0 = traj.times.front();
            const double span = traj.times.back() - t0;
            TestFunction psi =
                TestFunction::disc_bump(center, 2.0 * std::sqrt(max_r2) + 1.0, span);
            Trajectory shifted = traj;
            for (double& t : shifted.times) t -= t0; // psi lives on [0, span]
            write_weak_report(weak_residual(shifted, psi, true),
                              opts.out_dir + "/weak_report.txt");
        }
        return 0;
    });
}

} // namespace vortex::cli
