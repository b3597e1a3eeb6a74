#include "vortex/convergence.hpp"

#include "vortex/io.hpp"
#include "vortex/kernels.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace vortex {

Grid Grid::cover(const Rect& rect, double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("Grid::cover: resolution must be positive");
    Grid g;
    g.origin = {rect.xmin, rect.ymin};
    g.resolution = resolution;
    g.nx = static_cast<int>(std::floor(rect.width() / resolution + 1e-9)) + 1;
    g.ny = static_cast<int>(std::floor(rect.height() / resolution + 1e-9)) + 1;
    return g;
}

VelocityField sample_velocity(const VortexSystem& sys, const Grid& grid) {
    std::vector<Vec2> targets;
    targets.reserve(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) targets.push_back(grid.point(i, j));
    VelocityField field;
    field.grid = grid;
    field.values = velocity_field(sys, targets);
    return field;
}

double l2_local_diff(const VelocityField& a, const VelocityField& b, double R) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("l2_local_diff: grids do not match");
    const double cell_area = a.grid.resolution * a.grid.resolution;
    const double r2 = R * R * (1.0 + 1e-12);
    double s = 0.0;
    std::size_t k = 0;
    for (int j = 0; j < a.grid.ny; ++j) {
        for (int i = 0; i < a.grid.nx; ++i, ++k) {
            if (a.grid.point(i, j).norm2() > r2) continue;
            s += (a.values[k] - b.values[k]).norm2();
        }
    }
    return std::sqrt(s * cell_area);
}

void ConvergenceConfig::validate() const {
    if (eps_list.empty()) throw std::invalid_argument("ConvergenceConfig: eps_list is empty");
    for (double e : eps_list)
        if (!(e > 0.0)) throw std::invalid_argument("ConvergenceConfig: eps values must be positive");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("ConvergenceConfig: eps_list must strictly decrease");
    if (!(grid_ratio > 0.0)) throw std::invalid_argument("ConvergenceConfig: grid_ratio must be positive");
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("ConvergenceConfig: dt and t_end must be positive");
    if (sample_grid.nx < 1 || sample_grid.ny < 1)
        throw std::invalid_argument("ConvergenceConfig: sample_grid is empty");
    if (!(local_radius > 0.0))
        throw std::invalid_argument("ConvergenceConfig: local_radius must be positive");
}

std::vector<double> frozen_kernel_limit(const VortexSystem& base, std::span<const double> eps_list,
                                        const Grid& grid, double R) {
    std::vector<Vec2> targets;
    std::vector<std::size_t> keep;
    targets.reserve(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) targets.push_back(grid.point(i, j));
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k].norm2() > R * R * (1.0 + 1e-12)) continue;
        bool clear = true;
        for (const Vec2& p : base.positions) {
            if ((targets[k] - p).norm2() < 1e-18) {
                clear = false;
                break;
            }
        }
        if (clear) keep.push_back(k);
    }

    const std::vector<Vec2> u0 = velocity_field_unfiltered(base, targets);
    const double cell_area = grid.resolution * grid.resolution;
    std::vector<double> out;
    out.reserve(eps_list.size());
    for (double eps : eps_list) {
        VortexSystem sys = base;
        sys.eps = eps;
        const std::vector<Vec2> ue = velocity_field(sys, targets);
        double s = 0.0;
        for (std::size_t k : keep) s += (ue[k] - u0[k]).norm2();
        out.push_back(std::sqrt(s * cell_area));
    }
    return out;
}

ConvergenceReport run_family(const ConvergenceConfig& cfg) {
    cfg.validate();
    ConvergenceReport report;
    report.cfg = cfg;

    const SmoothingKernel kernel = kernel_from_spec(cfg.kernel_spec);
    const InitialVorticity iv = builtin_initial_data(cfg.initial_name, cfg.initial_params);
    if (iv.kind != InitialVorticity::Kind::area_density)
        throw std::invalid_argument("run_family: the grid coupling eta = c*eps needs an area density");

    IntegratorConfig icfg;
    icfg.scheme = cfg.scheme;
    icfg.dt = cfg.dt;
    icfg.t_end = cfg.t_end;
    icfg.snapshot_stride = cfg.snapshot_stride;

    for (double eps : cfg.eps_list) {
        EpsRunResult run;
        run.eps = eps;
        run.eta = cfg.grid_ratio * eps;
        try {
            const VortexSystem initial = discretize_density(iv, run.eta, cfg.drop_tol, kernel, eps);
            run.n_vortices = initial.size();
            run.trajectory = integrate(initial, icfg);
            for (std::size_t i = 0; i < run.trajectory.snapshots(); ++i) {
                const VortexSystem snap = run.trajectory.system_at(i);
                run.diagnostics.push_back(conserved_quantities(snap));
                run.velocity.push_back(sample_velocity(snap, cfg.sample_grid));
            }
            run.vmf_final =
                vorticity_maximal(run.trajectory.system_at(run.trajectory.snapshots() - 1),
                                  cfg.vmf_radii);
        } catch (const NumericalAbort& abort) {
            report.failure = "eps = " + format_double(eps) + ": " + abort.what();
            report.runs.push_back(std::move(run));
            report.complete = false;
            return report;
        }
        report.runs.push_back(std::move(run));
    }

    report.snap_times = report.runs.front().trajectory.times;

    for (std::size_t j = 0; j + 1 < report.runs.size(); ++j) {
        std::vector<double> dists;
        dists.reserve(report.snap_times.size());
        for (std::size_t i = 0; i < report.snap_times.size(); ++i)
            dists.push_back(l2_local_diff(report.runs[j].velocity[i], report.runs[j + 1].velocity[i],
                                          cfg.local_radius));
        report.pairwise.push_back(std::move(dists));
    }

    // Empirical rate: least-squares slope of log(distance) against the log
    // of the geometric-mean eps of each pair.
    if (report.pairwise.size() >= 2) {
        std::vector<double> logeps;
        for (std::size_t j = 0; j + 1 < cfg.eps_list.size(); ++j)
            logeps.push_back(0.5 * (std::log(cfg.eps_list[j]) + std::log(cfg.eps_list[j + 1])));
        for (std::size_t i = 0; i < report.snap_times.size(); ++i) {
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            const double np = static_cast<double>(logeps.size());
            bool ok = true;
            for (std::size_t j = 0; j < logeps.size(); ++j) {
                const double d = report.pairwise[j][i];
                if (!(d > 0.0)) {
                    ok = false;
                    break;
                }
                const double lx = logeps[j], ly = std::log(d);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            report.rates_per_time.push_back(
                ok ? (np * sxy - sx * sy) / (np * sxx - sx * sx)
                   : std::numeric_limits<double>::quiet_NaN());
        }
    }

    report.frozen_kernel_limit = frozen_kernel_limit(
        report.runs.back().trajectory.system_at(0), cfg.eps_list, cfg.sample_grid, cfg.local_radius);

    report.complete = true;
    return report;
}

namespace {

void write_velocity_series(const EpsRunResult& run, const std::vector<double>& times,
                           const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << "# columns: t x y ux uy\n";
    for (std::size_t s = 0; s < run.velocity.size(); ++s) {
        const std::string t = format_double(times[s]);
        const VelocityField& f = run.velocity[s];
        std::size_t k = 0;
        for (int j = 0; j < f.grid.ny; ++j) {
            for (int i = 0; i < f.grid.nx; ++i, ++k) {
                const Vec2 p = f.grid.point(i, j);
                out << t << ' ' << format_double(p.x) << ' ' << format_double(p.y) << ' '
                    << format_double(f.values[k].x) << ' ' << format_double(f.values[k].y) << "\n";
            }
        }
    }
}

} // namespace

void write_report(const ConvergenceReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    for (const EpsRunResult& run : report.runs) {
        if (run.trajectory.snapshots() == 0) continue; // aborted before the first state
        const std::string sub = dir + "/eps_" + format_double(run.eps);
        fs::create_directories(sub);
        write_trajectory(run.trajectory, sub + "/trajectory.txt");
        write_diagnostics_series(run.diagnostics, sub + "/diagnostics.txt");
        std::vector<DiagnosticsRecord> final_rec(1);
        final_rec[0].t = run.trajectory.times.back();
        final_rec[0].vmf_samples = run.vmf_final;
        write_vmf_series(final_rec, sub + "/vmf.txt");
        write_velocity_series(run, run.trajectory.times, sub + "/velocity.txt");
    }

    {
        std::ofstream out(dir + "/pairwise_distances.txt", std::ios::binary);
        out << "# columns: t eps_hi eps_lo l2_ball_diff\n";
        for (std::size_t j = 0; j < report.pairwise.size(); ++j) {
            for (std::size_t i = 0; i < report.snap_times.size(); ++i) {
                out << format_double(report.snap_times[i]) << ' '
                    << format_double(report.cfg.eps_list[j]) << ' '
                    << format_double(report.cfg.eps_list[j + 1]) << ' '
                    << format_double(report.pairwise[j][i]) << "\n";
            }
        }
    }

    {
        std::ofstream out(dir + "/summary.txt", std::ios::binary);
        out << "kernel = " << report.cfg.kernel_spec << "\n";
        out << "initial = " << report.cfg.initial_name << "\n";
        out << "grid_ratio = " << format_double(report.cfg.grid_ratio) << "\n";
        out << "t_end = " << format_double(report.cfg.t_end) << "\n";
        out << "dt = " << format_double(report.cfg.dt) << "\n";
        out << "local_radius = " << format_double(report.cfg.local_radius) << "\n";
        out << "complete = " << (report.complete ? "true" : "false") << "\n";
        if (!report.failure.empty()) out << "failure = " << report.failure << "\n";
        out << "eps_count = " << report.runs.size() << "\n";
        for (std::size_t j = 0; j < report.runs.size(); ++j) {
            out << "eps_" << j << " = " << format_double(report.runs[j].eps) << "\n";
            out << "eta_" << j << " = " << format_double(report.runs[j].eta) << "\n";
            out << "eta_over_eps_" << j << " = "
                << format_double(report.runs[j].eta / report.runs[j].eps) << "\n";
            out << "n_vortices_" << j << " = " << report.runs[j].n_vortices << "\n";
        }
        out << "time_count = " << report.snap_times.size() << "\n";
        for (std::size_t i = 0; i < report.snap_times.size(); ++i)
            out << "time_" << i << " = " << format_double(report.snap_times[i]) << "\n";
        for (std::size_t j = 0; j < report.pairwise.size(); ++j)
            for (std::size_t i = 0; i < report.snap_times.size(); ++i)
                out << "pair_" << j << "_time_" << i << " = "
                    << format_double(report.pairwise[j][i]) << "\n";
        for (std::size_t i = 0; i < report.rates_per_time.size(); ++i)
            out << "rate_time_" << i << " = " << format_double(report.rates_per_time[i]) << "\n";
        for (std::size_t j = 0; j < report.frozen_kernel_limit.size(); ++j)
            out << "frozen_limit_eps_" << j << " = "
                << format_double(report.frozen_kernel_limit[j]) << "\n";
    }
}

} // namespace vortex
