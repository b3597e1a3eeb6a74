#include "vortex/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vortex {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // LF line endings everywhere
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

void write_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# trajectory\n";
    out << "# kernel = " << traj.kernel.name() << "\n";
    out << "# eps = " << format_double(traj.eps) << "\n";
    out << "# eta = " << format_double(traj.grid_eta) << "\n";
    out << "# columns: t n x y gamma\n";
    for (std::size_t i = 0; i < traj.snapshots(); ++i) {
        const std::string t = format_double(traj.times[i]);
        for (std::size_t m = 0; m < traj.circulations.size(); ++m) {
            out << t << ' ' << m << ' ' << format_double(traj.positions[i][m].x) << ' '
                << format_double(traj.positions[i][m].y) << ' '
                << format_double(traj.circulations[m]) << "\n";
        }
    }
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open trajectory '" + path + "'");
    Trajectory traj;
    std::string kernel_spec = "blob";
    bool have_eps = false;
    std::string line;
    std::vector<Vec2> current;
    std::vector<double> gammas;
    double current_t = 0.0;
    bool any = false;

    auto flush = [&]() {
        if (current.empty()) return;
        traj.times.push_back(current_t);
        traj.positions.push_back(current);
        if (traj.circulations.empty())
            traj.circulations = gammas;
        else if (traj.circulations != gammas)
            throw std::invalid_argument("trajectory '" + path +
                                        "': circulations differ between snapshots");
        current.clear();
        gammas.clear();
    };

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key, eq, value;
            if (hs >> key >> eq >> value && eq == "=") {
                if (key == "kernel") kernel_spec = value;
                if (key == "eps") {
                    traj.eps = std::stod(value);
                    have_eps = true;
                }
                if (key == "eta") traj.grid_eta = std::stod(value);
            }
            continue;
        }
        std::istringstream ls(line);
        double t, x, y, g;
        long idx;
        if (!(ls >> t >> idx >> x >> y >> g)) continue;
        any = true;
        if (!current.empty() && t != current_t) flush();
        current_t = t;
        current.push_back({x, y});
        gammas.push_back(g);
    }
    flush();
    if (!any) throw std::invalid_argument("trajectory '" + path + "' contains no data rows");
    if (!have_eps) throw std::invalid_argument("trajectory '" + path + "' is missing the eps header");
    traj.kernel = kernel_from_spec(kernel_spec);
    for (std::size_t i = 1; i < traj.snapshots(); ++i)
        if (!(traj.times[i] > traj.times[i - 1]))
            throw std::invalid_argument("trajectory '" + path + "': times must strictly increase");
    return traj;
}

void write_diagnostics_series(std::span<const DiagnosticsRecord> records, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# columns: t Q M cx cy H\n";
    for (const DiagnosticsRecord& r : records) {
        out << format_double(r.t) << ' ' << format_double(r.total_circulation) << ' '
            << format_double(r.second_moment) << ' ' << format_double(r.centroid.x) << ' '
            << format_double(r.centroid.y) << ' ' << format_double(r.hamiltonian) << "\n";
    }
}

void write_vmf_series(std::span<const DiagnosticsRecord> records, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# columns: t r M_r\n";
    for (const DiagnosticsRecord& rec : records) {
        const std::string t = format_double(rec.t);
        for (const auto& [r, m] : rec.vmf_samples)
            out << t << ' ' << format_double(r) << ' ' << format_double(m) << "\n";
    }
}

void write_weak_report(const WeakResidualReport& rep, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "test_function = " << rep.test_function_id << "\n";
    out << "w_linear = " << format_double(rep.w_linear) << "\n";
    out << "w_nonlinear = " << format_double(rep.w_nonlinear) << "\n";
    out << "residual = " << format_double(rep.residual) << "\n";
    out << "quadrature_dt = " << format_double(rep.quadrature_dt) << "\n";
}

void write_decay_report(const DecayBoundReport& rep, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "c0 = " << format_double(rep.c0) << "\n";
    out << "margin = " << format_double(rep.margin) << "\n";
    out << "eps = " << format_double(rep.eps) << "\n";
    out << "worst_ratio = " << format_double(rep.worst_ratio) << "\n";
    out << "worst_time = " << format_double(rep.worst_time) << "\n";
    out << "worst_radius = " << format_double(rep.worst_radius) << "\n";
    out << "pass = " << (rep.pass ? "true" : "false") << "\n";
    out << "radii =";
    for (double r : rep.radii) out << ' ' << format_double(r);
    out << "\n";
    out << "excluded_radii =";
    for (double r : rep.excluded_radii) out << ' ' << format_double(r);
    out << "\n";
    if (!rep.note.empty()) out << "note = " << rep.note << "\n";
}

} // namespace vortex
