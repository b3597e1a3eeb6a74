#pragma once

#include "vortex/diagnostics.hpp"
#include "vortex/discretize.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/initial_data.hpp"

#include <span>
#include <string>
#include <vector>

namespace vortex {

struct Grid {
    Vec2 origin;
    double resolution = 0.1;
    int nx = 0;
    int ny = 0;

    Vec2 point(int i, int j) const {
        return {origin.x + i * resolution, origin.y + j * resolution};
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    bool operator==(const Grid& o) const = default;

    static Grid cover(const Rect& rect, double resolution);
};

struct VelocityField {
    Grid grid;
    std::vector<Vec2> values; // row major, j * nx + i
};

VelocityField sample_velocity(const VortexSystem& sys, const Grid& grid);

/// Discrete L2 distance over grid points inside the disc of radius R:
/// sqrt(sum |a - b|^2 * cell_area). Grids must match exactly.
double l2_local_diff(const VelocityField& a, const VelocityField& b, double R);

struct ConvergenceConfig {
    std::string kernel_spec = "blob";
    std::string initial_name = "gaussian_patch";
    ParamMap initial_params;
    std::vector<double> eps_list; // strictly decreasing
    double grid_ratio = 1.0;      // eta = grid_ratio * eps
    double drop_tol = 0.0;
    Scheme scheme = Scheme::rk4;
    double dt = 0.02;
    double t_end = 1.0;
    int snapshot_stride = 10;
    Grid sample_grid;
    double local_radius = 2.0;
    std::vector<double> vmf_radii = {0.02, 0.05, 0.1, 0.2};

    void validate() const;
};

struct EpsRunResult {
    double eps = 0.0;
    double eta = 0.0;
    std::size_t n_vortices = 0;
    Trajectory trajectory;
    std::vector<DiagnosticsRecord> diagnostics;
    std::vector<VelocityField> velocity; // one per snapshot
    std::vector<std::pair<double, double>> vmf_final;
};

struct ConvergenceReport {
    ConvergenceConfig cfg;
    std::vector<EpsRunResult> runs;
    std::vector<double> snap_times;
    // pairwise[j][i]: ||u^{eps_j} - u^{eps_{j+1}}||_{L2(B_R)} at snap_times[i]
    std::vector<std::vector<double>> pairwise;
    std::vector<double> rates_per_time; // log-log slope across the pairs
    // || u^eps - u^0 ||_{L2(B_R)} on the finest frozen initial configuration
    std::vector<double> frozen_kernel_limit;
    bool complete = false;
    std::string failure;
};

/// One simulation per eps with eta = grid_ratio * eps on the shared initial
/// density; velocity fields sampled on the common grid at the common
/// snapshot times; successive pairwise distances and fitted rates.
ConvergenceReport run_family(const ConvergenceConfig& cfg);

/// ||u^eps - u^0||_{L2(B_R)} on frozen positions for each eps; grid points
/// within 1e-9 of a vortex are excluded from both fields.
std::vector<double> frozen_kernel_limit(const VortexSystem& base, std::span<const double> eps_list,
                                        const Grid& grid, double R);

/// Emit the report as a directory: per-eps trajectory/diagnostics/vmf/
/// velocity files, a pairwise distance table and a key-value summary.
void write_report(const ConvergenceReport& report, const std::string& dir);

} // namespace vortex
