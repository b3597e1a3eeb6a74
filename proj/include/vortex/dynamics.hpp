#pragma once

#include "vortex/system.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortex {

enum class Scheme { euler, rk4, rk45_adaptive };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

struct IntegratorConfig {
    Scheme scheme = Scheme::rk4;
    double dt = 1e-3;
    double t_end = 1.0;
    double abs_tol = 1e-9; // adaptive scheme only
    double rel_tol = 1e-9;
    int snapshot_stride = 1;

    void validate() const;
};

/// Raised when the state leaves the trusted numerical range (non-finite
/// values or positions beyond 1e8).
struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Positions per snapshot; circulations and the regularization never change
/// along a trajectory (vorticity is transported).
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<Vec2>> positions;
    std::vector<double> circulations;
    double eps = 1.0;
    SmoothingKernel kernel = make_blob_kernel();
    double grid_eta = 0.0;

    std::size_t snapshots() const { return times.size(); }
    VortexSystem system_at(std::size_t i) const;
};

/// dx_n/dt = sum_{m != n} Gamma_m K^eps(x_n - x_m). The self term is
/// excluded (it is an exact zero anyway).
std::vector<Vec2> rhs(const VortexSystem& sys);

/// Filtered velocity u^eps at arbitrary targets (full sum; the self term
/// vanishes at a vortex location).
std::vector<Vec2> velocity_field(const VortexSystem& sys, std::span<const Vec2> targets);

/// Unfiltered Biot-Savart sum; targets must avoid vortex locations.
std::vector<Vec2> velocity_field_unfiltered(const VortexSystem& sys, std::span<const Vec2> targets);

using Observer = std::function<void(const VortexSystem&, std::size_t snapshot_index)>;

/// Advance to t_end, snapshotting every snapshot_stride steps plus the
/// final state. Deterministic for identical inputs at any worker count.
Trajectory integrate(const VortexSystem& sys, const IntegratorConfig& cfg,
                     const std::vector<Observer>& observers = {});

} // namespace vortex
