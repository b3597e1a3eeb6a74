#pragma once

#include "vortex/dynamics.hpp"
#include "vortex/system.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vortex {

struct DiagnosticsRecord {
    double t = 0.0;
    double total_circulation = 0.0; // Q = sum Gamma_n
    double second_moment = 0.0;     // M = sum Gamma_n |x_n|^2
    Vec2 centroid;                  // sum Gamma_n x_n
    double hamiltonian = 0.0;       // -sum_{m != n} Gamma_m Gamma_n G^eps(|x_m - x_n|)
    bool hamiltonian_valid = true;  // false when a coincident pair meets a singular G
    std::vector<std::pair<double, double>> vmf_samples; // (r, M(r))
};

/// Q, M, centroid and the pseudo-energy of the point-vortex configuration.
/// The Hamiltonian sums over distinct pairs only.
DiagnosticsRecord conserved_quantities(const VortexSystem& sys);

/// Discrete vorticity maximal function M(r) = sup over disc centers of the
/// circulation strictly inside radius r. Candidate centers are the vortex
/// positions plus the midpoints of the 50 closest pairs. Requires
/// nonnegative circulations.
std::vector<std::pair<double, double>> vorticity_maximal(const VortexSystem& sys,
                                                         std::span<const double> radii);

/// Exhaustive validation mode: candidate centers on a regular grid of the
/// given resolution covering the vortices inflated by the largest radius.
std::vector<std::pair<double, double>> vorticity_maximal_grid(const VortexSystem& sys,
                                                              std::span<const double> radii,
                                                              double resolution);

struct DecayBoundConfig {
    double margin = 1.5; // allowed growth of the fitted constant over time
};

struct DecayBoundReport {
    double c0 = 0.0; // smallest constant covering t = 0
    double margin = 1.5;
    double eps = 0.0;
    std::vector<double> radii;
    std::vector<double> excluded_radii;
    std::string note;
    double worst_ratio = 0.0; // max over (t, r) of M(r, t) / (c0 * shape(r))
    double worst_time = 0.0;
    double worst_radius = 0.0;
    bool pass = false;
};

/// Checks M(r, t) <= margin * c0 * [log(1/(2r + eps))]^(-1/2) along a
/// trajectory, with c0 fitted at t = 0. Radii outside (0, 1/4] or with
/// 2r + eps >= 1 are excluded and reported.
DecayBoundReport decay_bound_check(const Trajectory& traj, std::span<const double> radii,
                                   DecayBoundConfig policy = {});

/// Separable space-time test function psi(x, t) = tau(t) phi(x) with
/// closed-form gradients and an exact Hessian sup norm. tau vanishes (to
/// third order) at both ends of [0, t_end].
class TestFunction {
public:
    /// phi(x) = (1 - |x - c|^2 / R^2)^4 on the disc of radius R, zero outside.
    static TestFunction disc_bump(Vec2 center, double radius, double t_end);
    /// phi(x) = |x|^2 / 2 (not compactly supported; useful for the kernel
    /// perpendicularity identity).
    static TestFunction quadratic(double t_end);

    double value(Vec2 x, double t) const { return tau(t) * phi_(x); }
    Vec2 gradient(Vec2 x, double t) const { return tau(t) * grad_(x); }
    double time_derivative(Vec2 x, double t) const { return dtau(t) * phi_(x); }
    double hessian_sup(double t) const { return std::abs(tau(t)) * hess_sup_; }
    const std::string& id() const { return id_; }

    double tau(double t) const;
    double dtau(double t) const;

private:
    std::string id_;
    double t_end_ = 1.0;
    double hess_sup_ = 0.0;
    std::function<double(Vec2)> phi_;
    std::function<Vec2(Vec2)> grad_;
};

struct WeakResidualReport {
    std::string test_function_id;
    double w_linear = 0.0;    // W_L
    double w_nonlinear = 0.0; // W_NL^eps (filtered) or W_NL (unfiltered)
    double residual = 0.0;    // w_linear + w_nonlinear
    double quadrature_dt = 0.0;
};

/// Weak-form residual of a stored trajectory against psi. The linear term
/// is evaluated in transport form: the total derivative telescopes to the
/// (vanishing) endpoint values and the convective part uses centered
/// differences of the stored positions; the nonlinear term is the double
/// H_psi sum. Both time integrals use the trapezoid rule on the snapshots.
WeakResidualReport weak_residual(const Trajectory& traj, const TestFunction& psi, bool filtered);

} // namespace vortex
