#include "vortex/dynamics.hpp"

#include "vortex/parallel.hpp"

#include <cmath>
#include <sstream>

namespace vortex {

namespace {

constexpr double kBlowupLimit = 1e8;

// Pairwise velocity accumulation. Every target is accumulated by exactly one
// worker and sources are always visited in index order, so the result does
// not depend on the worker count. skip_diag excludes m == n (targets and
// sources must then be the same array).
void accumulate(std::span<const Vec2> targets, std::span<const Vec2> sources,
                std::span<const double> gamma, const SmoothingKernel& kernel, double eps,
                bool skip_diag, std::span<Vec2> out) {
    const std::size_t ns = sources.size();
    const bool blob = kernel.data().kind == detail::KernelKind::blob;
    const double eps2 = eps * eps;
    parallel_chunks(targets.size(), [&](std::size_t begin, std::size_t end) {
        if (blob) {
            for (std::size_t i = begin; i < end; ++i) {
                const Vec2 t = targets[i];
                double ux = 0.0, uy = 0.0;
                for (std::size_t m = 0; m < ns; ++m) {
                    if (skip_diag && m == i) continue;
                    const double dx = t.x - sources[m].x;
                    const double dy = t.y - sources[m].y;
                    const double w = gamma[m] / (dx * dx + dy * dy + eps2);
                    ux -= dy * w;
                    uy += dx * w;
                }
                out[i] = {ux / (2.0 * M_PI), uy / (2.0 * M_PI)};
            }
        } else {
            for (std::size_t i = begin; i < end; ++i) {
                const Vec2 t = targets[i];
                Vec2 u{0.0, 0.0};
                for (std::size_t m = 0; m < ns; ++m) {
                    if (skip_diag && m == i) continue;
                    u += gamma[m] * kernel.k_eps(t - sources[m], eps);
                }
                out[i] = u;
            }
        }
    });
}

void check_finite(const VortexSystem& sys) {
    for (std::size_t n = 0; n < sys.size(); ++n) {
        if (!sys.positions[n].finite() || !std::isfinite(sys.circulations[n]))
            throw std::invalid_argument("rhs: non-finite position or circulation at index " +
                                        std::to_string(n));
    }
}

struct Stepper {
    const SmoothingKernel& kernel;
    double eps;
    std::span<const double> gamma;
    std::vector<Vec2> k1, k2, k3, k4, work;

    explicit Stepper(const VortexSystem& sys)
        : kernel(sys.kernel), eps(sys.eps), gamma(sys.circulations) {
        const std::size_t n = sys.size();
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        work.resize(n);
    }

    void eval(const std::vector<Vec2>& x, std::span<Vec2> out) {
        accumulate(x, x, gamma, kernel, eps, true, out);
    }

    // Fills incr with the rk4 update for step h from state x.
    void rk4_increment(const std::vector<Vec2>& x, double h, std::vector<Vec2>& incr) {
        const std::size_t n = x.size();
        eval(x, k1);
        for (std::size_t i = 0; i < n; ++i) work[i] = x[i] + 0.5 * h * k1[i];
        eval(work, k2);
        for (std::size_t i = 0; i < n; ++i) work[i] = x[i] + 0.5 * h * k2[i];
        eval(work, k3);
        for (std::size_t i = 0; i < n; ++i) work[i] = x[i] + h * k3[i];
        eval(work, k4);
        for (std::size_t i = 0; i < n; ++i)
            incr[i] = (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    void euler_increment(const std::vector<Vec2>& x, double h, std::vector<Vec2>& incr) {
        eval(x, k1);
        for (std::size_t i = 0; i < x.size(); ++i) incr[i] = h * k1[i];
    }
};

// State with compensated (Kahan) accumulation across steps; keeps the
// integrator's roundoff growth flat over long runs.
struct CompensatedState {
    std::vector<Vec2> x;
    std::vector<Vec2> comp;

    explicit CompensatedState(std::vector<Vec2> init) : x(std::move(init)), comp(x.size()) {}

    void add(const std::vector<Vec2>& incr) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double yx = incr[i].x - comp[i].x;
            const double tx = x[i].x + yx;
            comp[i].x = (tx - x[i].x) - yx;
            x[i].x = tx;
            const double yy = incr[i].y - comp[i].y;
            const double ty = x[i].y + yy;
            comp[i].y = (ty - x[i].y) - yy;
            x[i].y = ty;
        }
    }
};

void guard_state(const std::vector<Vec2>& x, double t) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Vec2 p = x[i];
        if (!p.finite() || std::abs(p.x) > kBlowupLimit || std::abs(p.y) > kBlowupLimit) {
            std::ostringstream msg;
            msg << "integrate: state left the trusted range at t = " << t << " (vortex " << i
                << ", position " << p.x << ", " << p.y << ")";
            throw NumericalAbort(msg.str());
        }
    }
}

} // namespace

Scheme scheme_from_string(const std::string& s) {
    if (s == "euler") return Scheme::euler;
    if (s == "rk4") return Scheme::rk4;
    if (s == "rk45_adaptive") return Scheme::rk45_adaptive;
    throw std::invalid_argument("unknown scheme '" + s + "' (euler | rk4 | rk45_adaptive)");
}

std::string to_string(Scheme s) {
    switch (s) {
    case Scheme::euler: return "euler";
    case Scheme::rk4: return "rk4";
    case Scheme::rk45_adaptive: return "rk45_adaptive";
    }
    return "?";
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("IntegratorConfig: t_end must be positive");
    if (snapshot_stride < 1)
        throw std::invalid_argument("IntegratorConfig: snapshot_stride must be >= 1");
    if (scheme == Scheme::rk45_adaptive && (!(abs_tol > 0.0) || !(rel_tol > 0.0)))
        throw std::invalid_argument("IntegratorConfig: adaptive tolerances must be positive");
}

VortexSystem Trajectory::system_at(std::size_t i) const {
    VortexSystem sys;
    sys.positions = positions.at(i);
    sys.circulations = circulations;
    sys.eps = eps;
    sys.kernel = kernel;
    sys.time = times.at(i);
    sys.grid_eta = grid_eta;
    return sys;
}

std::vector<Vec2> rhs(const VortexSystem& sys) {
    sys.validate();
    check_finite(sys);
    std::vector<Vec2> out(sys.size());
    accumulate(sys.positions, sys.positions, sys.circulations, sys.kernel, sys.eps, true, out);
    return out;
}

std::vector<Vec2> velocity_field(const VortexSystem& sys, std::span<const Vec2> targets) {
    std::vector<Vec2> out(targets.size());
    accumulate(targets, sys.positions, sys.circulations, sys.kernel, sys.eps, false, out);
    return out;
}

std::vector<Vec2> velocity_field_unfiltered(const VortexSystem& sys, std::span<const Vec2> targets) {
    std::vector<Vec2> out(targets.size());
    const std::span<const Vec2> sources = sys.positions;
    const std::span<const double> gamma = sys.circulations;
    parallel_chunks(targets.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Vec2 t = targets[i];
            double ux = 0.0, uy = 0.0;
            for (std::size_t m = 0; m < sources.size(); ++m) {
                const double dx = t.x - sources[m].x;
                const double dy = t.y - sources[m].y;
                const double w = gamma[m] / (dx * dx + dy * dy);
                ux -= dy * w;
                uy += dx * w;
            }
            out[i] = {ux / (2.0 * M_PI), uy / (2.0 * M_PI)};
        }
    });
    return out;
}

Trajectory integrate(const VortexSystem& sys, const IntegratorConfig& cfg,
                     const std::vector<Observer>& observers) {
    cfg.validate();
    sys.validate();
    check_finite(sys);

    Trajectory traj;
    traj.circulations = sys.circulations;
    traj.eps = sys.eps;
    traj.kernel = sys.kernel;
    traj.grid_eta = sys.grid_eta;

    Stepper stepper(sys);
    CompensatedState state(sys.positions);
    std::vector<Vec2> incr(sys.size());

    const double t0 = sys.time;
    double t = t0;

    auto snapshot = [&](double time) {
        traj.times.push_back(time);
        traj.positions.push_back(state.x);
        if (!observers.empty()) {
            VortexSystem snap = sys;
            snap.positions = state.x;
            snap.time = time;
            for (const Observer& obs : observers) obs(snap, traj.snapshots() - 1);
        }
    };

    snapshot(t0);

    if (cfg.scheme == Scheme::rk45_adaptive) {
        // Step-doubled rk4: the error of a full step against two half steps
        // gives a fifth-order local estimate (Richardson factor 15).
        double h = cfg.dt;
        long accepted = 0;
        std::vector<Vec2> full(sys.size()), half(sys.size());
        std::vector<Vec2> xfull(sys.size()), xhalf(sys.size());
        const double t_end = t0 + cfg.t_end;
        while (t < t_end - 1e-14 * cfg.t_end) {
            h = std::min(h, t_end - t);
            stepper.rk4_increment(state.x, h, incr);
            for (std::size_t i = 0; i < incr.size(); ++i) xfull[i] = state.x[i] + incr[i];
            stepper.rk4_increment(state.x, 0.5 * h, incr);
            for (std::size_t i = 0; i < incr.size(); ++i) xhalf[i] = state.x[i] + incr[i];
            stepper.rk4_increment(xhalf, 0.5 * h, incr);
            for (std::size_t i = 0; i < incr.size(); ++i) xhalf[i] += incr[i];

            double err = 0.0;
            for (std::size_t i = 0; i < incr.size(); ++i) {
                const double scale_x =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(xhalf[i].x), std::abs(state.x[i].x));
                const double scale_y =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(xhalf[i].y), std::abs(state.x[i].y));
                err = std::max(err, std::abs(xhalf[i].x - xfull[i].x) / (15.0 * scale_x));
                err = std::max(err, std::abs(xhalf[i].y - xfull[i].y) / (15.0 * scale_y));
            }
            if (err <= 1.0) {
                // locally extrapolated update: the 15/16 split of the
                // step-doubling error makes the accepted state fifth order
                for (std::size_t i = 0; i < incr.size(); ++i)
                    incr[i] = xhalf[i] - state.x[i] + (xhalf[i] - xfull[i]) * (1.0 / 15.0);
                state.add(incr);
                t += h;
                guard_state(state.x, t);
                ++accepted;
                if (accepted % cfg.snapshot_stride == 0 && t < t_end - 1e-14 * cfg.t_end)
                    snapshot(t);
            }
            const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            if (!(h > 0.0) || !std::isfinite(h))
                throw NumericalAbort("integrate: adaptive step size collapsed");
        }
        snapshot(t_end);
        return traj;
    }

    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    for (long k = 1; k <= n_steps; ++k) {
        const double t_next = (k == n_steps) ? t0 + cfg.t_end : t0 + k * cfg.dt;
        const double h = t_next - t;
        if (cfg.scheme == Scheme::rk4)
            stepper.rk4_increment(state.x, h, incr);
        else
            stepper.euler_increment(state.x, h, incr);
        state.add(incr);
        t = t_next;
        guard_state(state.x, t);
        if (k == n_steps || k % cfg.snapshot_stride == 0) snapshot(t);
    }
    return traj;
}

} // namespace vortex
