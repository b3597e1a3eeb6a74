#include "vortex/diagnostics.hpp"

#include "vortex/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace vortex {

namespace {

double kahan_sum(std::span<const double> values) {
    double s = 0.0, c = 0.0;
    for (double v : values) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

void require_nonnegative(const VortexSystem& sys, const char* who) {
    for (double g : sys.circulations)
        if (g < 0.0)
            throw std::invalid_argument(std::string(who) +
                                        ": signed circulations are not admissible here; the decay "
                                        "estimate assumes a distinguished sign");
}

double maximal_over_centers(std::span<const Vec2> centers, std::span<const Vec2> positions,
                            std::span<const double> gamma, double r) {
    const double r2 = r * r;
    double best = 0.0;
    for (const Vec2& c : centers) {
        double s = 0.0;
        for (std::size_t n = 0; n < positions.size(); ++n) {
            const double dx = positions[n].x - c.x;
            const double dy = positions[n].y - c.y;
            if (dx * dx + dy * dy < r2) s += gamma[n];
        }
        best = std::max(best, s);
    }
    return best;
}

} // namespace

DiagnosticsRecord conserved_quantities(const VortexSystem& sys) {
    sys.validate();
    DiagnosticsRecord rec;
    rec.t = sys.time;
    rec.total_circulation = kahan_sum(sys.circulations);

    double m = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t n = 0; n < sys.size(); ++n) {
        m += sys.circulations[n] * sys.positions[n].norm2();
        cx += sys.circulations[n] * sys.positions[n].x;
        cy += sys.circulations[n] * sys.positions[n].y;
    }
    rec.second_moment = m;
    rec.centroid = {cx, cy};

    const std::size_t n = sys.size();
    const bool g_finite = sys.kernel.g_finite_at_zero();
    std::vector<double> partial(n, 0.0);
    std::vector<char> bad(n, 0);
    parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double s = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = (sys.positions[i] - sys.positions[j]).norm();
                if (d == 0.0 && !g_finite) {
                    bad[i] = 1;
                    continue;
                }
                s += sys.circulations[i] * sys.circulations[j] * sys.kernel.g_eps(d, sys.eps);
            }
            partial[i] = s;
        }
    });
    rec.hamiltonian_valid = std::find(bad.begin(), bad.end(), 1) == bad.end();
    if (rec.hamiltonian_valid) {
        double h = 0.0;
        for (std::size_t i = 0; i < n; ++i) h += partial[i];
        rec.hamiltonian = -2.0 * h;
    } else {
        rec.hamiltonian = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

std::vector<std::pair<double, double>> vorticity_maximal(const VortexSystem& sys,
                                                         std::span<const double> radii) {
    sys.validate();
    require_nonnegative(sys, "vorticity_maximal");

    // Base candidates: every vortex plus the midpoints of the 50 closest
    // pairs. For the sup to match an exhaustive center search, the optimal
    // disc can be slid until two atoms sit on its boundary, so per radius we
    // also add the intersections of the radius-r circles around each close
    // pair whenever that stays affordable.
    std::vector<Vec2> base = sys.positions;
    const std::size_t n = sys.size();
    constexpr std::size_t max_midpoints = 50;
    if (n >= 2) {
        using Entry = std::pair<double, std::pair<std::size_t, std::size_t>>;
        std::priority_queue<Entry> worst_of_best; // max-heap of the smallest distances
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d2 = (sys.positions[i] - sys.positions[j]).norm2();
                if (worst_of_best.size() < max_midpoints) {
                    worst_of_best.push({d2, {i, j}});
                } else if (d2 < worst_of_best.top().first) {
                    worst_of_best.pop();
                    worst_of_best.push({d2, {i, j}});
                }
            }
        }
        while (!worst_of_best.empty()) {
            const auto [d2, ij] = worst_of_best.top();
            worst_of_best.pop();
            base.push_back(0.5 * (sys.positions[ij.first] + sys.positions[ij.second]));
        }
    }

    constexpr std::size_t pair_budget = 50000;
    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    for (double r : radii) {
        std::vector<Vec2> centers = base;
        const double reach2 = 4.0 * r * r;
        std::size_t qualifying = 0;
        for (std::size_t i = 0; i < n && qualifying <= pair_budget; ++i)
            for (std::size_t j = i + 1; j < n && qualifying <= pair_budget; ++j)
                if ((sys.positions[i] - sys.positions[j]).norm2() < reach2) ++qualifying;
        if (qualifying <= pair_budget) {
            const double r_in = r * (1.0 - 1e-9); // keep boundary atoms strictly inside
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const Vec2 diff = sys.positions[j] - sys.positions[i];
                    const double d2 = diff.norm2();
                    if (d2 >= reach2 || d2 == 0.0) continue;
                    const double h2 = r_in * r_in - 0.25 * d2;
                    if (h2 <= 0.0) continue;
                    const Vec2 mid = 0.5 * (sys.positions[i] + sys.positions[j]);
                    const Vec2 offset = diff.perp() * (std::sqrt(h2 / d2));
                    centers.push_back(mid + offset);
                    centers.push_back(mid - offset);
                }
            }
        }
        out.emplace_back(r, maximal_over_centers(centers, sys.positions, sys.circulations, r));
    }
    return out;
}

std::vector<std::pair<double, double>> vorticity_maximal_grid(const VortexSystem& sys,
                                                              std::span<const double> radii,
                                                              double resolution) {
    sys.validate();
    require_nonnegative(sys, "vorticity_maximal_grid");
    if (!(resolution > 0.0))
        throw std::invalid_argument("vorticity_maximal_grid: resolution must be positive");

    double r_max = 0.0;
    for (double r : radii) r_max = std::max(r_max, r);
    double xmin = sys.positions[0].x, xmax = xmin, ymin = sys.positions[0].y, ymax = ymin;
    for (const Vec2& p : sys.positions) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    xmin -= r_max;
    xmax += r_max;
    ymin -= r_max;
    ymax += r_max;
    const long nx = static_cast<long>(std::floor((xmax - xmin) / resolution)) + 1;
    const long ny = static_cast<long>(std::floor((ymax - ymin) / resolution)) + 1;

    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    for (double r : radii) {
        const double r2 = r * r;
        std::vector<double> row_best(static_cast<std::size_t>(ny), 0.0);
        parallel_chunks(static_cast<std::size_t>(ny), [&](std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j) {
                double best = 0.0;
                const double cy = ymin + static_cast<double>(j) * resolution;
                for (long i = 0; i < nx; ++i) {
                    const double cx = xmin + static_cast<double>(i) * resolution;
                    double s = 0.0;
                    for (std::size_t m = 0; m < sys.size(); ++m) {
                        const double dx = sys.positions[m].x - cx;
                        const double dy = sys.positions[m].y - cy;
                        if (dx * dx + dy * dy < r2) s += sys.circulations[m];
                    }
                    best = std::max(best, s);
                }
                row_best[j] = best;
            }
        });
        double best = 0.0;
        for (double b : row_best) best = std::max(best, b);
        out.emplace_back(r, best);
    }
    return out;
}

DecayBoundReport decay_bound_check(const Trajectory& traj, std::span<const double> radii,
                                   DecayBoundConfig policy) {
    if (traj.snapshots() == 0) throw std::invalid_argument("decay_bound_check: empty trajectory");
    DecayBoundReport rep;
    rep.margin = policy.margin;
    rep.eps = traj.eps;

    for (double r : radii) {
        if (!(r > 0.0) || r > 0.25) {
            rep.excluded_radii.push_back(r);
            rep.note += "radius outside (0, 1/4] excluded; ";
            continue;
        }
        if (2.0 * r + traj.eps >= 1.0) {
            rep.excluded_radii.push_back(r);
            rep.note += "radius with 2r + eps >= 1 excluded (bound vacuous); ";
            continue;
        }
        rep.radii.push_back(r);
    }
    if (rep.radii.empty()) {
        rep.note += "no usable radii";
        return rep;
    }

    auto shape = [&](double r) { return 1.0 / std::sqrt(std::log(1.0 / (2.0 * r + traj.eps))); };

    const auto at0 = vorticity_maximal(traj.system_at(0), rep.radii);
    rep.c0 = 0.0;
    for (const auto& [r, m] : at0) rep.c0 = std::max(rep.c0, m / shape(r));
    if (rep.c0 == 0.0) {
        rep.note += "zero circulation at t = 0";
        return rep;
    }

    rep.worst_ratio = 0.0;
    for (std::size_t i = 0; i < traj.snapshots(); ++i) {
        const auto vmf = vorticity_maximal(traj.system_at(i), rep.radii);
        for (const auto& [r, m] : vmf) {
            const double ratio = m / (rep.c0 * shape(r));
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_time = traj.times[i];
                rep.worst_radius = r;
            }
        }
    }
    rep.pass = rep.worst_ratio <= rep.margin * (1.0 + 1e-12);
    return rep;
}

double TestFunction::tau(double t) const {
    if (t <= 0.0 || t >= t_end_) return 0.0;
    const double u = 4.0 * t * (t_end_ - t) / (t_end_ * t_end_);
    return u * u * u * u;
}

double TestFunction::dtau(double t) const {
    if (t <= 0.0 || t >= t_end_) return 0.0;
    const double u = 4.0 * t * (t_end_ - t) / (t_end_ * t_end_);
    const double du = 4.0 * (t_end_ - 2.0 * t) / (t_end_ * t_end_);
    return 4.0 * u * u * u * du;
}

TestFunction TestFunction::disc_bump(Vec2 center, double radius, double t_end) {
    if (!(radius > 0.0)) throw std::invalid_argument("disc_bump: radius must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("disc_bump: t_end must be positive");
    TestFunction f;
    f.id_ = "disc_bump";
    f.t_end_ = t_end;
    f.hess_sup_ = 8.0 / (radius * radius); // attained at the center
    const double r2 = radius * radius;
    f.phi_ = [center, r2](Vec2 x) {
        const double s = (x - center).norm2() / r2;
        if (s >= 1.0) return 0.0;
        const double q = 1.0 - s;
        return q * q * q * q;
    };
    f.grad_ = [center, r2](Vec2 x) {
        const double s = (x - center).norm2() / r2;
        if (s >= 1.0) return Vec2{0.0, 0.0};
        const double q = 1.0 - s;
        return (-8.0 * q * q * q / r2) * (x - center);
    };
    return f;
}

TestFunction TestFunction::quadratic(double t_end) {
    if (!(t_end > 0.0)) throw std::invalid_argument("quadratic: t_end must be positive");
    TestFunction f;
    f.id_ = "quadratic";
    f.t_end_ = t_end;
    f.hess_sup_ = 1.0;
    f.phi_ = [](Vec2 x) { return 0.5 * x.norm2(); };
    f.grad_ = [](Vec2 x) { return x; };
    return f;
}

WeakResidualReport weak_residual(const Trajectory& traj, const TestFunction& psi, bool filtered) {
    const std::size_t nt = traj.snapshots();
    if (nt < 2) throw std::invalid_argument("weak_residual: need at least two snapshots");
    const std::size_t n = traj.circulations.size();

    for (std::size_t snap : {std::size_t{0}, nt - 1}) {
        for (std::size_t m = 0; m < n; ++m) {
            if (std::abs(psi.value(traj.positions[snap][m], traj.times[snap])) > 1e-12)
                throw std::invalid_argument(
                    "weak_residual: psi does not vanish at the time endpoints");
        }
    }

    WeakResidualReport rep;
    rep.test_function_id = psi.id();
    rep.quadrature_dt = (traj.times.back() - traj.times.front()) / static_cast<double>(nt - 1);

    // Linear term in transport form. The total-derivative part telescopes to
    // the endpoint values of psi (zero here); the convective part uses
    // centered differences of the stored marker positions.
    std::vector<double> f_conv(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == nt ? i : i + 1;
        const double dt = traj.times[hi] - traj.times[lo];
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const Vec2 v = (traj.positions[hi][m] - traj.positions[lo][m]) * (1.0 / dt);
            s += traj.circulations[m] * psi.gradient(traj.positions[i][m], traj.times[i]).dot(v);
        }
        f_conv[i] = s;
    }
    double telescope = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        telescope += traj.circulations[m] *
                     (psi.value(traj.positions[nt - 1][m], traj.times[nt - 1]) -
                      psi.value(traj.positions[0][m], traj.times[0]));
    }
    double w_l = telescope;
    for (std::size_t i = 0; i + 1 < nt; ++i)
        w_l -= 0.5 * (traj.times[i + 1] - traj.times[i]) * (f_conv[i] + f_conv[i + 1]);
    rep.w_linear = w_l;

    // Nonlinear term: double sum of the symmetrized kernel against psi.
    // Filtered kernels include the (zero) diagonal; the unfiltered kernel is
    // undefined there and the diagonal is excluded.
    const SmoothingKernel& kernel = traj.kernel;
    std::vector<double> g_nl(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = traj.times[i];
        const std::span<const Vec2> x = traj.positions[i];
        const double bound = psi.hessian_sup(t) / (4.0 * M_PI) * (1.0 + 1e-9) + 1e-300;
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const Vec2 dx = x[a] - x[b];
                const Vec2 k = filtered ? kernel.k_eps(dx, traj.eps)
                                        : dx.perp() * (1.0 / (2.0 * M_PI * dx.norm2()));
                const double h =
                    0.5 * k.dot(psi.gradient(x[a], t) - psi.gradient(x[b], t));
                if (std::abs(h) > bound)
                    throw std::logic_error("weak_residual: H_psi exceeded its Hessian bound");
                s += 2.0 * traj.circulations[a] * traj.circulations[b] * h;
            }
        }
        g_nl[i] = s;
    }
    double w_nl = 0.0;
    for (std::size_t i = 0; i + 1 < nt; ++i)
        w_nl += 0.5 * (traj.times[i + 1] - traj.times[i]) * (g_nl[i] + g_nl[i + 1]);
    rep.w_nonlinear = w_nl;

    rep.residual = rep.w_linear + rep.w_nonlinear;
    return rep;
}

} // namespace vortex
