#include "vortex/kernels.hpp"

#include "vortex/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace vortex {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kEulerGamma = 0.5772156649015328606;

double blob_h(double r) { return 1.0 / (M_PI * (r * r + 1.0) * (r * r + 1.0)); }

// Kahan-compensated running sum.
struct CompensatedSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace

double SmoothingKernel::h_radial(double r) const {
    if (r < 0.0) throw std::domain_error("h_radial: radius must be nonnegative");
    switch (data_->kind) {
    case detail::KernelKind::blob:
        return blob_h(r);
    case detail::KernelKind::alpha:
        if (r == 0.0) throw std::domain_error("h_radial: the alpha profile is singular at r = 0");
        return bessel_k0(r) / kTwoPi;
    case detail::KernelKind::custom:
        if (r == 0.0 && data_->singular_origin)
            throw std::domain_error("h_radial: profile is singular at r = 0");
        return data_->h_raw(r) * data_->scale;
    }
    return 0.0;
}

double SmoothingKernel::pk_custom(double r) const {
    const detail::KernelData& d = *data_;
    if (r <= 0.0) return 0.0;
    if (r < d.r_lo) return d.pk_r_lo * std::pow(r / d.r_lo, d.beta);
    if (r > d.r_hi) {
        if (d.tail_frac <= 0.0) return 1.0;
        const double t = d.tail_frac * std::pow(r / d.r_hi, 2.0 - d.tail_p);
        return std::min(1.0, 1.0 - t);
    }
    return d.pk_interp(std::log(r));
}

double SmoothingKernel::g_radial(double r) const {
    if (r < 0.0) throw std::domain_error("g_radial: radius must be nonnegative");
    const detail::KernelData& d = *data_;
    switch (d.kind) {
    case detail::KernelKind::blob:
        return std::log(r * r + 1.0) / (2.0 * kTwoPi);
    case detail::KernelKind::alpha:
        // G_r(r) = (log r + K0(r)) / 2pi, finite at the origin.
        if (r == 0.0) return (std::log(2.0) - kEulerGamma) / kTwoPi;
        if (r > 40.0) return std::log(r) / kTwoPi;
        return (std::log(r) + bessel_k0(r)) / kTwoPi;
    case detail::KernelKind::custom:
        if (r == 0.0) {
            if (!d.g_finite_at_zero)
                throw std::domain_error("g_radial: Green profile diverges at r = 0");
            return d.g_zero;
        }
        if (r < d.r_lo) {
            if (!d.g_finite_at_zero)
                throw std::domain_error("g_radial: Green profile diverges below the table range");
            // G(r) = G(0) + P_K(r)/(2 pi beta) under the small-r power model.
            return d.g_zero + d.pk_r_lo * std::pow(r / d.r_lo, d.beta) / (kTwoPi * d.beta);
        }
        if (r > d.r_hi) {
            double corr = 0.0;
            if (d.tail_frac > 0.0)
                corr = d.tail_frac * std::pow(r / d.r_hi, 2.0 - d.tail_p) / (kTwoPi * (d.tail_p - 2.0));
            return std::log(r) / kTwoPi + corr;
        }
        return d.g_interp(std::log(r));
    }
    return 0.0;
}

SmoothingKernel make_blob_kernel() {
    auto d = std::make_shared<detail::KernelData>();
    d->name = "blob";
    d->kind = detail::KernelKind::blob;
    d->singular_origin = false;
    d->g_finite_at_zero = true;
    return SmoothingKernel(std::move(d));
}

SmoothingKernel make_alpha_kernel() {
    auto d = std::make_shared<detail::KernelData>();
    d->name = "alpha";
    d->kind = detail::KernelKind::alpha;
    d->singular_origin = true;
    d->g_finite_at_zero = true;
    return SmoothingKernel(std::move(d));
}

SmoothingKernel make_custom_kernel(std::function<double(double)> h_radial, CustomKernelConfig cfg) {
    if (!h_radial) throw std::invalid_argument("make_custom_kernel: missing profile");
    auto d = std::make_shared<detail::KernelData>();
    d->name = cfg.name;
    d->kind = detail::KernelKind::custom;
    d->h_raw = h_radial;

    // Table nodes, exactly uniform in log r (the slope stencils want it).
    const double u_lo = std::log(cfg.r_lo), u_hi = std::log(cfg.r_hi);
    const int n_nodes = static_cast<int>(std::ceil((u_hi - u_lo) / std::log(10.0) *
                                                   cfg.nodes_per_decade)) + 1;
    std::vector<double> radii(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
        radii[i] = std::exp(u_lo + (u_hi - u_lo) * i / (n_nodes - 1));
    radii.front() = cfg.r_lo;
    radii.back() = cfg.r_hi;
    d->r_lo = radii.front();
    d->r_hi = radii.back();

    // Positivity and origin behaviour. A profile still growing between
    // r = 1e-6 and r = 1e-9 is treated as singular (a continuous profile is
    // flat to O(r) at these scales).
    {
        const double v9 = h_radial(1e-9), v6 = h_radial(1e-6);
        if (!std::isfinite(v9)) {
            d->singular_origin = true;
        } else {
            if (v9 < 0.0 || v6 < 0.0)
                throw std::invalid_argument("make_custom_kernel: profile takes negative values");
            if (v9 > v6 * (1.0 + 1e-3) + 1e-300) d->singular_origin = true;
        }
    }
    for (double r : radii) {
        const double v = h_radial(r);
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("make_custom_kernel: profile must be finite and nonnegative for r > 0");
    }

    // Cumulative mass m(r) = 2 pi int_0^r s h(s) ds on the table nodes.
    auto mass_integrand = [&](double s) { return kTwoPi * s * h_radial(s); };
    QuadratureOptions qopts;
    qopts.abs_tol = cfg.abs_tol;
    CompensatedSum mass;
    std::vector<double> cum(radii.size());
    {
        const QuadratureResult head = adaptive_integrate(mass_integrand, 0.0, radii.front(), qopts);
        mass.add(head.value);
        cum[0] = mass.s;
    }
    for (std::size_t i = 1; i < radii.size(); ++i) {
        const QuadratureResult seg = adaptive_integrate(mass_integrand, radii[i - 1], radii[i], qopts);
        mass.add(seg.value);
        cum[i] = mass.s;
    }

    // Tail beyond the table: dyadic quadrature panels out to r_far, then a
    // local power law h ~ a r^{-p} for the remainder.
    const double r_far = std::max(1e4, 4.0 * d->r_hi);
    double tail = 0.0;
    d->tail_p = 4.0;
    {
        CompensatedSum far_mass;
        double lo = d->r_hi;
        while (lo < r_far) {
            const double hi = std::min(2.0 * lo, r_far);
            far_mass.add(adaptive_integrate(mass_integrand, lo, hi, qopts).value);
            lo = hi;
        }
        const double hF = h_radial(r_far);
        const double hF2 = h_radial(0.5 * r_far);
        if (hF > 0.0) {
            if (hF2 <= 0.0)
                throw std::invalid_argument(
                    "make_custom_kernel: profile not decaying near the table edge");
            const double p_far = std::log(hF2 / hF) / std::log(2.0);
            if (p_far <= 2.05)
                throw std::invalid_argument(
                    "make_custom_kernel: cumulative mass diverges (tail too heavy)");
            far_mass.add(kTwoPi * hF * r_far * r_far / (p_far - 2.0));
        }
        tail = far_mass.s;
        // shape exponent for P_K beyond the table
        const double hR = h_radial(d->r_hi);
        const double hR2 = h_radial(0.5 * d->r_hi);
        if (hR > 0.0 && hR2 > 0.0) {
            d->tail_p = std::log(hR2 / hR) / std::log(2.0);
            if (d->tail_p <= 2.05)
                throw std::invalid_argument(
                    "make_custom_kernel: cumulative mass diverges (tail too heavy)");
        }
    }

    const double total = cum.back() + tail;
    if (!(total > 1e-12)) throw std::invalid_argument("make_custom_kernel: profile has zero mass");
    d->scale = 1.0 / total;
    d->normalization = (std::abs(total - 1.0) > cfg.norm_tol) ? d->scale : 1.0;

    // P_K interpolant on log r.
    std::vector<double> logr(radii.size()), pk(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        logr[i] = std::log(radii[i]);
        pk[i] = std::min(1.0, cum[i] / total);
    }
    d->pk_interp = CubicHermite::monotone(logr, pk);
    d->pk_r_lo = pk.front();
    d->tail_frac = std::max(0.0, 1.0 - pk.back());

    // Local exponent of the cumulative mass near zero; decides whether the
    // Green profile stays finite at the origin.
    {
        const double m0 = cum[0] / total, m1 = cum[1] / total;
        if (m0 > 0.0 && m1 > m0)
            d->beta = std::log(m1 / m0) / std::log(radii[1] / radii[0]);
        else
            d->beta = 2.0;
        d->beta = std::clamp(d->beta, 1e-3, 4.0);
        d->g_finite_at_zero = d->beta >= 0.05;
    }

    // Green profile: G(r) = (1/2pi) log r + corr(r) with
    // corr(r) = int_r^inf (1 - P_K(s)) / (2 pi s) ds >= 0, which matches
    // G'(r) = P_K(r)/(2 pi r) and the far-field (1/2pi) log r.
    std::vector<double> g(radii.size());
    double corr = d->tail_frac > 0.0 ? d->tail_frac / (kTwoPi * (d->tail_p - 2.0)) : 0.0;
    g.back() = std::log(radii.back()) / kTwoPi + corr;
    const SmoothingKernel probe(d); // P_K is fully defined already
    for (std::size_t i = radii.size() - 1; i-- > 0;) {
        auto integrand = [&](double s) { return (1.0 - probe.pk(s)) / (kTwoPi * s); };
        corr += adaptive_integrate(integrand, radii[i], radii[i + 1], qopts).value;
        g[i] = std::log(radii[i]) / kTwoPi + corr;
    }
    d->g_interp = CubicHermite::monotone(logr, g);
    if (d->g_finite_at_zero) d->g_zero = g.front() - d->pk_r_lo / (kTwoPi * d->beta);

    return SmoothingKernel(std::move(d));
}

Vec2 eval_K_eps(const SmoothingKernel& kernel, Vec2 x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eval_K_eps: eps must be positive");
    return kernel.k_eps(x, eps);
}

double eval_G_eps(const SmoothingKernel& kernel, double r, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eval_G_eps: eps must be positive");
    if (r < 0.0) throw std::invalid_argument("eval_G_eps: r must be nonnegative");
    return kernel.g_eps(r, eps);
}

namespace {

// Integral of `integrand` over (0, inf) by dyadic adaptive panels plus a
// power-law tail. Returns infinity when the tail fails to decay fast enough.
struct MomentResult {
    double value = 0.0;
    bool converged = true;
};

MomentResult radial_moment(const std::function<double(double)>& integrand, double r_top) {
    QuadratureOptions qopts;
    qopts.abs_tol = 1e-13;
    CompensatedSum total;
    bool all_converged = true;

    const QuadratureResult head = adaptive_integrate(integrand, 0.0, 1e-6, qopts);
    all_converged &= head.converged;
    total.add(head.value);

    double lo = 1e-6;
    double last_panel = 0.0, prev_panel = 0.0;
    while (lo < r_top) {
        const double hi = std::min(2.0 * lo, r_top);
        const QuadratureResult seg = adaptive_integrate(integrand, lo, hi, qopts);
        all_converged &= seg.converged;
        total.add(seg.value);
        prev_panel = last_panel;
        last_panel = seg.value;
        lo = hi;
    }

    MomentResult out;
    out.converged = all_converged;
    const double gR = integrand(r_top);
    if (gR > 0.0) {
        const double gR2 = integrand(0.5 * r_top);
        if (gR2 <= 0.0) {
            out.converged = false;
            out.value = total.s;
            return out;
        }
        const double q = std::log(gR2 / gR) / std::log(2.0);
        if (q <= 1.05) {
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        total.add(gR * r_top / (q - 1.0));
    } else if (last_panel > 1e-9 && prev_panel > 0.0 && last_panel / prev_panel > 0.7) {
        // Panels stopped decaying and no usable tail fit.
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = total.s;
    return out;
}

} // namespace

AdmissibilityReport check_admissibility(const SmoothingKernel& kernel) {
    AdmissibilityReport rep;
    const double r_top = 1e4;

    rep.positive = true;
    bool any_positive = false;
    for (int i = 0; i <= 400; ++i) {
        const double r = 1e-8 * std::pow(r_top / 1e-8, i / 400.0);
        const double v = kernel.h_radial(r);
        if (v < 0.0) rep.positive = false;
        if (v > 0.0) any_positive = true;
    }
    if (!any_positive) rep.positive = false;

    const MomentResult m0 =
        radial_moment([&](double s) { return kTwoPi * s * kernel.h_radial(s); }, r_top);
    const MomentResult m1 =
        radial_moment([&](double s) { return kTwoPi * s * s * kernel.h_radial(s); }, r_top);
    rep.l1_mass = m0.value;
    rep.w1_l1 = m1.value;

    // sup of r^3 h over a log grid, refined by golden-section search.
    double best_r = 1e-8, best_v = 0.0;
    int best_i = 0;
    const int ngrid = 2400;
    for (int i = 0; i <= ngrid; ++i) {
        const double r = 1e-8 * std::pow(r_top / 1e-8, static_cast<double>(i) / ngrid);
        const double v = r * r * r * kernel.h_radial(r);
        if (v > best_v) {
            best_v = v;
            best_r = r;
            best_i = i;
        }
    }
    auto w3 = [&](double r) { return r * r * r * kernel.h_radial(r); };
    if (best_i == ngrid && best_v > w3(best_r / 1.01) * (1.0 + 1e-9)) {
        rep.w3_linf = std::numeric_limits<double>::infinity();
    } else if (best_i == 0 || best_i == ngrid) {
        rep.w3_linf = best_v;
    } else {
        double a = 1e-8 * std::pow(r_top / 1e-8, static_cast<double>(best_i - 1) / ngrid);
        double b = 1e-8 * std::pow(r_top / 1e-8, static_cast<double>(best_i + 1) / ngrid);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = w3(x1), f2 = w3(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = w3(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = w3(x1);
            }
        }
        rep.w3_linf = std::max(f1, f2);
    }

    rep.inconclusive = !(m0.converged && m1.converged);
    if (rep.inconclusive) rep.note = "quadrature did not converge";
    rep.pass = std::isfinite(rep.l1_mass) && std::isfinite(rep.w1_l1) &&
               std::isfinite(rep.w3_linf) && rep.positive && !rep.inconclusive;
    return rep;
}

SmoothingKernel kernel_from_spec(const std::string& spec) {
    if (spec == "blob") return make_blob_kernel();
    if (spec == "alpha") return make_alpha_kernel();
    if (spec.rfind("custom:", 0) == 0) {
        const std::string path = spec.substr(7);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("kernel_from_spec: cannot open table '" + path + "'");
        std::vector<double> r, h;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double rv, hv;
            if (ls >> rv >> hv) {
                r.push_back(rv);
                h.push_back(hv);
            }
        }
        if (r.size() < 2)
            throw std::invalid_argument("kernel_from_spec: table '" + path + "' needs >= 2 rows");
        for (std::size_t i = 1; i < r.size(); ++i)
            if (!(r[i] > r[i - 1]))
                throw std::invalid_argument("kernel_from_spec: radii must increase in '" + path + "'");
        auto interp = std::make_shared<CubicHermite>(CubicHermite::pchip(r, h));
        const double r_last = r.back(), h_last = h.back();
        auto profile = [interp, r_last, h_last](double s) {
            if (s >= r_last) {
                if (h_last <= 0.0) return 0.0;
                // hold the table's edge decay as an r^-4 power law
                const double t = r_last / s;
                return h_last * t * t * t * t;
            }
            return std::max(0.0, (*interp)(s));
        };
        CustomKernelConfig cfg;
        cfg.name = spec;
        return make_custom_kernel(profile, cfg);
    }
    throw std::invalid_argument("unknown kernel '" + spec + "' (expected blob | alpha | custom:<path>)");
}

} // namespace vortex
