#pragma once

#include "vortex/bessel.hpp"
#include "vortex/interp.hpp"
#include "vortex/vec2.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace vortex {

/// Admissibility data for a smoothing function h: the integrability and
/// moment conditions required by the convergence theory, plus positivity.
struct AdmissibilityReport {
    double l1_mass = 0.0; // integral of h over the plane
    double w1_l1 = 0.0;   // integral of |x| h
    double w3_linf = 0.0; // sup of |x|^3 h
    bool positive = false;
    bool inconclusive = false; // quadrature failed to converge somewhere
    bool pass = false;
    std::string note;
};

namespace detail {

enum class KernelKind { blob, alpha, custom };

struct KernelData {
    std::string name;
    KernelKind kind = KernelKind::custom;
    bool singular_origin = false;
    bool g_finite_at_zero = true;
    double normalization = 1.0; // rescale applied so that the mass is 1

    // custom kernels only
    std::function<double(double)> h_raw;
    double scale = 1.0;
    CubicHermite pk_interp; // P_K against log r
    CubicHermite g_interp;  // G_r against log r
    double r_lo = 0.0, r_hi = 0.0;
    double pk_r_lo = 0.0;      // P_K at the first table node
    double beta = 2.0;         // local exponent of the cumulative mass near 0
    double tail_frac = 0.0;    // 1 - P_K(r_hi)
    double tail_p = 4.0;       // h ~ r^{-p} beyond the table
    double g_zero = 0.0;       // G_r(0) when finite
};

} // namespace detail

/// A radial smoothing function h together with the derived radial profiles:
/// the cumulative-mass velocity profile P_K and the Green profile G_r at
/// unit scale. Immutable after construction; safe to share across threads.
class SmoothingKernel {
public:
    const std::string& name() const { return data_->name; }
    bool has_origin_singularity() const { return data_->singular_origin; }
    bool g_finite_at_zero() const { return data_->g_finite_at_zero; }
    double normalization() const { return data_->normalization; }

    /// Radial profile of h at scale 1. Throws std::domain_error at r = 0
    /// for kernels singular at the origin.
    double h_radial(double r) const;

    /// P_K(r): the h-mass inside radius r. P_K(0) = 0, nondecreasing, -> 1.
    double pk(double r) const {
        switch (data_->kind) {
        case detail::KernelKind::blob: {
            const double r2 = r * r;
            return r2 / (r2 + 1.0);
        }
        case detail::KernelKind::alpha:
            if (r <= 0.0) return 0.0;
            if (r > 40.0) return 1.0; // r K1(r) below 1e-16
            return 1.0 - r * bessel_k1(r);
        case detail::KernelKind::custom:
            return pk_custom(r);
        }
        return 0.0;
    }

    /// Radial Green profile G_r at scale 1 (solves the 2D Poisson problem
    /// for h, matched to (1/2pi) log r in the far field).
    double g_radial(double r) const;

    /// Filtered Biot-Savart kernel K^eps(x) = K(x) P_K(|x|/eps).
    Vec2 k_eps(Vec2 x, double eps) const {
        const double r2 = x.norm2();
        if (data_->kind == detail::KernelKind::blob)
            return x.perp() * (1.0 / (2.0 * M_PI * (r2 + eps * eps)));
        if (r2 == 0.0) return {0.0, 0.0};
        return x.perp() * (pk(std::sqrt(r2) / eps) / (2.0 * M_PI * r2));
    }

    /// G^eps(r) = G_r(r/eps) + (1/2pi) log(eps).
    double g_eps(double r, double eps) const {
        if (data_->kind == detail::KernelKind::blob)
            return std::log(r * r + eps * eps) / (4.0 * M_PI);
        return g_radial(r / eps) + std::log(eps) / (2.0 * M_PI);
    }

    const detail::KernelData& data() const { return *data_; }

private:
    friend SmoothingKernel make_blob_kernel();
    friend SmoothingKernel make_alpha_kernel();
    friend SmoothingKernel make_custom_kernel(std::function<double(double)>, struct CustomKernelConfig);

    explicit SmoothingKernel(std::shared_ptr<const detail::KernelData> d) : data_(std::move(d)) {}

    double pk_custom(double r) const;

    std::shared_ptr<const detail::KernelData> data_;
};

struct CustomKernelConfig {
    std::string name = "custom";
    double abs_tol = 1e-12;       // per-interval quadrature tolerance
    double r_lo = 1e-4;           // first table node
    double r_hi = 200.0;          // last table node
    int nodes_per_decade = 128;
    double norm_tol = 1e-9;       // rescale when |mass - 1| exceeds this
};

/// The algebraically desingularized filter h(x) = 1/(pi (|x|^2+1)^2).
SmoothingKernel make_blob_kernel();

/// The Green-function filter of 1 - Delta, h(x) = K0(|x|)/(2 pi).
SmoothingKernel make_alpha_kernel();

/// Build a kernel from an arbitrary radial profile by adaptive quadrature.
/// The profile is rescaled to unit mass when needed (factor recorded in
/// normalization()). Throws std::invalid_argument for negative profiles,
/// zero mass, or a nonintegrable tail.
SmoothingKernel make_custom_kernel(std::function<double(double)> h_radial,
                                   CustomKernelConfig cfg = {});

Vec2 eval_K_eps(const SmoothingKernel& kernel, Vec2 x, double eps);
double eval_G_eps(const SmoothingKernel& kernel, double r, double eps);

AdmissibilityReport check_admissibility(const SmoothingKernel& kernel);

/// Kernel selection string: "blob" | "alpha" | "custom:<path>", where the
/// path names a two-column text table (r, h_r(r)).
SmoothingKernel kernel_from_spec(const std::string& spec);

} // namespace vortex
