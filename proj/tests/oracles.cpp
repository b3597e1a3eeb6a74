#include "oracles.hpp"

#include "vortex/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace oracles {

namespace {

double bessel_k_integral(int n, double x) {
    // exp(-x) * int_0^T exp(-x (cosh t - 1)) cosh(n t) dt with T far past the
    // point where the integrand underflows.
    const double T = std::acosh(std::max((x + 45.0) / x, 2.0)) + 1.0;
    const int panels = 4000;
    const double h = T / panels;
    auto f = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(n * t); };
    double s = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = i * h;
        s += (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h)) * (h / 6.0);
    }
    return s * std::exp(-x);
}

} // namespace

double bessel_k0(double x) { return bessel_k_integral(0, x); }
double bessel_k1(double x) { return bessel_k_integral(1, x); }

double pk_quadrature(const std::function<double(double)>& h_radial, double r) {
    vortex::QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    return vortex::adaptive_integrate(
               [&](double s) { return 2.0 * M_PI * s * h_radial(s); }, 0.0, r, opts)
        .value;
}

double vmf_grid(std::span<const vortex::Vec2> positions, std::span<const double> gamma, double r,
                double resolution) {
    double xmin = positions[0].x, xmax = xmin, ymin = positions[0].y, ymax = ymin;
    for (const vortex::Vec2& p : positions) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    xmin -= r;
    xmax += r;
    ymin -= r;
    ymax += r;
    const double r2 = r * r;
    double best = 0.0;
    const long nx = static_cast<long>(std::floor((xmax - xmin) / resolution)) + 1;
    const long ny = static_cast<long>(std::floor((ymax - ymin) / resolution)) + 1;
    for (long j = 0; j < ny; ++j) {
        const double cy = ymin + j * resolution;
        for (long i = 0; i < nx; ++i) {
            const double cx = xmin + i * resolution;
            double s = 0.0;
            for (std::size_t m = 0; m < positions.size(); ++m) {
                const double dx = positions[m].x - cx;
                const double dy = positions[m].y - cy;
                if (dx * dx + dy * dy < r2) s += gamma[m];
            }
            best = std::max(best, s);
        }
    }
    return best;
}

double corotation_omega(double gamma, double d, double eps) {
    // Each vortex sees speed gamma/(2 pi d) * P_K(d/eps) on a circle of
    // radius d/2 about the centroid.
    const double s = d / eps;
    const double pk = s * s / (s * s + 1.0);
    const double speed = gamma * pk / (2.0 * M_PI * d);
    return speed / (0.5 * d);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracles
