#include "vortex/discretize.hpp"

#include "vortex/quadrature.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace vortex {

VortexSystem discretize_density(const InitialVorticity& iv, double eta, double drop_tol,
                                const SmoothingKernel& kernel, double eps) {
    if (iv.kind != InitialVorticity::Kind::area_density)
        throw std::invalid_argument("discretize_density: initial data is not an area density");
    if (!(eta > 0.0)) throw std::invalid_argument("discretize_density: eta must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("discretize_density: eps must be positive");

    const Rect& box = iv.support_box;
    if (eta > box.width() && eta > box.height())
        std::cerr << "discretize_density: warning: eta = " << eta
                  << " exceeds the support box; expect a single cell\n";

    // Cell (i, j) spans [i eta, (i+1) eta) x [j eta, (j+1) eta).
    const long i0 = static_cast<long>(std::floor(box.xmin / eta));
    const long i1 = static_cast<long>(std::ceil(box.xmax / eta));
    const long j0 = static_cast<long>(std::floor(box.ymin / eta));
    const long j1 = static_cast<long>(std::ceil(box.ymax / eta));

    VortexSystem sys;
    sys.kernel = kernel;
    sys.eps = eps;
    sys.grid_eta = eta;
    const double threshold = drop_tol * eta * eta;
    for (long j = j0; j < j1; ++j) {
        for (long i = i0; i < i1; ++i) {
            const Rect cell{i * eta, (i + 1) * eta, j * eta, (j + 1) * eta};
            const double gamma = tensor_gauss4(iv.density, cell);
            if (std::abs(gamma) < threshold) continue;
            sys.positions.push_back({(i + 0.5) * eta, (j + 0.5) * eta});
            sys.circulations.push_back(gamma);
        }
    }
    if (sys.positions.empty())
        throw std::invalid_argument("discretize_density: all cells dropped (empty discretization)");
    return sys;
}

VortexSystem discretize_sheet(const InitialVorticity& iv, int n_markers,
                              const SmoothingKernel& kernel, double eps) {
    if (iv.kind != InitialVorticity::Kind::sheet_curve)
        throw std::invalid_argument("discretize_sheet: initial data is not a sheet curve");
    if (n_markers < 2) throw std::invalid_argument("discretize_sheet: need at least 2 markers");
    if (!(eps > 0.0)) throw std::invalid_argument("discretize_sheet: eps must be positive");

    // Cumulative circulation on a fine parameter grid; the density may have
    // integrable endpoint singularities, so integrate segment by segment.
    const int ngrid = 4096;
    std::vector<double> cum(ngrid + 1, 0.0);
    QuadratureOptions qopts;
    qopts.abs_tol = 1e-12;
    for (int k = 0; k < ngrid; ++k) {
        const double a = static_cast<double>(k) / ngrid;
        const double b = static_cast<double>(k + 1) / ngrid;
        cum[k + 1] = cum[k] + adaptive_integrate(iv.gamma_density, a, b, qopts).value;
    }
    const double total = cum.back();
    if (!(total > 0.0))
        throw std::invalid_argument("discretize_sheet: sheet carries zero total circulation");

    VortexSystem sys;
    sys.kernel = kernel;
    sys.eps = eps;
    const double dgamma = total / n_markers;
    sys.positions.reserve(n_markers);
    sys.circulations.assign(n_markers, dgamma);
    for (int k = 0; k < n_markers; ++k) {
        const double target = (k + 0.5) * dgamma;
        // bracket on the grid, then bisect inside one segment
        std::size_t seg = static_cast<std::size_t>(
            std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
        seg = std::min<std::size_t>(std::max<std::size_t>(seg, 1), ngrid) - 1;
        double lo = static_cast<double>(seg) / ngrid;
        double hi = static_cast<double>(seg + 1) / ngrid;
        double clo = cum[seg];
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double cmid = clo + adaptive_integrate(iv.gamma_density, lo, mid, qopts).value;
            if (cmid < target) {
                lo = mid;
                clo = cmid;
            } else {
                hi = mid;
            }
        }
        sys.positions.push_back(iv.curve(0.5 * (lo + hi)));
    }
    return sys;
}

} // namespace vortex
