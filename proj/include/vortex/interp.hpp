#pragma once

#include <cstddef>
#include <vector>

namespace vortex {

// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
// Monotone data yields a monotone interpolant. Outside the abscissa range
// the end values are held constant.
class CubicHermite {
public:
    CubicHermite() = default;
    static CubicHermite pchip(std::vector<double> x, std::vector<double> y);

    // For monotone data on a (nearly) uniform grid: fourth-order slope
    // estimates clamped to keep the interpolant monotone. Full accuracy away
    // from kinks, shape-preserving at them.
    static CubicHermite monotone(std::vector<double> x, std::vector<double> y);

    double operator()(double xq) const;
    bool empty() const { return x_.empty(); }
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }
    double front_y() const { return y_.front(); }
    double back_y() const { return y_.back(); }

private:
    std::vector<double> x_, y_, d_;
};

} // namespace vortex
