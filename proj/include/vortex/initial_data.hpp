#pragma once

#include "vortex/vec2.hpp"

#include <functional>
#include <map>
#include <string>

namespace vortex {

/// A vorticity measure to be discretized: either an area density over a
/// bounding box or a curve carrying a circulation density.
struct InitialVorticity {
    enum class Kind { area_density, sheet_curve };

    Kind kind = Kind::area_density;
    std::string name;

    // area_density: position -> circulation per unit area
    std::function<double(Vec2)> density;
    Rect support_box;

    // sheet_curve: parameter s in [0, 1] -> position, and dGamma/ds >= 0
    std::function<Vec2(double)> curve;
    std::function<double(double)> gamma_density;

    bool nonnegative = true;
};

using ParamMap = std::map<std::string, double>;

/// Built-in initial data: uniform_patch, gaussian_patch, flat_sheet,
/// circular_sheet. Unknown names raise std::invalid_argument listing the
/// available choices.
InitialVorticity builtin_initial_data(const std::string& name, const ParamMap& params = {});

/// Area density from a gridded text table with rows (x, y, q); bilinear
/// interpolation inside the data extent, zero outside.
InitialVorticity density_from_file(const std::string& path);

} // namespace vortex
