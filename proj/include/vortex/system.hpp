#pragma once

#include "vortex/kernels.hpp"
#include "vortex/vec2.hpp"

#include <vector>

namespace vortex {

/// N point vortices with their circulations, the regularization scale and
/// the smoothing kernel driving the induced velocity.
struct VortexSystem {
    std::vector<Vec2> positions;
    std::vector<double> circulations;
    double eps = 1.0;
    SmoothingKernel kernel = make_blob_kernel();
    double time = 0.0;
    double grid_eta = 0.0; // discretization grid size, 0 when not applicable

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

} // namespace vortex
