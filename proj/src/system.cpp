#include "vortex/system.hpp"

#include <cmath>
#include <stdexcept>

namespace vortex {

void VortexSystem::validate() const {
    if (positions.empty()) throw std::invalid_argument("VortexSystem: needs at least one vortex");
    if (positions.size() != circulations.size())
        throw std::invalid_argument("VortexSystem: positions/circulations size mismatch");
    if (!(eps > 0.0)) throw std::invalid_argument("VortexSystem: eps must be positive");
    for (const Vec2& p : positions)
        if (!p.finite()) throw std::invalid_argument("VortexSystem: non-finite position");
    for (double g : circulations)
        if (!std::isfinite(g)) throw std::invalid_argument("VortexSystem: non-finite circulation");
}

} // namespace vortex
