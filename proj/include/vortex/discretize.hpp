#pragma once

#include "vortex/initial_data.hpp"
#include "vortex/system.hpp"

namespace vortex {

/// Cover the support box with squares of side eta whose corners lie on the
/// integer lattice scaled by eta, integrate the density over each cell with
/// a 4x4 tensor Gauss rule, and place one vortex of that circulation at each
/// cell center. Cells with |Gamma| < drop_tol * eta^2 are dropped.
VortexSystem discretize_density(const InitialVorticity& iv, double eta, double drop_tol,
                                const SmoothingKernel& kernel, double eps);

/// Place n_markers equal-circulation markers along a sheet curve: marker k
/// sits at the curve point where the cumulative circulation reaches
/// (k - 1/2) * Gamma_total / n_markers.
VortexSystem discretize_sheet(const InitialVorticity& iv, int n_markers,
                              const SmoothingKernel& kernel, double eps);

} // namespace vortex
