#pragma once

// Reduced-scale scenario configurations shared by the unit and acceptance
// suites. Geometry is chosen so all subdomain boundaries land on mesh lines.

#include "waveinv/config.hpp"

namespace waveinv::testing {

/// 3x3 nodes on the unit square, 4 time steps; control everywhere,
/// restriction observation on the upper band.
ScenarioConfig tiny(double sigma = 0.25);

/// 9x9 nodes on the unit square, 8 time steps, restriction observation.
ScenarioConfig small9(double sigma = 0.25);

/// Same mesh with two patch-mean series.
ScenarioConfig small9_patches(double sigma = 0.25);

/// Transmission preset scaled down to an aligned coarse mesh.
ScenarioConfig transmission_small(int nx = 16, int ny = 22, int nt = 16);

/// Reflection preset scaled down (snapping stays enabled).
ScenarioConfig reflection_small(int nx = 17, int ny = 17, int nt = 12);

} // namespace waveinv::testing
