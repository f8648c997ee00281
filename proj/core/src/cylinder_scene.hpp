#pragma once

#include <cstdint>

#include "geoperc/model.hpp"

namespace geoperc::detail {

/// Exact scene of the geostatistical model over an unbounded cylinder field.
///
/// Points off every cylinder get radius 0 and never matter, and a cylinder
/// of value v can only host discs reaching the window from within distance
/// v of it. So we sample the lines that can matter (thinned over geometric
/// shells of axis distance), the other lines near them, and Poisson points
/// only inside the relevant strips. The leakage budget is the expected
/// number of relevant lines beyond the last shell.
Scene realize_cylinder_scene(const CylinderFieldParams& params, double eps_leak, double lambda,
                             const Rect& window, std::uint64_t replication_seed);

}  // namespace geoperc::detail
