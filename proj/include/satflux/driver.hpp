#pragma once

#include "satflux/config.hpp"
#include "satflux/dual_solver.hpp"

namespace satflux {

/// Initial dual state described by the [initial] table, compatibilized if requested.
DualState make_initial_state(const RunConfig& cfg);

Trajectory simulate(const RunConfig& cfg);

}  // namespace satflux
