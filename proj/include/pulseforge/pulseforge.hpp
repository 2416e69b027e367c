#pragma once

// Convenience umbrella: pulls in the whole toolkit.

#include "pulseforge/cost.hpp"
#include "pulseforge/filter_function.hpp"
#include "pulseforge/gate.hpp"
#include "pulseforge/geometric.hpp"
#include "pulseforge/grid.hpp"
#include "pulseforge/infidelity.hpp"
#include "pulseforge/invariant_core.hpp"
#include "pulseforge/io.hpp"
#include "pulseforge/mlp.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/oracle.hpp"
#include "pulseforge/parallel.hpp"
#include "pulseforge/pulse_library.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/report.hpp"
#include "pulseforge/special_functions.hpp"
#include "pulseforge/train.hpp"
#include "pulseforge/trajectory.hpp"
#include "pulseforge/verify.hpp"
