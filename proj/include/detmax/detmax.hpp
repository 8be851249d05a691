#pragma once

// Umbrella header for the determinant-maximization toolkit: approximate
// maximum j-subdeterminant and maximum-volume j-simplex solvers built on a
// certified design relaxation, plus exact oracles and instance tooling.

#include "detmax/bench.hpp"
#include "detmax/design.hpp"
#include "detmax/errors.hpp"
#include "detmax/generators.hpp"
#include "detmax/instance_io.hpp"
#include "detmax/linalg.hpp"
#include "detmax/log_value.hpp"
#include "detmax/problems.hpp"
#include "detmax/report.hpp"
#include "detmax/rng.hpp"
#include "detmax/rounding.hpp"
#include "detmax/types.hpp"
