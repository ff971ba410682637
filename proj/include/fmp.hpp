#pragma once

// Flight and maintenance planning: instances, exact model, validation,
// heuristic search, the interval-scheduling reduction and the experiment
// harness.

#include "fmp/core.hpp"
#include "fmp/rng.hpp"
#include "fmp/validator.hpp"
#include "fmp/brute_force.hpp"
#include "fmp/model.hpp"
#include "fmp/mip.hpp"
#include "fmp/lp_format.hpp"
#include "fmp/generator.hpp"
#include "fmp/io.hpp"
#include "fmp/heuristic.hpp"
#include "fmp/reduction.hpp"
#include "fmp/experiment.hpp"
