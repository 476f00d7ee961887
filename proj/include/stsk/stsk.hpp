#pragma once

// Umbrella header: coherent space-time shift keying with structured
// dispersion-matrix constructions, detection, and simulation campaigns.

#include "stsk/channel.hpp"
#include "stsk/co_search.hpp"
#include "stsk/codebook.hpp"
#include "stsk/common.hpp"
#include "stsk/config.hpp"
#include "stsk/constellation.hpp"
#include "stsk/detect.hpp"
#include "stsk/dispersion.hpp"
#include "stsk/dm_io.hpp"
#include "stsk/metrics.hpp"
#include "stsk/rng.hpp"
#include "stsk/sim.hpp"
