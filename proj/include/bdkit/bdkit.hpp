#pragma once

// Umbrella header for the bdkit library.

#include "bdkit/bd_analytic.hpp"
#include "bdkit/birth_rate.hpp"
#include "bdkit/engine.hpp"
#include "bdkit/errors.hpp"
#include "bdkit/harness.hpp"
#include "bdkit/lifetimes.hpp"
#include "bdkit/log_weight.hpp"
#include "bdkit/rng.hpp"
#include "bdkit/sis_analytic.hpp"
#include "bdkit/verify.hpp"
