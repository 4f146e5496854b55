#pragma once

// Umbrella header for the whole library.

#include "socap/errors.hpp"
#include "socap/rng.hpp"
#include "socap/geometry.hpp"
#include "socap/social.hpp"
#include "socap/mh.hpp"
#include "socap/hc.hpp"
#include "socap/scaling.hpp"
#include "socap/harness.hpp"
