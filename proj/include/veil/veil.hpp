#pragma once

// Umbrella header: the whole library.

#include "veil/adversary.hpp"
#include "veil/channel.hpp"
#include "veil/dist.hpp"
#include "veil/errors.hpp"
#include "veil/harness.hpp"
#include "veil/numeric.hpp"
#include "veil/planar.hpp"
#include "veil/protocol.hpp"
#include "veil/rng.hpp"
