#pragma once

// Umbrella header: iterative-scaling projections for finite channels.

#include "chanscale/builtin_channels.hpp"
#include "chanscale/channel.hpp"
#include "chanscale/core.hpp"
#include "chanscale/distributions.hpp"
#include "chanscale/divergence.hpp"
#include "chanscale/errors.hpp"
#include "chanscale/marginals.hpp"
#include "chanscale/measures.hpp"
#include "chanscale/product_space.hpp"
#include "chanscale/projection.hpp"
#include "chanscale/scaling.hpp"
