#pragma once

// Umbrella header for the whole library.

#include "netdiscern/detector.hpp"
#include "netdiscern/discern.hpp"
#include "netdiscern/errors.hpp"
#include "netdiscern/io.hpp"
#include "netdiscern/matrix.hpp"
#include "netdiscern/network.hpp"
#include "netdiscern/pathgraph.hpp"
#include "netdiscern/spectral.hpp"
#include "netdiscern/subspace.hpp"
#include "netdiscern/svd.hpp"
#include "netdiscern/tolerances.hpp"
#include "netdiscern/version.hpp"
