#pragma once

/// Umbrella header: the whole library except the CLI front end (which pulls
/// in the vendored argument parser and JSON writer; include
/// hortonlab/cli.hpp separately when you want it).

#include "hortonlab/error.hpp"
#include "hortonlab/format.hpp"
#include "hortonlab/horton.hpp"
#include "hortonlab/newick.hpp"
#include "hortonlab/pruning.hpp"
#include "hortonlab/sampler.hpp"
#include "hortonlab/strahler.hpp"
#include "hortonlab/tokunaga.hpp"
#include "hortonlab/tree.hpp"
