#pragma once

// Umbrella header for the whole library.

#include "mag/centrality.hpp"
#include "mag/core.hpp"
#include "mag/error.hpp"
#include "mag/experiment.hpp"
#include "mag/generate.hpp"
#include "mag/io.hpp"
#include "mag/oracle.hpp"
#include "mag/ranking.hpp"
#include "mag/sparse.hpp"
#include "mag/subdet.hpp"
