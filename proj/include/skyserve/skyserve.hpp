#pragma once

// Umbrella header: the whole planning engine.

#include "skyserve/coverage.hpp"
#include "skyserve/errors.hpp"
#include "skyserve/ga.hpp"
#include "skyserve/geometry.hpp"
#include "skyserve/link.hpp"
#include "skyserve/oracle.hpp"
#include "skyserve/rng.hpp"
#include "skyserve/routing.hpp"
#include "skyserve/scenario.hpp"
