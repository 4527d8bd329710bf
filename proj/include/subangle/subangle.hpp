#pragma once

// Umbrella header for the numerical library (the CLI lives in cli.hpp).

#include "config.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "matcore.hpp"
#include "subspace.hpp"
#include "principal.hpp"
#include "canonical.hpp"
#include "inertia.hpp"
