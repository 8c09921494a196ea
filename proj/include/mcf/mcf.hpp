#pragma once

// n-dimensional triangle map laboratory: maps, exact cylinder-cell geometry,
// combinatorial identities, invariant measures, and ergodic experiments.

#include "mcf/cells.hpp"
#include "mcf/certify.hpp"
#include "mcf/compositions.hpp"
#include "mcf/ergodic.hpp"
#include "mcf/errors.hpp"
#include "mcf/linalg.hpp"
#include "mcf/maps.hpp"
#include "mcf/measure.hpp"
#include "mcf/rng.hpp"
#include "mcf/scalar.hpp"
#include "mcf/simplex.hpp"
