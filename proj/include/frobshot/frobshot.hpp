#pragma once

// Umbrella header.

#include "frobshot/bounds.hpp"
#include "frobshot/errors.hpp"
#include "frobshot/esmgen.hpp"
#include "frobshot/interval.hpp"
#include "frobshot/lattice.hpp"
#include "frobshot/linalg.hpp"
#include "frobshot/numbers.hpp"
#include "frobshot/random.hpp"
#include "frobshot/reduce.hpp"
#include "frobshot/semigroup.hpp"
#include "frobshot/tuple.hpp"
