#pragma once

// Umbrella header: expression trees, the equianharmonic Weierstrass engine,
// solution-family constructors, residual certification, and numerical
// Nevanlinna growth estimation.

#include "fermat/elliptic.hpp"
#include "fermat/expr.hpp"
#include "fermat/families.hpp"
#include "fermat/nevanlinna.hpp"
#include "fermat/rng.hpp"
#include "fermat/sexpr.hpp"
#include "fermat/verify.hpp"
