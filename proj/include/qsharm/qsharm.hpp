#pragma once

#include "complex_rational.hpp"
#include "quaternion.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "harmonic.hpp"
#include "special.hpp"
#include "montecarlo.hpp"
#include "zonal.hpp"
#include "multiplier.hpp"
#include "io.hpp"
#include "verify.hpp"
