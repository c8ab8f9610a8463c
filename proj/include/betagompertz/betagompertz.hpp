// Umbrella header for the Beta-Gompertz library.

#pragma once

#include "analytic.hpp"
#include "distribution.hpp"
#include "inference.hpp"
#include "quadrature.hpp"
#include "simstudy.hpp"
#include "specfun.hpp"
#include "submodels.hpp"
