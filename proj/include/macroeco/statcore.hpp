#pragma once

#include "macroeco/statcore/descriptive.hpp"
#include "macroeco/statcore/histogram.hpp"
#include "macroeco/statcore/ks.hpp"
#include "macroeco/statcore/optimize.hpp"
#include "macroeco/statcore/quadrature.hpp"
#include "macroeco/statcore/random.hpp"
#include "macroeco/statcore/special.hpp"
