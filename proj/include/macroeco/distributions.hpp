#pragma once

#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/distributions/fisher.hpp"
#include "macroeco/distributions/gamma.hpp"
#include "macroeco/distributions/lognormal.hpp"
#include "macroeco/distributions/turnover_law.hpp"
