#pragma once

#include "pvarlab/summation.hpp"
#include "pvarlab/grid.hpp"
#include "pvarlab/io.hpp"
#include "pvarlab/check.hpp"
#include "pvarlab/pvar1d.hpp"
#include "pvarlab/vitali2d.hpp"
#include "pvarlab/modulus.hpp"
#include "pvarlab/smoothness.hpp"
#include "pvarlab/mixednorm.hpp"
#include "pvarlab/harness.hpp"
#include "pvarlab/cli.hpp"
