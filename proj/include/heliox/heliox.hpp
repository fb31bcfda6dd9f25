#pragma once
// heliox/heliox.hpp - everything

#include "heliox/bubble.hpp"
#include "heliox/calibration.hpp"
#include "heliox/constants.hpp"
#include "heliox/csv.hpp"
#include "heliox/device.hpp"
#include "heliox/errors.hpp"
#include "heliox/figures.hpp"
#include "heliox/montecarlo.hpp"
#include "heliox/noise.hpp"
#include "heliox/numerics.hpp"
#include "heliox/optics.hpp"
#include "heliox/parallel.hpp"
#include "heliox/params.hpp"
#include "heliox/spin.hpp"
#include "heliox/sweep.hpp"
#include "heliox/transport.hpp"
#include "heliox/trap.hpp"
#include "heliox/units.hpp"
