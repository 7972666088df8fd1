#ifndef CAPFADE_CAPFADE_HPP
#define CAPFADE_CAPFADE_HPP

#include "capfade/aging.hpp"
#include "capfade/calibration.hpp"
#include "capfade/defaults.hpp"
#include "capfade/ecm.hpp"
#include "capfade/error.hpp"
#include "capfade/minimize.hpp"
#include "capfade/profile.hpp"
#include "capfade/scenario.hpp"
#include "capfade/simulator.hpp"
#include "capfade/units.hpp"
#include "capfade/xmap.hpp"

#endif
