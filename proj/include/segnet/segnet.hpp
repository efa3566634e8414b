#pragma once

#include "segnet/calibration.hpp"
#include "segnet/diagnostics.hpp"
#include "segnet/equilibrium.hpp"
#include "segnet/model.hpp"
#include "segnet/netmc.hpp"
#include "segnet/sensitivity.hpp"
#include "segnet/welfare.hpp"
