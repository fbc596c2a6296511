#pragma once

#include "spillover/dsge/bgg.hpp"
#include "spillover/dsge/irf.hpp"
#include "spillover/dsge/linearize.hpp"
#include "spillover/dsge/model.hpp"
#include "spillover/dsge/params.hpp"
#include "spillover/dsge/solve.hpp"
#include "spillover/dsge/steady_state.hpp"
