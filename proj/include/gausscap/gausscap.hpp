#pragma once

#include "gausscap/capacity.hpp"
#include "gausscap/errors.hpp"
#include "gausscap/gaussian.hpp"
#include "gausscap/general.hpp"
#include "gausscap/holevo.hpp"
#include "gausscap/number_state.hpp"
#include "gausscap/protocols.hpp"
#include "gausscap/sweep.hpp"
#include "gausscap/version.hpp"
