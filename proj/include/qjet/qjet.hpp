#pragma once

#include "qjet/analytic.hpp"
#include "qjet/branches.hpp"
#include "qjet/config.hpp"
#include "qjet/fan.hpp"
#include "qjet/fft.hpp"
#include "qjet/hierarchy.hpp"
#include "qjet/integrate.hpp"
#include "qjet/potential.hpp"
#include "qjet/root_search.hpp"
#include "qjet/runner.hpp"
#include "qjet/spectral.hpp"
#include "qjet/strategies.hpp"
#include "qjet/table.hpp"
#include "qjet/types.hpp"
#include "qjet/validate.hpp"
#include "qjet/version.hpp"
#include "qjet/wavepacket.hpp"
