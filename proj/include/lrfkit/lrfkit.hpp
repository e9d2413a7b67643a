#pragma once

#include "boolprog.hpp"
#include "invariant.hpp"
#include "lp.hpp"
#include "loop.hpp"
#include "petri.hpp"
#include "ranking.hpp"
#include "vas_reduce.hpp"
