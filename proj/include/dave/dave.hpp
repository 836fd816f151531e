#pragma once

#include "dave/adversary.hpp"
#include "dave/analysis.hpp"
#include "dave/bounds.hpp"
#include "dave/clock.hpp"
#include "dave/commitment.hpp"
#include "dave/config.hpp"
#include "dave/error.hpp"
#include "dave/hash.hpp"
#include "dave/match.hpp"
#include "dave/matchmaking.hpp"
#include "dave/parallel.hpp"
#include "dave/report.hpp"
#include "dave/tournament.hpp"
#include "dave/types.hpp"
#include "dave/vm.hpp"
