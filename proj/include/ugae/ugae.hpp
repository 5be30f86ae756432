#pragma once

#include "ugae/advantage.hpp"
#include "ugae/analysis.hpp"
#include "ugae/bench.hpp"
#include "ugae/descriptor.hpp"
#include "ugae/pathworld.hpp"
#include "ugae/schedule.hpp"
