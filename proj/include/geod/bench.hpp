#pragma once

#include "geod/bench/accuracy.hpp"
#include "geod/bench/config.hpp"
#include "geod/bench/output.hpp"
#include "geod/bench/problems.hpp"
#include "geod/bench/report.hpp"
#include "geod/bench/runner.hpp"
#include "geod/bench/svg.hpp"
