#pragma once

#include "geod/dataset.hpp"
#include "geod/error.hpp"
#include "geod/geometry.hpp"
#include "geod/libsvm.hpp"
#include "geod/line_search.hpp"
#include "geod/objectives/quadratic.hpp"
#include "geod/objectives/smoothed_hinge.hpp"
#include "geod/objectives/worst_case.hpp"
#include "geod/optimizers/baselines.hpp"
#include "geod/optimizers/geometric.hpp"
#include "geod/optimizers/methods.hpp"
#include "geod/optimizers/trace.hpp"
#include "geod/oracle.hpp"
#include "geod/synthetic.hpp"
#include "geod/types.hpp"
