#pragma once

#include "clark/critical_point.hpp"
#include "clark/deformation.hpp"
#include "clark/errors.hpp"
#include "clark/functional.hpp"
#include "clark/io.hpp"
#include "clark/minimax.hpp"
#include "clark/model.hpp"
#include "clark/nodal_bvp.hpp"
#include "clark/ode.hpp"
#include "clark/parallel.hpp"
#include "clark/point.hpp"
#include "clark/solvers.hpp"
#include "clark/sublinear.hpp"
#include "clark/topology.hpp"
