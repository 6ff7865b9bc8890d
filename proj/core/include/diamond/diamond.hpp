#pragma once

#include "diamond/errors.hpp"
#include "diamond/estimates.hpp"
#include "diamond/geometry.hpp"
#include "diamond/grid.hpp"
#include "diamond/kernels.hpp"
#include "diamond/params.hpp"
#include "diamond/semigroup.hpp"
#include "diamond/verify/cable.hpp"
#include "diamond/verify/oracles.hpp"
#include "diamond/verify/suite.hpp"
