// Umbrella header: high-precision noncentral t-distribution toolkit.

#pragma once

#include "nct/core.hpp"
#include "nct/gold_table.hpp"
#include "nct/quadrature.hpp"
#include "nct/reference.hpp"
#include "nct/specfun.hpp"
