#pragma once

#include "noarb/binomial.hpp"
#include "noarb/bsm.hpp"
#include "noarb/error.hpp"
#include "noarb/gbm.hpp"
#include "noarb/gordan.hpp"
#include "noarb/pde.hpp"
#include "noarb/simplex.hpp"
