#pragma once

#include "sharpnorm/ball.hpp"
#include "sharpnorm/derivative.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/extrapolation.hpp"
#include "sharpnorm/lattice.hpp"
#include "sharpnorm/maximal.hpp"
#include "sharpnorm/mixed_norm.hpp"
#include "sharpnorm/pde.hpp"
#include "sharpnorm/report.hpp"
#include "sharpnorm/stopping.hpp"
#include "sharpnorm/suite.hpp"
#include "sharpnorm/weight.hpp"
