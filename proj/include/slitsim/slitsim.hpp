#pragma once

#include "slitsim/analysis.hpp"
#include "slitsim/dynamics.hpp"
#include "slitsim/errors.hpp"
#include "slitsim/experiment.hpp"
#include "slitsim/io.hpp"
#include "slitsim/model.hpp"
#include "slitsim/numerics.hpp"
