#pragma once

#include "error.hpp"
#include "experiments.hpp"
#include "io.hpp"
#include "metric_space.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "roadnet.hpp"
#include "routing.hpp"
#include "sampling.hpp"
#include "validation.hpp"
