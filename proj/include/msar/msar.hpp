#pragma once
// msar/msar.hpp - umbrella header

#include "msar/commands.hpp"
#include "msar/config.hpp"
#include "msar/drift_model.hpp"
#include "msar/energy.hpp"
#include "msar/geometry.hpp"
#include "msar/io.hpp"
#include "msar/mission_model.hpp"
#include "msar/monte_carlo_eval.hpp"
#include "msar/obstacles.hpp"
#include "msar/patterns.hpp"
#include "msar/rng.hpp"
#include "msar/search_metrics.hpp"
#include "msar/sensor_model.hpp"
