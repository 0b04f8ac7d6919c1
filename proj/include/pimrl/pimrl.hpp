#pragma once

#include "pimrl/collect.hpp"
#include "pimrl/cost_model.hpp"
#include "pimrl/dataset.hpp"
#include "pimrl/envs.hpp"
#include "pimrl/eval.hpp"
#include "pimrl/fixed_point.hpp"
#include "pimrl/kernels.hpp"
#include "pimrl/lcg.hpp"
#include "pimrl/pim_sim.hpp"
#include "pimrl/qtable.hpp"
#include "pimrl/qtable_io.hpp"
#include "pimrl/report.hpp"
