#pragma once

#include <vector>

#include "pfsurf/solvers.hpp"

namespace pfsurf {

/// Per-iteration step times (ms) of `iters` iterations after `warmup`
/// untimed ones. Stopping tolerances are disabled so every size runs the
/// same number of steps.
std::vector<double> step_times_ms(const Problem& problem, SolverConfig cfg, int iters,
                                  int warmup = 3);

double mean(const std::vector<double>& v);

}  // namespace pfsurf
