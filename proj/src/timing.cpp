#include "pfsurf/timing.hpp"

#include <numeric>

namespace pfsurf {

std::vector<double> step_times_ms(const Problem& problem, SolverConfig cfg, int iters, int warmup) {
    if (iters < 1 || warmup < 0) throw ValidationError("timing needs iters >= 1 and warmup >= 0");
    cfg.max_iters = iters + warmup;
    cfg.tol_rel = 0.0;
    cfg.tol_energy = 0.0;
    cfg.record_trace = true;
    const auto r = run(problem, cfg);
    std::vector<double> out;
    for (std::size_t i = static_cast<std::size_t>(warmup); i < r.trace.size(); ++i) {
        out.push_back(r.trace[i].wall_ms);
    }
    return out;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace pfsurf
