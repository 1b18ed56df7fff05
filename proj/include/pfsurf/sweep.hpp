#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pfsurf/constraints.hpp"
#include "pfsurf/solvers.hpp"

namespace pfsurf {

/// Inclusive grid lo, lo+step, ..., hi (with a small tolerance at hi).
std::vector<double> range_grid(double lo, double hi, double step);
/// Parses "lo:hi:step" or a single value.
std::vector<double> parse_range(const std::string& text, const std::string& what);

struct SweepSettings {
    std::vector<double> rho;
    std::vector<double> eps_n;        ///< eps * N values
    std::string tau_rule = "eps^3";
    double criterion = 10.5005;       ///< a cell passes when sigma_GC < criterion
    int max_iters = 400;
    int check_every = 20;             ///< mesh the projected iterate every k iterations
    bool stop_on_pass = false;        ///< end a cell at its first passing check
    UpdateScheme scheme = UpdateScheme::gradient;
    double alpha = 0.5;
};

struct SweepCell {
    double rho = 0.0;
    double eps_n = 0.0;
    bool pass = false;
    /// Smallest sigma_GC over all checked iterates (infinity if none meshed).
    double sigma_gc_best = std::numeric_limits<double>::infinity();
    int best_iter = -1;
    std::string note;                 ///< divergence or mesh failures
};

using SweepProgress = std::function<void(const SweepCell&, std::size_t done, std::size_t total)>;

/// ADMM elastica runs over the rho x eps*N grid on `stack`. A cell passes when
/// any checked iterate meshes with sigma_GC below the criterion; a cell that
/// diverges is marked failed with a note and the sweep moves on.
std::vector<SweepCell> sweep_admm(const SliceStack& stack, const SweepSettings& s,
                                  const SweepProgress& progress = {});

/// `rho,epsN,tau_rule,pass,sigma_gc_best`
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCell>& cells,
                     const std::string& tau_rule);

}  // namespace pfsurf
