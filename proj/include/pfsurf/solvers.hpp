#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pfsurf/constraints.hpp"
#include "pfsurf/energies.hpp"
#include "pfsurf/grid.hpp"
#include "pfsurf/phasefield.hpp"
#include "pfsurf/spectral.hpp"

namespace pfsurf {

enum class Method { pgdm, admm };

/// Sign convention of the elastica updates (PGDM and ADMM).
///
/// `printed` transcribes the published update lines verbatim. `gradient`
/// follows the gradients they were derived from: the PGDM step flips the
/// W''*Lap(u) and W'*W'' terms so it descends E, the ADMM u-step flips the
/// W'*W'' term, and the ADMM w-step solves its quadratic subproblem exactly,
/// w = (eps + rho - eps Lap)^{-1} (rho grad u + lambda - (1/eps) grad W'(u)).
enum class UpdateScheme { printed, gradient };

const char* to_string(UpdateScheme s) noexcept;
UpdateScheme parse_update_scheme(const std::string& s);

const char* to_string(Method m) noexcept;
Method parse_method(const std::string& s);

struct SolverConfig {
    Formulation formulation = Formulation::elastica;
    Method method = Method::pgdm;
    double eps = 1.5 / 32.0;
    double tau = 0.0;
    double rho = 1.0;
    int max_iters = 2000;
    double tol_energy = 0.0;  ///< 0 disables the energy-difference rule
    double tol_rel = 1e-4;    ///< 0 disables the relative-change rule
    ObstacleMode obstacle_mode = ObstacleMode::indicator;
    bool record_trace = true;
    UpdateScheme scheme = UpdateScheme::gradient;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

struct TraceRecord {
    int iter = 0;
    EnergyBreakdown energy;
    double rel_err = 0.0;
    double wall_ms = 0.0;
};

enum class Termination { energy_tol, rel_tol, max_iters };
const char* to_string(Termination t) noexcept;

struct SolverRun {
    SolverConfig config;
    ScalarField3D final_u;
    int iters_done = 0;
    std::vector<TraceRecord> trace;
    Termination termination_reason = Termination::max_iters;
};

/// Initial phase field and the obstacle box it evolves in.
struct Problem {
    ScalarField3D u0;
    ObstaclePair obstacles;
};

/// Gap-fills the stack, builds the fattened restrictions and obstacle profiles,
/// and initialises u0 = q(d(x, E0)/eps).
Problem problem_from_stack(const SliceStack& stack, const SolverConfig& cfg, double alpha = 0.5,
                           int erosion = 0, std::vector<std::string>* warnings = nullptr);

/// Unconstrained problem (bounds 0 and 1) started from q(d(x, E0)/eps).
Problem problem_from_volume(const BinaryVolume& e0, const SolverConfig& cfg);

/// ||a - b||_2 / max(||b||_2, 1e-30), voxel-volume weighted.
double relative_change(const ScalarField3D& next, const ScalarField3D& prev);

/// Projected semi-implicit gradient descent for all three formulations.
class PgdmSolver {
public:
    PgdmSolver(std::shared_ptr<const SpectralPlan> plan, SolverConfig cfg, ObstaclePair obst);

    /// Projects `u` onto the obstacle box, then takes one semi-implicit step.
    ScalarField3D step(const ScalarField3D& u);
    /// As step(), writing into `out` (which must be on the same grid and
    /// must not alias `u`) so loops can reuse buffers.
    void step_into(const ScalarField3D& u, ScalarField3D& out);
    /// The projected iterate used by the most recent step.
    const ScalarField3D& last_projected() const noexcept { return u_half_; }

private:
    std::shared_ptr<const SpectralPlan> plan_;
    SolverConfig cfg_;
    ObstaclePair obst_;
    SpectralWorkspace ws_;
    ScalarField3D u_half_;
    std::shared_ptr<const std::vector<double>> lap_;
    std::vector<double> lap_n_;
    std::vector<double> precond_n_;
};

/// ADMM iterate: phase field, auxiliary gradient, multiplier.
struct AdmmState {
    ScalarField3D u;
    VectorField3D w;
    VectorField3D lambda;
};

/// w0 = grad u0, lambda0 = w0.
AdmmState admm_initial_state(const SpectralPlan& plan, const ScalarField3D& u0);

/// ADMM splitting w = grad u for the elastica formulation.
class AdmmSolver {
public:
    AdmmSolver(std::shared_ptr<const SpectralPlan> plan, SolverConfig cfg, ObstaclePair obst);

    AdmmState step(const AdmmState& s);
    const ScalarField3D& last_projected() const noexcept { return u_half_; }

private:
    std::shared_ptr<const SpectralPlan> plan_;
    SolverConfig cfg_;
    ObstaclePair obst_;
    SpectralWorkspace ws_;
    std::vector<cplx> w_hat_[3];
    ScalarField3D u_half_;
    std::shared_ptr<const std::vector<double>> lap_;
    std::shared_ptr<const std::vector<double>> precond_u_;
    std::shared_ptr<const std::vector<double>> precond_w_;
};

ScalarField3D pgdm_step(const ScalarField3D& u, const ObstaclePair& obst, const SolverConfig& cfg,
                        std::shared_ptr<const SpectralPlan> plan);
AdmmState admm_step(const AdmmState& s, const ObstaclePair& obst, const SolverConfig& cfg,
                    std::shared_ptr<const SpectralPlan> plan);

/// Called after every iteration with the projected iterate u_{k+1/2}, the new
/// iterate u_{k+1}, and (for ADMM) the full state.
struct IterationView {
    int iter = 0;
    const ScalarField3D* projected = nullptr;
    const ScalarField3D* next = nullptr;
    const AdmmState* admm = nullptr;
};
using IterationObserver = std::function<void(const IterationView&)>;

/// Runs the configured method to a stopping rule. The returned field is
/// projected once more so it satisfies the obstacle bounds.
SolverRun run(const Problem& problem, const SolverConfig& cfg,
              const IterationObserver& observer = {});

}  // namespace pfsurf
