#include "pfsurf/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pfsurf/kernels.hpp"

namespace pfsurf {

const char* to_string(Method m) noexcept { return m == Method::pgdm ? "pgdm" : "admm"; }

Method parse_method(const std::string& s) {
    if (s == "pgdm") return Method::pgdm;
    if (s == "admm") return Method::admm;
    throw ValidationError("unknown method '" + s + "'");
}

const char* to_string(UpdateScheme s) noexcept {
    return s == UpdateScheme::printed ? "printed" : "gradient";
}

UpdateScheme parse_update_scheme(const std::string& s) {
    if (s == "printed") return UpdateScheme::printed;
    if (s == "gradient") return UpdateScheme::gradient;
    throw ValidationError("unknown update scheme '" + s + "'");
}

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::energy_tol: return "energy_tol";
        case Termination::rel_tol: return "rel_tol";
        case Termination::max_iters: return "max_iters";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
    if (!(tau > 0.0)) throw ConfigError("tau must be > 0");
    if (method == Method::admm) {
        if (!(rho > 0.0)) throw ConfigError("rho must be > 0 for ADMM");
        if (formulation != Formulation::elastica) {
            throw ConfigError("ADMM is only defined for the elastica formulation");
        }
    }
    if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
    if (tol_energy < 0.0 || tol_rel < 0.0) throw ConfigError("tolerances must be >= 0");
}

Problem problem_from_stack(const SliceStack& stack, const SolverConfig& cfg, double alpha,
                           int erosion, std::vector<std::string>* warnings) {
    const PhaseFieldParams params(cfg.eps, alpha);
    auto cs = build_constraints(stack, params, cfg.obstacle_mode, erosion);
    if (warnings) *warnings = cs.warnings;
    return {init_phase_field(cs.initial_set, params), std::move(cs.obstacles)};
}

Problem problem_from_volume(const BinaryVolume& e0, const SolverConfig& cfg) {
    return {init_phase_field(e0, PhaseFieldParams(cfg.eps)), ObstaclePair::trivial(e0.spec())};
}

double relative_change(const ScalarField3D& next, const ScalarField3D& prev) {
    const auto s = kernels::change_sums(next.values(), prev.values());
    const double dv = prev.spec().voxel_volume();
    return std::sqrt(s.diff * dv) / std::max(std::sqrt(s.base * dv), 1e-30);
}

namespace {

void check_finite(const ScalarField3D& u, int iter) {
    if (!u.all_finite()) {
        throw DivergenceError("iterate became non-finite at iteration " + std::to_string(iter),
                              iter);
    }
}

}  // namespace

PgdmSolver::PgdmSolver(std::shared_ptr<const SpectralPlan> plan, SolverConfig cfg,
                       ObstaclePair obst)
    : plan_(std::move(plan)), cfg_(cfg), obst_(std::move(obst)) {
    cfg_.validate();
    require_same_spec(plan_->spec(), obst_.spec(), "PgdmSolver");
    obst_.validate();
    ws_ = plan_->make_workspace();
    u_half_ = ScalarField3D(plan_->spec());
    lap_ = plan_->symbol(SymbolKind::laplacian);
    lap_n_ = plan_->normalized_symbol(SymbolKind::laplacian);
    SymbolKind kind = SymbolKind::pgdm_elastica;
    if (cfg_.formulation == Formulation::perimeter) kind = SymbolKind::pgdm_perimeter;
    if (cfg_.formulation == Formulation::willmore) kind = SymbolKind::pgdm_willmore;
    precond_n_ = plan_->normalized_symbol(kind, cfg_.eps, cfg_.tau);
}

ScalarField3D PgdmSolver::step(const ScalarField3D& u) {
    ScalarField3D next(u.spec());
    step_into(u, next);
    return next;
}

void PgdmSolver::step_into(const ScalarField3D& u, ScalarField3D& next) {
    require_same_spec(plan_->spec(), u.spec(), "pgdm step");
    require_same_spec(plan_->spec(), next.spec(), "pgdm step output");
    const kernels::StepCoefficients c{cfg_.eps, cfg_.tau,
                                      cfg_.scheme == UpdateScheme::gradient};
    kernels::clamp(u_half_.values(), u.values(), obst_.lower.values(), obst_.upper.values());

    if (cfg_.formulation == Formulation::perimeter) {
        kernels::perimeter_rhs(ws_.real_a, u_half_.values(), c);
        plan_->forward(ws_.real_a, ws_.spec_a);
        kernels::scale_spectrum(ws_.spec_a, precond_n_);
        plan_->inverse_unscaled(ws_.spec_a, next.values());
        return;
    }

    // Lap u_{k+1/2}; the normalised tables fold in the inverse's 1/size.
    plan_->forward(u_half_.values(), ws_.spec_a);
    kernels::scale_spectrum(ws_.spec_a, lap_n_);
    plan_->inverse_unscaled(ws_.spec_a, ws_.real_a);

    auto& explicit_part = ws_.real_b;
    auto laplace_part = next.values();
    if (cfg_.formulation == Formulation::elastica) {
        kernels::elastica_rhs(explicit_part, laplace_part, u_half_.values(), ws_.real_a, c);
    } else {
        kernels::willmore_rhs(explicit_part, laplace_part, u_half_.values(), ws_.real_a, c);
    }
    plan_->forward(explicit_part, ws_.spec_a);
    plan_->forward(laplace_part, ws_.spec_b);
    kernels::combine_spectra(ws_.spec_a, ws_.spec_b, *lap_, precond_n_);
    plan_->inverse_unscaled(ws_.spec_a, next.values());
}

AdmmState admm_initial_state(const SpectralPlan& plan, const ScalarField3D& u0) {
    AdmmState s;
    s.u = u0;
    s.w = gradient(plan, u0);
    s.lambda = s.w;
    return s;
}

AdmmSolver::AdmmSolver(std::shared_ptr<const SpectralPlan> plan, SolverConfig cfg,
                       ObstaclePair obst)
    : plan_(std::move(plan)), cfg_(cfg), obst_(std::move(obst)) {
    if (cfg_.method != Method::admm) throw ConfigError("AdmmSolver needs method = admm");
    cfg_.validate();
    require_same_spec(plan_->spec(), obst_.spec(), "AdmmSolver");
    obst_.validate();
    ws_ = plan_->make_workspace();
    for (auto& w : w_hat_) w.resize(plan_->spectrum_size());
    u_half_ = ScalarField3D(plan_->spec());
    lap_ = plan_->symbol(SymbolKind::laplacian);
    precond_u_ = plan_->symbol(SymbolKind::admm_u, cfg_.eps, cfg_.tau, cfg_.rho);
    precond_w_ = cfg_.scheme == UpdateScheme::gradient
                     ? plan_->symbol(SymbolKind::admm_w_exact, cfg_.eps, 0.0, cfg_.rho)
                     : plan_->symbol(SymbolKind::admm_w, cfg_.eps, cfg_.tau);
}

AdmmState AdmmSolver::step(const AdmmState& s) {
    const auto& spec = plan_->spec();
    require_same_spec(spec, s.u.spec(), "admm step");
    const double tau = cfg_.tau, rho = cfg_.rho;
    const bool gradient_scheme = cfg_.scheme == UpdateScheme::gradient;
    const kernels::AdmmCoefficients c{cfg_.eps, tau, rho, gradient_scheme};
    const std::size_t m = plan_->spectrum_size();

    kernels::clamp(u_half_.values(), s.u.values(), obst_.lower.values(), obst_.upper.values());

    // div w_k in real space, and G = div(lambda_k - rho w_k) in Fourier space.
    auto& div_hat = ws_.spec_b;
    auto& g_hat = ws_.spec_c;
    std::fill(div_hat.begin(), div_hat.end(), cplx(0.0, 0.0));
    std::fill(g_hat.begin(), g_hat.end(), cplx(0.0, 0.0));
    for (int a = 0; a < 3; ++a) {
        const auto& dk = plan_->derivative_symbol(a);
        plan_->forward(s.w[a].values(), w_hat_[a]);
        plan_->forward(s.lambda[a].values(), ws_.spec_a);
        for (std::size_t i = 0; i < m; ++i) {
            const cplx d(0.0, dk[i]);
            div_hat[i] += d * w_hat_[a][i];
            g_hat[i] += d * (ws_.spec_a[i] - rho * w_hat_[a][i]);
        }
    }
    auto& div_w = ws_.real_a;
    plan_->inverse(div_hat, div_w);

    AdmmState out;
    out.u = ScalarField3D(spec);
    kernels::admm_u_rhs(ws_.real_b, u_half_.values(), div_w, c);
    auto& u_hat = ws_.spec_a;
    plan_->forward(ws_.real_b, u_hat);
    {
        const auto& p = *precond_u_;
        for (std::size_t i = 0; i < m; ++i) u_hat[i] = p[i] * (u_hat[i] + tau * g_hat[i]);
    }
    std::copy(u_hat.begin(), u_hat.end(), ws_.spec_b.begin());
    plan_->inverse(ws_.spec_b, out.u.values());

    // grad u_{k+1} (kept in `out.lambda` until the multiplier update).
    out.lambda = VectorField3D(spec);
    for (int a = 0; a < 3; ++a) {
        const auto& dk = plan_->derivative_symbol(a);
        for (std::size_t i = 0; i < m; ++i) ws_.spec_b[i] = cplx(0.0, dk[i]) * u_hat[i];
        plan_->inverse(ws_.spec_b, out.lambda[a].values());
    }

    out.w = VectorField3D(spec);
    if (gradient_scheme) {
        kernels::well_d1_field(ws_.real_b, out.u.values());
        plan_->forward(ws_.real_b, g_hat);  // W'(u_{k+1}) in Fourier space
    }
    for (int a = 0; a < 3; ++a) {
        // div_w is reused as scratch: Lap w_k (printed) or d_a W'(u_{k+1}).
        if (gradient_scheme) {
            const auto& dk = plan_->derivative_symbol(a);
            for (std::size_t i = 0; i < m; ++i) ws_.spec_b[i] = cplx(0.0, dk[i]) * g_hat[i];
            plan_->inverse(ws_.spec_b, div_w);
            kernels::admm_w_exact_rhs(ws_.real_b, div_w, out.lambda[a].values(),
                                      s.lambda[a].values(), c);
        } else {
            for (std::size_t i = 0; i < m; ++i) ws_.spec_b[i] = (*lap_)[i] * w_hat_[a][i];
            plan_->inverse(ws_.spec_b, div_w);
            kernels::admm_w_rhs(ws_.real_b, s.w[a].values(), div_w, out.lambda[a].values(),
                                s.lambda[a].values(), out.u.values(), c);
        }
        plan_->forward(ws_.real_b, ws_.spec_b);
        kernels::scale_spectrum(ws_.spec_b, *precond_w_);
        plan_->inverse(ws_.spec_b, out.w[a].values());
    }

    for (int a = 0; a < 3; ++a) {
        // out.lambda[a] holds grad u_{k+1}; turn it into lambda_{k+1}.
        auto& gl = out.lambda[a];
        for (std::size_t i = 0; i < gl.size(); ++i) {
            gl[i] = s.lambda[a][i] + rho * (gl[i] - out.w[a][i]);
        }
    }
    return out;
}

ScalarField3D pgdm_step(const ScalarField3D& u, const ObstaclePair& obst, const SolverConfig& cfg,
                        std::shared_ptr<const SpectralPlan> plan) {
    PgdmSolver solver(std::move(plan), cfg, obst);
    return solver.step(u);
}

AdmmState admm_step(const AdmmState& s, const ObstaclePair& obst, const SolverConfig& cfg,
                    std::shared_ptr<const SpectralPlan> plan) {
    AdmmSolver solver(std::move(plan), cfg, obst);
    return solver.step(s);
}

SolverRun run(const Problem& problem, const SolverConfig& cfg, const IterationObserver& observer) {
    cfg.validate();
    require_same_spec(problem.u0.spec(), problem.obstacles.spec(), "run");
    problem.obstacles.validate();

    SolverRun result;
    result.config = cfg;
    auto plan = std::make_shared<const SpectralPlan>(problem.u0.spec());
    const bool need_energy = cfg.record_trace || cfg.tol_energy > 0.0;
    double prev_energy = need_energy ? energy_for(*plan, problem.u0, cfg.eps, cfg.formulation).total
                                     : 0.0;

    ScalarField3D u = problem.u0;
    std::unique_ptr<PgdmSolver> pgdm;
    std::unique_ptr<AdmmSolver> admm;
    AdmmState state;
    if (cfg.method == Method::pgdm) {
        pgdm = std::make_unique<PgdmSolver>(plan, cfg, problem.obstacles);
    } else {
        admm = std::make_unique<AdmmSolver>(plan, cfg, problem.obstacles);
        state = admm_initial_state(*plan, u);
    }

    using clock = std::chrono::steady_clock;
    ScalarField3D next(u.spec());
    for (int k = 0; k < cfg.max_iters; ++k) {
        const auto t0 = clock::now();
        const ScalarField3D* projected = nullptr;
        if (pgdm) {
            pgdm->step_into(u, next);
            projected = &pgdm->last_projected();
        } else {
            state = admm->step(state);
            next = state.u;
            projected = &admm->last_projected();
        }
        // A non-finite value anywhere makes the change norm non-finite, so
        // the full scan only runs when the norm is suspicious.
        const double rel = relative_change(next, u);
        if (!std::isfinite(rel)) check_finite(next, k + 1);
        const auto t1 = clock::now();

        if (observer) observer({k + 1, projected, &next, admm ? &state : nullptr});

        EnergyBreakdown e;
        if (need_energy) e = energy_for(*plan, next, cfg.eps, cfg.formulation);
        if (cfg.record_trace) {
            result.trace.push_back(
                {k + 1, e, rel, std::chrono::duration<double, std::milli>(t1 - t0).count()});
        }
        std::swap(u, next);
        result.iters_done = k + 1;

        if (cfg.tol_energy > 0.0 && std::abs(e.total - prev_energy) < cfg.tol_energy) {
            result.termination_reason = Termination::energy_tol;
            break;
        }
        if (cfg.tol_rel > 0.0 && rel < cfg.tol_rel) {
            result.termination_reason = Termination::rel_tol;
            break;
        }
        prev_energy = e.total;
    }
    result.final_u = project_obstacle(u, problem.obstacles);
    return result;
}

}  // namespace pfsurf
