// Acceptance run: one PASS or FAIL verdict line per criterion, details
// indented above it. Arguments select criteria by number (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meshes.hpp"
#include "oracles.hpp"
#include "pfsurf/curvature.hpp"
#include "pfsurf/energies.hpp"
#include "pfsurf/mesh.hpp"
#include "pfsurf/phasefield.hpp"
#include "pfsurf/solvers.hpp"
#include "pfsurf/sweep.hpp"
#include "pfsurf/synth.hpp"
#include "pfsurf/timing.hpp"

using namespace pfsurf;
namespace ts = testing_support;

namespace {

constexpr double kThreshold = 10.5005;
constexpr Formulation kAll[] = {Formulation::perimeter, Formulation::willmore, Formulation::elastica};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void note(const std::string& s) { std::cout << "  " << s << std::endl; }

bool verdict(int id, bool pass, const std::string& what) {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << std::endl;
    return pass;
}

struct Outcome {
    double sigma_gc = 0.0, sigma_mc = 0.0;
    double sigma_gc_trimmed = 0.0;
    std::size_t vertices = 0;
    int iters = 0;
    bool in_box = true;
    double seconds = 0.0;
};

// sigma_GC without the 1% of vertices with the largest |kappa_G|.
double trimmed_sigma(const CurvatureReport& r) {
    std::vector<double> v;
    for (std::size_t i = 0; i < r.kappa_g.size(); ++i)
        if (r.included[i]) v.push_back(r.kappa_g[i]);
    std::sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    v.resize(v.size() - v.size() / 100);
    return population_stddev(v);
}

// Runs one reconstruction, checks the obstacle box after every projection,
// and measures the isosurface of the result.
Outcome reconstruct(const SliceStack& stack, const SolverConfig& cfg) {
    const auto t0 = Clock::now();
    const auto problem = problem_from_stack(stack, cfg);
    Outcome o;
    const auto run_result = run(problem, cfg, [&](const IterationView& v) {
        const auto& u = *v.projected;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (!(u[i] >= problem.obstacles.lower[i] && u[i] <= problem.obstacles.upper[i])) o.in_box = false;
        }
    });
    const auto rep = curvature_report(extract_isosurface(run_result.final_u));
    o.sigma_gc = rep.sigma_gc;
    o.sigma_mc = rep.sigma_mc;
    o.sigma_gc_trimmed = trimmed_sigma(rep);
    o.vertices = rep.n_vertices;
    o.iters = run_result.iters_done;
    o.seconds = seconds_since(t0);
    return o;
}

bool strictly_ordered(const Outcome (&o)[3]) {
    const auto& p = o[0];
    const auto& w = o[1];
    const auto& e = o[2];
    return e.sigma_gc < w.sigma_gc && w.sigma_gc < p.sigma_gc && e.sigma_mc < w.sigma_mc &&
           w.sigma_mc < p.sigma_mc;
}

void report_runs(const Outcome (&o)[3]) {
    for (int f = 0; f < 3; ++f) {
        note(std::string(to_string(kAll[f])) + ": sigma_GC " + fmt("%.4f", o[f].sigma_gc) + ", sigma_MC " +
             fmt("%.4f", o[f].sigma_mc) + ", sigma_GC without top 1% " + fmt("%.3f", o[f].sigma_gc_trimmed) +
             ", " + std::to_string(o[f].vertices) + " vertices, " + std::to_string(o[f].iters) +
             " iterations, " + fmt("%.1f s", o[f].seconds));
    }
}

// Example-1 runs are shared by criteria 1 and 9.
struct Example1 {
    Outcome runs[3];
    double seconds = 0.0;
    bool done = false;
};

Example1& example1() {
    static Example1 ex;
    if (ex.done) return ex;
    const int n = 32;
    const auto stack = example_sphere_stack(n);
    const auto t0 = Clock::now();
    for (int f = 0; f < 3; ++f) {
        SolverConfig cfg;
        cfg.formulation = kAll[f];
        cfg.eps = 1.5 / n;
        cfg.tau = std::pow(cfg.eps, 4);
        cfg.max_iters = 2000;
        cfg.tol_rel = 0.0;  // fixed budget: every formulation gets all 2000 iterations
        cfg.record_trace = false;
        ex.runs[f] = reconstruct(stack, cfg);
    }
    ex.seconds = seconds_since(t0);
    ex.done = true;
    return ex;
}

bool criterion1() {
    const auto& ex = example1();
    report_runs(ex.runs);
    note("total " + fmt("%.1f s", ex.seconds));
    const bool ordered = strictly_ordered(ex.runs);
    const bool threshold = ex.runs[2].sigma_gc < kThreshold;
    const bool fast = ex.seconds < 300.0;
    return verdict(1, ordered && threshold && fast,
                   std::string("sphere N=32 orderings ") + (ordered ? "hold" : "violated") +
                       ", elastica sigma_GC " + fmt("%.4f", ex.runs[2].sigma_gc) + " vs " +
                       fmt("%.4f", kThreshold) + ", runtime " + fmt("%.0f s", ex.seconds) + " of 300 s");
}

bool criterion2() {
    const int n = 128;
    const auto stack = example_branching_stack(n);
    std::string planes;
    for (const auto& s : stack.slices) planes += " " + std::to_string(s.plane);
    note(std::to_string(stack.slices.size()) + " slices at planes" + planes);
    Outcome o[3];
    const auto t0 = Clock::now();
    for (int f = 0; f < 3; ++f) {
        SolverConfig cfg;
        cfg.formulation = kAll[f];
        cfg.eps = 1.5 / n;
        cfg.tau = kAll[f] == Formulation::elastica ? 10 * std::pow(cfg.eps, 4) : std::pow(cfg.eps, 3);
        cfg.max_iters = 2000;
        cfg.tol_rel = 0.0;
        cfg.record_trace = false;
        o[f] = reconstruct(stack, cfg);
    }
    const double secs = seconds_since(t0);
    report_runs(o);
    const bool ordered = strictly_ordered(o);
    const bool fast = secs < 1800.0;
    return verdict(2, ordered && fast,
                   std::string("branching N=128 orderings ") + (ordered ? "hold" : "violated") +
                       " (E<W on GC " + (o[2].sigma_gc < o[1].sigma_gc ? "yes" : "no") + ", W<P on GC " +
                       (o[1].sigma_gc < o[0].sigma_gc ? "yes" : "no") + ", E<W on MC " +
                       (o[2].sigma_mc < o[1].sigma_mc ? "yes" : "no") + ", W<P on MC " +
                       (o[1].sigma_mc < o[0].sigma_mc ? "yes" : "no") + "), runtime " + fmt("%.0f s", secs) +
                       " of 1800 s");
}

bool criterion3() {
    const int n = 32;
    SolverConfig cfg;
    cfg.eps = 1.5 / n;
    cfg.tau = std::pow(cfg.eps, 4);
    cfg.max_iters = 600;
    cfg.tol_rel = 1e-4;
    const auto r = run(problem_from_stack(example_sphere_stack(n), cfg), cfg);
    const double last = r.trace.empty() ? std::numeric_limits<double>::quiet_NaN() : r.trace.back().rel_err;
    const bool pass = r.termination_reason == Termination::rel_tol && r.iters_done <= 600;
    return verdict(3, pass,
                   "elastica stopped by " + std::string(to_string(r.termination_reason)) + " after " +
                       std::to_string(r.iters_done) + " iterations, last rel_err " + fmt("%.3e", last));
}

bool criterion4() {
    double ms[2];
    const int sizes[2] = {32, 64};
    for (int s = 0; s < 2; ++s) {
        const int n = sizes[s];
        SolverConfig cfg;
        cfg.eps = 1.5 / n;
        cfg.tau = std::pow(cfg.eps, 4);
        const auto problem = problem_from_stack(example_sphere_stack(n), cfg);
        ms[s] = mean(step_times_ms(problem, cfg, 50, 3));
        note("N=" + std::to_string(n) + ": " + fmt("%.3f ms", ms[s]) + " per iteration");
    }
    const double ratio = ms[1] / ms[0];
    const double model = (64.0 * 64 * 64 * std::log(64.0)) / (32.0 * 32 * 32 * std::log(32.0));
    note("N^3 log N predicts " + fmt("%.2f", model));
    return verdict(4, ratio >= 6.0 && ratio <= 12.0, "time ratio N=64/N=32 " + fmt("%.2f", ratio) + " in [6, 12]");
}

bool criterion5() {
    double worst = 0.0;
    {
        const auto g = GridSpec::cube(8);
        auto plan = std::make_shared<const SpectralPlan>(g);
        const ts::DenseFourier F(g);
        const auto u = ts::random_field(g, 21, -0.2, 1.2);
        const ObstaclePair box{ts::random_field(g, 30, 0.0, 0.3), ts::random_field(g, 31, 0.7, 1.0)};
        for (auto scheme : {UpdateScheme::printed, UpdateScheme::gradient}) {
            for (auto f : kAll) {
                SolverConfig c;
                c.formulation = f;
                c.eps = 0.2;
                c.tau = 1e-3;
                c.scheme = scheme;
                const double d = ts::max_abs_diff(pgdm_step(u, box, c, plan), ts::dense_pgdm_step(F, u, box, c));
                note(std::string("PGDM ") + to_string(f) + "/" + to_string(scheme) + " on 8^3: " + fmt("%.2e", d));
                worst = std::max(worst, d);
            }
        }
    }
    {
        const auto g = GridSpec::cube(6);
        auto plan = std::make_shared<const SpectralPlan>(g);
        const ts::DenseFourier F(g);
        AdmmState s;
        s.u = ts::random_field(g, 50, -0.2, 1.2);
        s.w = VectorField3D(ts::random_field(g, 51, -1, 1), ts::random_field(g, 52, -1, 1), ts::random_field(g, 53, -1, 1));
        s.lambda = VectorField3D(ts::random_field(g, 54, -1, 1), ts::random_field(g, 55, -1, 1),
                                 ts::random_field(g, 56, -1, 1));
        const ObstaclePair box{ts::random_field(g, 60, 0.0, 0.3), ts::random_field(g, 61, 0.7, 1.0)};
        for (auto scheme : {UpdateScheme::printed, UpdateScheme::gradient}) {
            SolverConfig c;
            c.method = Method::admm;
            c.eps = 0.25;
            c.tau = 1e-3;
            c.rho = 2.5;
            c.scheme = scheme;
            const auto fast = admm_step(s, box, c, plan);
            const auto ref = ts::dense_admm_step(F, s, box, c);
            double d = ts::max_abs_diff(fast.u, ref.u);
            for (int k = 0; k < 3; ++k) {
                d = std::max({d, ts::max_abs_diff(fast.w[k], ref.w[k]), ts::max_abs_diff(fast.lambda[k], ref.lambda[k])});
            }
            note(std::string("ADMM ") + to_string(scheme) + " on 6^3: " + fmt("%.2e", d));
            worst = std::max(worst, d);
        }
    }
    return verdict(5, worst < 1e-10, "dense transcription max abs diff " + fmt("%.2e", worst) + " < 1e-10");
}

bool criterion6() {
    const auto g = GridSpec::cube(16);
    const SpectralPlan plan(g);
    const double eps = 1.5 / 16, t = 1e-5;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto u = ts::smooth_random_field(g, 1000 + s, 0.5, 0.8, 3, 8);
        const auto v = ts::smooth_random_field(g, 2000 + s, 0.0, 1.0, 3, 8);
        const auto up = field_axpy(t, v, u), um = field_axpy(-t, v, u);
        for (auto f : kAll) {
            const double fd = (energy_for(plan, up, eps, f).total - energy_for(plan, um, eps, f).total) / (2 * t);
            const double an = inner(energy_gradient(plan, u, eps, f), v);
            worst = std::max(worst, std::abs(fd - an) / std::abs(an));
        }
    }
    return verdict(6, worst < 1e-3, "worst relative gap to central differences over 20 fields x 3 energies " +
                                        fmt("%.2e", worst) + " < 1e-3");
}

bool criterion7() {
    const double cw = ts::modica_mortola_constant();
    note("c_W by Simpson quadrature " + fmt("%.10f", cw));
    const int n = 128;
    const double r = 0.25, eps = 1.5 / n;
    const auto g = GridSpec::cube(n);
    const SpectralPlan plan(g);
    ScalarField3D u(g);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const auto x = g.center(i, j, k);
                u.at(i, j, k) = profile_q((std::hypot(x[0] - 0.5, x[1] - 0.5, x[2] - 0.5) - r) / eps);
            }
    const double target = (1.0 / 6.0) * 4.0 * ts::kPi * r * r;
    const double p = energy_perimeter(plan, u, eps);
    const auto uv = init_phase_field(gen_sphere(n, r, {0.5, 0.5, 0.5}), PhaseFieldParams(eps));
    const double pv = energy_perimeter(plan, uv, eps);
    note("exact ball distance: P = " + fmt("%.6f", p) + ", ratio " + fmt("%.4f", p / target));
    note("voxelised ball distance transform: P = " + fmt("%.6f", pv) + ", ratio " + fmt("%.4f", pv / target));
    const bool pass = std::abs(cw - 1.0 / 6.0) < 1e-6 && std::abs(p - target) < 0.1 * target;
    return verdict(7, pass, "P_eps / ((1/6) 4 pi r^2) = " + fmt("%.4f", p / target) + " within 10%, c_W = 1/6 to " +
                                fmt("%.1e", std::abs(cw - 1.0 / 6.0)));
}

bool criterion8() {
    bool ok = true;
    const auto sphere = ts::icosphere(3);
    const auto adj = build_adjacency(sphere);
    const auto kg = gaussian_curvature(sphere, adj);
    double mean_kg = 0.0, total = 0.0;
    std::size_t used = 0;
    for (std::size_t v = 0; v < kg.values.size(); ++v) {
        if (!kg.included[v]) continue;
        mean_kg += kg.values[v];
        total += kg.values[v] * kg.areas[v];
        ++used;
    }
    mean_kg /= static_cast<double>(used);
    ok = ok && std::abs(mean_kg - 1.0) < 0.05 && std::abs(total - 4 * ts::kPi) < 0.01 * 4 * ts::kPi;
    note("unit icosphere: mean kappa_G " + fmt("%.5f", mean_kg) + ", Gauss-Bonnet total / 4 pi " +
         fmt("%.8f", total / (4 * ts::kPi)));

    const auto patch = ts::planar_patch(6, 1.0);
    const auto padj = build_adjacency(patch);
    const auto pg = gaussian_curvature(patch, padj), pm = mean_curvature(patch, padj);
    double flat = 0.0;
    for (std::size_t v = 0; v < pg.values.size(); ++v)
        if (pg.included[v]) flat = std::max({flat, std::abs(pg.values[v]), std::abs(pm.values[v])});
    ok = ok && flat == 0.0;
    note("flat patch: largest |kappa| " + fmt("%.1e", flat));

    const double s = 3.7;
    const auto big = ts::scaled(sphere, s);
    const auto kgs = gaussian_curvature(big, adj);
    double scale_err = 0.0;
    for (std::size_t v = 0; v < kg.values.size(); ++v) {
        scale_err = std::max(scale_err, std::abs(kgs.values[v] * s * s - kg.values[v]) / std::abs(kg.values[v]));
    }
    ok = ok && scale_err < 1e-9;
    note("scale law: worst relative error " + fmt("%.1e", scale_err));
    return verdict(8, ok, "icosphere, Gauss-Bonnet, flat patch and scale-law oracles");
}

bool criterion9() {
    const auto& ex = example1();
    bool ok = true;
    for (int f = 0; f < 3; ++f) {
        note(std::string(to_string(kAll[f])) + ": " + std::to_string(ex.runs[f].iters) + " projected iterates " +
             (ex.runs[f].in_box ? "inside" : "OUTSIDE") + " the obstacle box");
        ok = ok && ex.runs[f].in_box;
    }
    return verdict(9, ok, "lower <= u <= upper at every voxel of every projected Example-1 iterate");
}

bool criterion10() {
    SweepSettings s;
    s.rho = range_grid(0.5, 10.0, 0.5);
    s.eps_n = range_grid(1.5, 3.0, 0.1);
    s.tau_rule = "eps^3";
    s.criterion = kThreshold;
    s.max_iters = 400;
    s.check_every = 20;
    s.stop_on_pass = true;
    const auto t0 = Clock::now();
    const auto cells = sweep_admm(example_sphere_stack(32), s);
    write_sweep_csv("acceptance_sweep.csv", cells, s.tau_rule);
    std::size_t passed = 0;
    for (double en : s.eps_n) {
        std::string row;
        for (const auto& c : cells)
            if (c.eps_n == en) row += c.pass ? '#' : '.';
        note("epsN " + fmt("%.1f", en) + "  " + row);
    }
    for (const auto& c : cells) passed += c.pass;
    note("columns are rho 0.5 .. 10 in steps of 0.5; map written to acceptance_sweep.csv; " +
         fmt("%.0f s", seconds_since(t0)));
    return verdict(10, passed > 0, "ADMM sweep pass region has " + std::to_string(passed) + " of " +
                                       std::to_string(cells.size()) + " cells");
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7, criterion8,
                                                      criterion9, criterion10};
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failed = 0;
    for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) {
        if (!selected.empty() && !selected.count(id)) continue;
        try {
            if (!criteria[id - 1]()) ++failed;
        } catch (const std::exception& e) {
            verdict(id, false, std::string("threw: ") + e.what());
            ++failed;
        }
    }
    return failed == 0 ? 0 : 1;
}
