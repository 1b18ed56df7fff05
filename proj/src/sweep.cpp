#include "pfsurf/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pfsurf/curvature.hpp"
#include "pfsurf/io.hpp"
#include "pfsurf/mesh.hpp"

namespace pfsurf {

std::vector<double> range_grid(double lo, double hi, double step) {
    if (!(step > 0) || hi < lo) throw ValidationError("range needs lo <= hi and step > 0");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    // Multiply instead of accumulating so 0.1 steps land on clean decimals.
    for (long i = 0; i <= n; ++i) out.push_back(std::round((lo + i * step) * 1e12) / 1e12);
    return out;
}

std::vector<double> parse_range(const std::string& text, const std::string& what) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        const auto piece = text.substr(start, colon == std::string::npos ? colon : colon - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(piece, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (piece.empty() || used != piece.size()) {
            throw ValidationError("malformed " + what + " range '" + text + "'");
        }
        parts.push_back(v);
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw ValidationError("malformed " + what + " range '" + text + "'");
    try {
        return range_grid(parts[0], parts[1], parts[2]);
    } catch (const ValidationError& e) {
        throw ValidationError(what + " range '" + text + "': " + e.what());
    }
}

namespace {

void check_iterate(SweepCell& cell, const ScalarField3D& u, int iter, double criterion) {
    try {
        const auto mesh = extract_isosurface(u);
        if (mesh.empty()) return;
        const double s = curvature_report(mesh).sigma_gc;
        if (!std::isfinite(s)) return;
        if (s < cell.sigma_gc_best) {
            cell.sigma_gc_best = s;
            cell.best_iter = iter;
        }
        if (s < criterion) cell.pass = true;
    } catch (const NonManifoldError&) {
        if (cell.note.empty()) cell.note = "non-manifold mesh at iteration " + std::to_string(iter);
    }
}

// Thrown from the observer to end a cell early once it has passed.
struct CellDone {};

}  // namespace

std::vector<SweepCell> sweep_admm(const SliceStack& stack, const SweepSettings& s,
                                  const SweepProgress& progress) {
    if (s.rho.empty() || s.eps_n.empty()) throw ValidationError("sweep grids must be non-empty");
    if (s.check_every < 1) throw ValidationError("sweep check interval must be >= 1");
    const int n = std::max({stack.grid.nx, stack.grid.ny, stack.grid.nz});
    std::vector<SweepCell> cells;
    const std::size_t total = s.rho.size() * s.eps_n.size();
    for (double en : s.eps_n) {
        for (double rho : s.rho) {
            SweepCell cell;
            cell.rho = rho;
            cell.eps_n = en;
            SolverConfig cfg;
            cfg.formulation = Formulation::elastica;
            cfg.method = Method::admm;
            cfg.scheme = s.scheme;
            cfg.eps = en / n;
            cfg.tau = eval_tau_rule(s.tau_rule, cfg.eps);
            cfg.rho = rho;
            cfg.max_iters = s.max_iters;
            cfg.tol_rel = 0.0;
            cfg.record_trace = false;
            try {
                const auto problem = problem_from_stack(stack, cfg, s.alpha);
                const auto observe = [&](const IterationView& v) {
                    if (v.iter % s.check_every != 0 && v.iter != s.max_iters) return;
                    check_iterate(cell, project_obstacle(*v.next, problem.obstacles), v.iter,
                                  s.criterion);
                    if (cell.pass && s.stop_on_pass) throw CellDone{};
                };
                run(problem, cfg, observe);
            } catch (const CellDone&) {
                cell.note = "stopped at first pass";
            } catch (const DivergenceError& e) {
                cell.pass = false;
                cell.note = "diverged at iteration " + std::to_string(e.iteration());
            }
            cells.push_back(cell);
            if (progress) progress(cells.back(), cells.size(), total);
        }
    }
    return cells;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCell>& cells,
                     const std::string& tau_rule) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    out << "rho,epsN,tau_rule,pass,sigma_gc_best\n";
    char buf[128];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,", c.rho, c.eps_n);
        out << buf << tau_rule << ',' << (c.pass ? 1 : 0) << ',';
        if (std::isfinite(c.sigma_gc_best)) {
            std::snprintf(buf, sizeof buf, "%.17g", c.sigma_gc_best);
            out << buf;
        } else {
            out << "inf";
        }
        out << '\n';
    }
}

}  // namespace pfsurf
