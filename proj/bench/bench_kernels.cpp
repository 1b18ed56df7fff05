// Serial reference kernels against their OpenMP versions, then whole solver
// iterations against N. Results go to stdout as CSV.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfsurf/kernels.hpp"
#include "pfsurf/solvers.hpp"
#include "pfsurf/synth.hpp"
#include "pfsurf/timing.hpp"

using namespace pfsurf;
namespace ks = pfsurf::kernels::serial;
namespace ko = pfsurf::kernels::omp;
using cplx = kernels::cplx;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / reps;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

void kernel_rows(int n, int threads, int reps) {
    const std::size_t m = static_cast<std::size_t>(n) * n * n;
    const auto u = random_values(m, 1, -0.2, 1.2), lap = random_values(m, 2, -1, 1);
    const auto lo = random_values(m, 3, 0.0, 0.3), hi = random_values(m, 4, 0.7, 1.0);
    const auto sym = random_values(m, 5, 0.0, 1.0);
    std::vector<double> out(m), out2(m);
    std::vector<cplx> spec(m, cplx(1.0, -1.0)), spec_b(m, cplx(0.5, 0.25));
    const kernels::StepCoefficients c{1.5 / n, std::pow(1.5 / n, 4), true};

    struct Row {
        const char* name;
        std::function<void()> serial, parallel;
    };
    const std::vector<Row> rows{
        {"clamp", [&] { ks::clamp(out, u, lo, hi); }, [&] { ko::clamp(out, u, lo, hi); }},
        {"elastica_rhs", [&] { ks::elastica_rhs(out, out2, u, lap, c); },
         [&] { ko::elastica_rhs(out, out2, u, lap, c); }},
        {"willmore_rhs", [&] { ks::willmore_rhs(out, out2, u, lap, c); },
         [&] { ko::willmore_rhs(out, out2, u, lap, c); }},
        {"perimeter_rhs", [&] { ks::perimeter_rhs(out, u, c); }, [&] { ko::perimeter_rhs(out, u, c); }},
        {"combine_spectra", [&] { ks::combine_spectra(spec, spec_b, sym, sym); },
         [&] { ko::combine_spectra(spec, spec_b, sym, sym); }},
        {"change_sums", [&] { (void)ks::change_sums(u, lap); }, [&] { (void)ko::change_sums(u, lap); }},
    };
    for (const auto& r : rows) {
        set_num_threads(1);
        const double ts = time_ms(r.serial, reps);
        set_num_threads(threads);
        const double tp = time_ms(r.parallel, reps);
        std::printf("kernel,%s,%d,%d,%.6f,%.6f,%.3f\n", r.name, n, threads, ts, tp, ts / tp);
    }
    set_num_threads(1);
}

void step_rows(int n, int threads, int iters) {
    SolverConfig cfg;
    cfg.eps = 1.5 / n;
    cfg.tau = std::pow(cfg.eps, 4);
    const auto problem = problem_from_stack(example_sphere_stack(n), cfg);
    set_num_threads(1);
    const double ts = mean(step_times_ms(problem, cfg, iters));
    set_num_threads(threads);
    const double tp = mean(step_times_ms(problem, cfg, iters));
    set_num_threads(1);
    std::printf("step,elastica_pgdm,%d,%d,%.6f,%.6f,%.3f\n", n, threads, ts, tp, ts / tp);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial against OpenMP kernels and per-iteration time against N"};
    std::vector<int> sizes{16, 32, 64};
    int threads = 4, reps = 20, iters = 20;
    app.add_option("--n", sizes, "Grid sizes")->delimiter(',');
    app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
    app.add_option("--reps", reps, "Repetitions per kernel")->check(CLI::PositiveNumber);
    app.add_option("--iters", iters, "Timed solver iterations per size")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::printf("kind,name,n,threads,serial_ms,omp_ms,speedup\n");
    for (int n : sizes) kernel_rows(n, threads, reps);
    for (int n : sizes) step_rows(n, threads, iters);
    return 0;
}
