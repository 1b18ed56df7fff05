#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_impl.hpp"

namespace pfsurf {
namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) {
    n = std::max(1, n);
    g_threads.store(n);
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
}

int num_threads() noexcept { return g_threads.load(); }

namespace kernels::omp {
namespace {

struct OmpLoop {
    template <class Body>
    void operator()(std::size_t n, Body&& body) const {
        const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    }
};

constexpr OmpLoop loop{};

std::int64_t ssize(std::span<const double> a) { return static_cast<std::int64_t>(a.size()); }

}  // namespace

void clamp(std::span<double> out, std::span<const double> in, std::span<const double> lower,
           std::span<const double> upper) {
    detail::clamp(loop, out, in, lower, upper);
}

double sum_sq(std::span<const double> a) {
    double s = 0.0;
    const auto n = ssize(a);
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::int64_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    const auto n = ssize(a);
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

SquareSums change_sums(std::span<const double> next, std::span<const double> prev) {
    double diff = 0.0, base = 0.0;
    const auto n = ssize(next);
#pragma omp parallel for schedule(static) reduction(+ : diff, base)
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = next[i] - prev[i];
        diff += d * d;
        base += prev[i] * prev[i];
    }
    return {diff, base};
}

double sum_prod(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    const auto n = ssize(a);
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::int64_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    const auto n = ssize(a);
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::int64_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

void scale_spectrum(std::span<cplx> spec, std::span<const double> symbol) {
    detail::scale_spectrum(loop, spec, symbol);
}

void combine_spectra(std::span<cplx> a, std::span<const cplx> b, std::span<const double> lap,
                     std::span<const double> precond) {
    detail::combine_spectra(loop, a, b, lap, precond);
}

void perimeter_rhs(std::span<double> out, std::span<const double> u, StepCoefficients c) {
    detail::perimeter_rhs(loop, out, u, c);
}

void elastica_rhs(std::span<double> explicit_part, std::span<double> laplace_part,
                  std::span<const double> u, std::span<const double> lap_u, StepCoefficients c) {
    detail::elastica_rhs(loop, explicit_part, laplace_part, u, lap_u, c);
}

void willmore_rhs(std::span<double> explicit_part, std::span<double> laplace_part,
                  std::span<const double> u, std::span<const double> lap_u, StepCoefficients c) {
    detail::willmore_rhs(loop, explicit_part, laplace_part, u, lap_u, c);
}

void admm_u_rhs(std::span<double> out, std::span<const double> u, std::span<const double> div_w,
                AdmmCoefficients c) {
    detail::admm_u_rhs(loop, out, u, div_w, c);
}

void admm_w_rhs(std::span<double> out, std::span<const double> w, std::span<const double> lap_w,
                std::span<const double> grad_u, std::span<const double> lambda,
                std::span<const double> u_next, AdmmCoefficients c) {
    detail::admm_w_rhs(loop, out, w, lap_w, grad_u, lambda, u_next, c);
}

void admm_w_exact_rhs(std::span<double> out, std::span<const double> grad_w1,
                      std::span<const double> grad_u, std::span<const double> lambda,
                      AdmmCoefficients c) {
    detail::admm_w_exact_rhs(loop, out, grad_w1, grad_u, lambda, c);
}

void well_d1_field(std::span<double> out, std::span<const double> u) {
    detail::well_d1_field(loop, out, u);
}

void multiplier_update(std::span<double> lambda, std::span<const double> grad_u,
                       std::span<const double> w, double rho) {
    detail::multiplier_update(loop, lambda, grad_u, w, rho);
}

}  // namespace kernels::omp

namespace kernels {

#define PFSURF_DISPATCH(name, ...) \
    return num_threads() > 1 ? omp::name(__VA_ARGS__) : serial::name(__VA_ARGS__)

void clamp(std::span<double> out, std::span<const double> in, std::span<const double> lower,
           std::span<const double> upper) {
    PFSURF_DISPATCH(clamp, out, in, lower, upper);
}
double sum_sq(std::span<const double> a) { PFSURF_DISPATCH(sum_sq, a); }
double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    PFSURF_DISPATCH(sum_sq_diff, a, b);
}
SquareSums change_sums(std::span<const double> next, std::span<const double> prev) {
    PFSURF_DISPATCH(change_sums, next, prev);
}
double sum_prod(std::span<const double> a, std::span<const double> b) {
    PFSURF_DISPATCH(sum_prod, a, b);
}
double max_abs(std::span<const double> a) { PFSURF_DISPATCH(max_abs, a); }
void scale_spectrum(std::span<cplx> spec, std::span<const double> symbol) {
    PFSURF_DISPATCH(scale_spectrum, spec, symbol);
}
void combine_spectra(std::span<cplx> a, std::span<const cplx> b, std::span<const double> lap,
                     std::span<const double> precond) {
    PFSURF_DISPATCH(combine_spectra, a, b, lap, precond);
}
void perimeter_rhs(std::span<double> out, std::span<const double> u, StepCoefficients c) {
    PFSURF_DISPATCH(perimeter_rhs, out, u, c);
}
void elastica_rhs(std::span<double> explicit_part, std::span<double> laplace_part,
                  std::span<const double> u, std::span<const double> lap_u, StepCoefficients c) {
    PFSURF_DISPATCH(elastica_rhs, explicit_part, laplace_part, u, lap_u, c);
}
void willmore_rhs(std::span<double> explicit_part, std::span<double> laplace_part,
                  std::span<const double> u, std::span<const double> lap_u, StepCoefficients c) {
    PFSURF_DISPATCH(willmore_rhs, explicit_part, laplace_part, u, lap_u, c);
}
void admm_u_rhs(std::span<double> out, std::span<const double> u, std::span<const double> div_w,
                AdmmCoefficients c) {
    PFSURF_DISPATCH(admm_u_rhs, out, u, div_w, c);
}
void admm_w_rhs(std::span<double> out, std::span<const double> w, std::span<const double> lap_w,
                std::span<const double> grad_u, std::span<const double> lambda,
                std::span<const double> u_next, AdmmCoefficients c) {
    PFSURF_DISPATCH(admm_w_rhs, out, w, lap_w, grad_u, lambda, u_next, c);
}
void admm_w_exact_rhs(std::span<double> out, std::span<const double> grad_w1,
                      std::span<const double> grad_u, std::span<const double> lambda,
                      AdmmCoefficients c) {
    PFSURF_DISPATCH(admm_w_exact_rhs, out, grad_w1, grad_u, lambda, c);
}
void well_d1_field(std::span<double> out, std::span<const double> u) {
    PFSURF_DISPATCH(well_d1_field, out, u);
}
void multiplier_update(std::span<double> lambda, std::span<const double> grad_u,
                       std::span<const double> w, double rho) {
    PFSURF_DISPATCH(multiplier_update, lambda, grad_u, w, rho);
}

#undef PFSURF_DISPATCH

}  // namespace kernels
}  // namespace pfsurf
