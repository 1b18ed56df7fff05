#pragma once

// Shared loop bodies for the serial and OpenMP kernel sets. `Loop` is a
// callable taking (n, body) that runs body(i) for i in [0, n).

#include <cmath>
#include <cstddef>
#include <span>

#include "pfsurf/kernels.hpp"
#include "pfsurf/phasefield.hpp"

namespace pfsurf::kernels::detail {

template <class Loop>
void clamp(Loop loop, std::span<double> out, std::span<const double> in,
           std::span<const double> lower, std::span<const double> upper) {
    loop(out.size(), [&](std::size_t i) {
        const double v = in[i] < upper[i] ? in[i] : upper[i];
        out[i] = v > lower[i] ? v : lower[i];
    });
}

template <class Loop>
void scale_spectrum(Loop loop, std::span<cplx> spec, std::span<const double> symbol) {
    loop(spec.size(), [&](std::size_t i) { spec[i] *= symbol[i]; });
}

// a <- precond * (a + lap * b)
template <class Loop>
void combine_spectra(Loop loop, std::span<cplx> a, std::span<const cplx> b,
                     std::span<const double> lap, std::span<const double> precond) {
    loop(a.size(), [&](std::size_t i) { a[i] = precond[i] * (a[i] + lap[i] * b[i]); });
}

template <class Loop>
void perimeter_rhs(Loop loop, std::span<double> out, std::span<const double> u,
                   StepCoefficients c) {
    const double a = c.tau / c.eps;
    loop(out.size(), [&](std::size_t i) { out[i] = u[i] - a * well_d1(u[i]); });
}

template <class Loop>
void elastica_rhs(Loop loop, std::span<double> explicit_part, std::span<double> laplace_part,
                  std::span<const double> u, std::span<const double> lap_u, StepCoefficients c) {
    const double a = c.tau / c.eps;
    const double b = c.tau / (c.eps * c.eps * c.eps);
    // The printed scheme carries the opposite sign on the last two terms.
    const double s = c.gradient_consistent ? 1.0 : -1.0;
    loop(u.size(), [&](std::size_t i) {
        const double w1 = well_d1(u[i]);
        const double w2 = well_d2(u[i]);
        explicit_part[i] = u[i] - a * w1 + s * (a * w2 * lap_u[i] - b * w1 * w2);
        laplace_part[i] = a * w1;
    });
}

template <class Loop>
void willmore_rhs(Loop loop, std::span<double> explicit_part, std::span<double> laplace_part,
                  std::span<const double> u, std::span<const double> lap_u, StepCoefficients c) {
    const double a = c.tau / c.eps;
    const double b = c.tau / (c.eps * c.eps * c.eps);
    loop(u.size(), [&](std::size_t i) {
        const double w1 = well_d1(u[i]);
        const double w2 = well_d2(u[i]);
        explicit_part[i] = u[i] + a * w2 * lap_u[i] - b * w1 * w2;
        laplace_part[i] = a * w1;
    });
}

template <class Loop>
void admm_u_rhs(Loop loop, std::span<double> out, std::span<const double> u,
                std::span<const double> div_w, AdmmCoefficients c) {
    const double inv_eps = 1.0 / c.eps;
    // The printed update adds W'W''/eps^3; the u-subproblem gradient subtracts it.
    const double inv_eps3 = (c.gradient_consistent ? -1.0 : 1.0) * inv_eps * inv_eps * inv_eps;
    loop(out.size(), [&](std::size_t i) {
        const double w1 = well_d1(u[i]);
        const double w2 = well_d2(u[i]);
        out[i] = u[i] + c.tau * (-inv_eps * w1 + inv_eps * div_w[i] * w2 + inv_eps3 * w1 * w2);
    });
}

template <class Loop>
void admm_w_rhs(Loop loop, std::span<double> out, std::span<const double> w,
                std::span<const double> lap_w, std::span<const double> grad_u,
                std::span<const double> lambda, std::span<const double> u_next,
                AdmmCoefficients c) {
    const double a = c.tau / c.eps;
    const double inv_rho = 1.0 / c.rho;
    loop(out.size(), [&](std::size_t i) {
        out[i] = w[i] + a * well_d1(u_next[i]) * lap_w[i] +
                 c.tau * c.rho * (w[i] - grad_u[i] - inv_rho * lambda[i]);
    });
}

// Right-hand side of the exact w-subproblem solve:
// rho grad u_{k+1} + lambda_k - (1/eps) grad W'(u_{k+1}).
template <class Loop>
void admm_w_exact_rhs(Loop loop, std::span<double> out, std::span<const double> grad_w1,
                      std::span<const double> grad_u, std::span<const double> lambda,
                      AdmmCoefficients c) {
    const double inv_eps = 1.0 / c.eps;
    loop(out.size(), [&](std::size_t i) {
        out[i] = c.rho * grad_u[i] + lambda[i] - inv_eps * grad_w1[i];
    });
}

template <class Loop>
void well_d1_field(Loop loop, std::span<double> out, std::span<const double> u) {
    loop(out.size(), [&](std::size_t i) { out[i] = well_d1(u[i]); });
}

template <class Loop>
void multiplier_update(Loop loop, std::span<double> lambda, std::span<const double> grad_u,
                       std::span<const double> w, double rho) {
    loop(lambda.size(), [&](std::size_t i) { lambda[i] += rho * (grad_u[i] - w[i]); });
}

}  // namespace pfsurf::kernels::detail
