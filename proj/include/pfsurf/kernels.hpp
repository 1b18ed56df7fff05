#pragma once

// Hot elementwise loops of the solvers. Every kernel has a plain serial
// reference (namespace serial) and an OpenMP version (namespace omp) with the
// same signature; the unqualified entry points dispatch on the active thread
// count so that `threads == 1` always runs the serial reference.

#include <complex>
#include <span>

namespace pfsurf {

/// Sets the number of worker threads used by the OpenMP kernels (>= 1).
void set_num_threads(int n);
int num_threads() noexcept;

namespace kernels {

using cplx = std::complex<double>;

/// Coefficients of the explicit (nonlinear) part of one semi-implicit step.
struct StepCoefficients {
    double eps = 0.0;
    double tau = 0.0;
    /// Elastica only: use the signs of -grad E instead of the printed update.
    bool gradient_consistent = false;
};

/// Coefficients of the ADMM u-subproblem right-hand side.
struct AdmmCoefficients {
    double eps = 0.0;
    double tau = 0.0;
    double rho = 0.0;
    /// Use the signs of the subproblem gradients instead of the printed updates.
    bool gradient_consistent = false;
};

/// sum (next - prev)^2 and sum prev^2 from one pass.
struct SquareSums {
    double diff = 0.0;
    double base = 0.0;
};

#define PFSURF_KERNEL_DECLS                                                                \
    void clamp(std::span<double> out, std::span<const double> in,                          \
               std::span<const double> lower, std::span<const double> upper);              \
    double sum_sq(std::span<const double> a);                                              \
    double sum_sq_diff(std::span<const double> a, std::span<const double> b);              \
    SquareSums change_sums(std::span<const double> next, std::span<const double> prev);   \
    double sum_prod(std::span<const double> a, std::span<const double> b);                 \
    double max_abs(std::span<const double> a);                                             \
    void scale_spectrum(std::span<cplx> spec, std::span<const double> symbol);             \
    void combine_spectra(std::span<cplx> a, std::span<const cplx> b,                       \
                         std::span<const double> lap, std::span<const double> precond);    \
    void perimeter_rhs(std::span<double> out, std::span<const double> u, StepCoefficients c); \
    void elastica_rhs(std::span<double> explicit_part, std::span<double> laplace_part,     \
                      std::span<const double> u, std::span<const double> lap_u,            \
                      StepCoefficients c);                                                 \
    void willmore_rhs(std::span<double> explicit_part, std::span<double> laplace_part,     \
                      std::span<const double> u, std::span<const double> lap_u,            \
                      StepCoefficients c);                                                 \
    void admm_u_rhs(std::span<double> out, std::span<const double> u,                      \
                    std::span<const double> div_w, AdmmCoefficients c);                    \
    void admm_w_rhs(std::span<double> out, std::span<const double> w,                      \
                    std::span<const double> lap_w, std::span<const double> grad_u,         \
                    std::span<const double> lambda, std::span<const double> u_next,        \
                    AdmmCoefficients c);                                                   \
    void admm_w_exact_rhs(std::span<double> out, std::span<const double> grad_w1,         \
                          std::span<const double> grad_u, std::span<const double> lambda,  \
                          AdmmCoefficients c);                                             \
    void well_d1_field(std::span<double> out, std::span<const double> u);                  \
    void multiplier_update(std::span<double> lambda, std::span<const double> grad_u,       \
                           std::span<const double> w, double rho);

namespace serial {
PFSURF_KERNEL_DECLS
}

namespace omp {
PFSURF_KERNEL_DECLS
}

PFSURF_KERNEL_DECLS

#undef PFSURF_KERNEL_DECLS

}  // namespace kernels
}  // namespace pfsurf
