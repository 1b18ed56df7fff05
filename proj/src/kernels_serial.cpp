#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace pfsurf::kernels::serial {
namespace {

struct SerialLoop {
    template <class Body>
    void operator()(std::size_t n, Body&& body) const {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
};

constexpr SerialLoop loop{};

}  // namespace

void clamp(std::span<double> out, std::span<const double> in, std::span<const double> lower,
           std::span<const double> upper) {
    detail::clamp(loop, out, in, lower, upper);
}

double sum_sq(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

SquareSums change_sums(std::span<const double> next, std::span<const double> prev) {
    SquareSums s;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double d = next[i] - prev[i];
        s.diff += d * d;
        s.base += prev[i] * prev[i];
    }
    return s;
}

double sum_prod(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
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

}  // namespace pfsurf::kernels::serial
