#include "pfsurf/energies.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pfsurf/kernels.hpp"
#include "pfsurf/phasefield.hpp"

namespace pfsurf {

const char* to_string(Formulation f) noexcept {
    switch (f) {
        case Formulation::perimeter: return "perimeter";
        case Formulation::willmore: return "willmore";
        case Formulation::elastica: return "elastica";
    }
    return "?";
}

Formulation parse_formulation(const std::string& s) {
    if (s == "perimeter") return Formulation::perimeter;
    if (s == "willmore") return Formulation::willmore;
    if (s == "elastica") return Formulation::elastica;
    throw ValidationError("unknown formulation '" + s + "'");
}

namespace {

// sum_x |grad u|^2 by Parseval over the half spectrum (= -sum_x u Lap u).
double dirichlet_sum(const SpectralPlan& plan, const std::vector<cplx>& spec) {
    const auto& k2 = plan.k_squared();
    const int nx = plan.spec().nx;
    const int hx = nx / 2 + 1;
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const int kx = static_cast<int>(i % hx);
        // Interior kx columns stand for both +kx and -kx.
        const bool self_conjugate = kx == 0 || (nx % 2 == 0 && kx == nx / 2);
        const double w = self_conjugate ? 1.0 : 2.0;
        s += w * four_pi2 * k2[i] * std::norm(spec[i]);
    }
    return s / static_cast<double>(plan.spec().size());
}

// mu = eps Lap u - W'(u)/eps
ScalarField3D chemical_potential(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    auto mu = laplacian(plan, u);
    for (std::size_t i = 0; i < u.size(); ++i) mu[i] = eps * mu[i] - well_d1(u[i]) / eps;
    return mu;
}

}  // namespace

double energy_perimeter(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    require_same_spec(plan.spec(), u.spec(), "energy_perimeter");
    std::vector<cplx> spec(plan.spectrum_size());
    plan.forward(u.values(), spec);
    double potential = 0.0;
    for (double v : u.values()) potential += well(v);
    const double dv = u.spec().voxel_volume();
    return (0.5 * eps * dirichlet_sum(plan, spec) + potential / eps) * dv;
}

double energy_willmore(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    require_same_spec(plan.spec(), u.spec(), "energy_willmore");
    const auto mu = chemical_potential(plan, u, eps);
    return kernels::sum_sq(mu.values()) * u.spec().voxel_volume() / (2.0 * eps);
}

EnergyBreakdown energy_elastica(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    EnergyBreakdown e;
    e.perimeter_term = energy_perimeter(plan, u, eps);
    e.willmore_term = energy_willmore(plan, u, eps);
    e.total = e.perimeter_term + e.willmore_term;
    return e;
}

EnergyBreakdown energy_for(const SpectralPlan& plan, const ScalarField3D& u, double eps,
                           Formulation f) {
    auto e = energy_elastica(plan, u, eps);
    if (f == Formulation::perimeter) e.total = e.perimeter_term;
    if (f == Formulation::willmore) e.total = e.willmore_term;
    return e;
}

ScalarField3D grad_perimeter(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    auto g = laplacian(plan, u);
    for (std::size_t i = 0; i < u.size(); ++i) g[i] = well_d1(u[i]) / eps - eps * g[i];
    return g;
}

ScalarField3D grad_willmore(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    const auto mu = chemical_potential(plan, u, eps);
    auto g = laplacian(plan, mu);
    const double inv_eps2 = 1.0 / (eps * eps);
    for (std::size_t i = 0; i < u.size(); ++i) g[i] -= inv_eps2 * well_d2(u[i]) * mu[i];
    return g;
}

ScalarField3D grad_elastica(const SpectralPlan& plan, const ScalarField3D& u, double eps) {
    auto g = grad_perimeter(plan, u, eps);
    const auto gw = grad_willmore(plan, u, eps);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += gw[i];
    return g;
}

ScalarField3D energy_gradient(const SpectralPlan& plan, const ScalarField3D& u, double eps,
                              Formulation f) {
    switch (f) {
        case Formulation::perimeter: return grad_perimeter(plan, u, eps);
        case Formulation::willmore: return grad_willmore(plan, u, eps);
        case Formulation::elastica: return grad_elastica(plan, u, eps);
    }
    return grad_elastica(plan, u, eps);
}

}  // namespace pfsurf
