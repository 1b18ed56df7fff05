#pragma once

#include "pfsurf/grid.hpp"
#include "pfsurf/spectral.hpp"

namespace pfsurf {

enum class Formulation { perimeter, willmore, elastica };

const char* to_string(Formulation f) noexcept;
Formulation parse_formulation(const std::string& s);

struct EnergyBreakdown {
    double perimeter_term = 0.0;
    double willmore_term = 0.0;
    double total = 0.0;
};

// All derivatives are spectral on the periodic grid and integrals use the
// midpoint rule, so energies and their gradients are exactly consistent.

/// int (eps/2)|grad u|^2 + W(u)/eps
double energy_perimeter(const SpectralPlan& plan, const ScalarField3D& u, double eps);
/// (1/(2 eps)) int (eps Lap u - W'(u)/eps)^2
double energy_willmore(const SpectralPlan& plan, const ScalarField3D& u, double eps);
EnergyBreakdown energy_elastica(const SpectralPlan& plan, const ScalarField3D& u, double eps);

/// Both terms, with `total` set to the objective of `f`.
EnergyBreakdown energy_for(const SpectralPlan& plan, const ScalarField3D& u, double eps,
                           Formulation f);

/// W'(u)/eps - eps Lap u
ScalarField3D grad_perimeter(const SpectralPlan& plan, const ScalarField3D& u, double eps);
/// Lap mu - W''(u) mu / eps^2 with mu = eps Lap u - W'(u)/eps
ScalarField3D grad_willmore(const SpectralPlan& plan, const ScalarField3D& u, double eps);
ScalarField3D grad_elastica(const SpectralPlan& plan, const ScalarField3D& u, double eps);

ScalarField3D energy_gradient(const SpectralPlan& plan, const ScalarField3D& u, double eps,
                              Formulation f);

}  // namespace pfsurf
