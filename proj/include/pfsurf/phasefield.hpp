#pragma once

#include "pfsurf/grid.hpp"

namespace pfsurf {

/// Diffuse-interface width epsilon and fattening exponent alpha (h = eps^alpha).
struct PhaseFieldParams {
    double epsilon = 0.0;
    double alpha = 0.5;

    PhaseFieldParams() = default;
    PhaseFieldParams(double eps, double alpha_ = 0.5);
    double thickness() const;
};

/// Values of the double-well W(u) = u^2 (1-u)^2 / 2 and its first two derivatives.
struct DoubleWell {
    double w = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
};

inline double well(double u) noexcept {
    const double v = u * (1.0 - u);
    return 0.5 * v * v;
}
inline double well_d1(double u) noexcept { return u * (u - 1.0) * (2.0 * u - 1.0); }
inline double well_d2(double u) noexcept { return 1.0 - 6.0 * u + 6.0 * u * u; }

inline DoubleWell double_well(double u) noexcept { return {well(u), well_d1(u), well_d2(u)}; }

/// Logistic profile q(x) = 1/(1+e^x), the heteroclinic solution of q' = -sqrt(2W(q)).
double profile_q(double x) noexcept;

/// Lower/upper obstacle fields. Lower <= upper everywhere.
struct ObstaclePair {
    ScalarField3D lower;
    ScalarField3D upper;

    /// Bounds (0, 1) everywhere.
    static ObstaclePair trivial(const GridSpec& spec);
    const GridSpec& spec() const noexcept { return lower.spec(); }
    /// Throws InfeasibleConstraintsError naming the first crossing voxel.
    void validate() const;
};

/// u0 = q(d(x, E0)/eps) with d the signed distance to E0 (negative inside).
ScalarField3D init_phase_field(const BinaryVolume& e0, const PhaseFieldParams& params);

/// Pointwise max(min(u, upper), lower).
ScalarField3D project_obstacle(const ScalarField3D& u, const ObstaclePair& obst);

}  // namespace pfsurf
