#include "pfsurf/phasefield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfsurf/distance.hpp"
#include "pfsurf/kernels.hpp"

namespace pfsurf {

PhaseFieldParams::PhaseFieldParams(double eps, double alpha_) : epsilon(eps), alpha(alpha_) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
}

double PhaseFieldParams::thickness() const { return std::pow(epsilon, alpha); }

double profile_q(double x) noexcept {
    // Beyond |x| = 50 the profile is within 2e-22 of its limit.
    x = std::clamp(x, -50.0, 50.0);
    return 1.0 / (1.0 + std::exp(x));
}

ObstaclePair ObstaclePair::trivial(const GridSpec& spec) {
    return {ScalarField3D(spec, 0.0), ScalarField3D(spec, 1.0)};
}

void ObstaclePair::validate() const {
    require_same_spec(lower.spec(), upper.spec(), "obstacle bounds");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) {
            const auto c = lower.spec().coords(i);
            throw InfeasibleConstraintsError(
                "obstacle lower bound exceeds upper bound at voxel (" + std::to_string(c[0]) +
                "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")");
        }
    }
}

ScalarField3D init_phase_field(const BinaryVolume& e0, const PhaseFieldParams& params) {
    if (e0.empty_set() || e0.full_set()) {
        throw DegenerateInputError("initial set E0 must be neither empty nor full");
    }
    const auto d = signed_distance(e0);
    const double inv_eps = 1.0 / params.epsilon;
    ScalarField3D u(e0.spec());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = profile_q(d[i] * inv_eps);
    return u;
}

ScalarField3D project_obstacle(const ScalarField3D& u, const ObstaclePair& obst) {
    require_same_spec(u.spec(), obst.spec(), "project_obstacle");
    obst.validate();
    ScalarField3D out(u.spec());
    kernels::clamp(out.values(), u.values(), obst.lower.values(), obst.upper.values());
    return out;
}

}  // namespace pfsurf
