#include "pfsurf/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfsurf/distance.hpp"

namespace pfsurf {

PlaneGeometry PlaneGeometry::of(const GridSpec& grid, int axis) {
    if (axis < 0 || axis > 2) throw ValidationError("slice axis must be 0, 1 or 2");
    const int ua = axis == 0 ? 1 : 0;
    const int va = axis == 2 ? 1 : 2;
    PlaneGeometry g;
    g.axis = axis;
    g.width = grid.count(ua);
    g.height = grid.count(va);
    g.spacing_u = grid.spacing(ua);
    g.spacing_v = grid.spacing(va);
    g.spacing_normal = grid.spacing(axis);
    g.depth = grid.count(axis);
    return g;
}

std::size_t PlaneGeometry::voxel(const GridSpec& grid, int u, int v, int plane) const noexcept {
    switch (axis) {
        case 0: return grid.index(plane, u, v);
        case 1: return grid.index(u, plane, v);
        default: return grid.index(u, v, plane);
    }
}

void SliceStack::validate() const {
    const auto geo = PlaneGeometry::of(grid, axis);
    int previous = -1;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const auto& s = slices[i];
        if (s.plane < 0 || s.plane >= geo.depth) {
            throw ValidationError("slice " + std::to_string(i) + ": plane " +
                                  std::to_string(s.plane) + " outside grid");
        }
        if (s.plane <= previous) {
            throw ValidationError("slice " + std::to_string(i) + ": plane indices must be " +
                                  "strictly increasing");
        }
        if (s.mask.width != geo.width || s.mask.height != geo.height) {
            throw ValidationError("slice " + std::to_string(i) + ": mask is " +
                                  std::to_string(s.mask.width) + "x" +
                                  std::to_string(s.mask.height) + ", expected " +
                                  std::to_string(geo.width) + "x" + std::to_string(geo.height));
        }
        previous = s.plane;
    }
}

Mask2D extract_plane(const BinaryVolume& vol, int axis, int plane) {
    const auto geo = PlaneGeometry::of(vol.spec(), axis);
    if (plane < 0 || plane >= geo.depth) throw ValidationError("plane outside grid");
    Mask2D m(geo.width, geo.height);
    for (int v = 0; v < geo.height; ++v) {
        for (int u = 0; u < geo.width; ++u) m.set(u, v, vol[geo.voxel(vol.spec(), u, v, plane)]);
    }
    return m;
}

namespace {

// Squared in-plane distance (voxel units) to the nearest set pixel; +inf if none.
std::vector<double> squared_distance_to(const Mask2D& m) {
    if (m.count() == 0) {
        return std::vector<double>(m.size(), std::numeric_limits<double>::infinity());
    }
    const int dims[2] = {m.width, m.height};
    const double weights[2] = {1.0, 1.0};
    return squared_edt(dims, weights, m.bits);
}

Mask2D complement(const Mask2D& m) {
    Mask2D c(m.width, m.height);
    for (std::size_t i = 0; i < m.size(); ++i) c.bits[i] = m.bits[i] ? 0 : 1;
    return c;
}

}  // namespace

Restrictions restrictions_from_slices(const SliceStack& stack, int erosion) {
    stack.validate();
    if (erosion < 0) throw ValidationError("erosion must be >= 0");
    Restrictions r;
    const double r2 = static_cast<double>(erosion) * erosion;
    for (const auto& s : stack.slices) {
        // Disk structuring element of radius `erosion`: keep a pixel in the
        // eroded set iff its distance to the complement exceeds the radius.
        const auto to_outside = squared_distance_to(complement(s.mask));
        const auto to_inside = squared_distance_to(s.mask);
        Mask2D in(s.mask.width, s.mask.height);
        Mask2D ex(s.mask.width, s.mask.height);
        for (std::size_t i = 0; i < s.mask.size(); ++i) {
            in.bits[i] = (s.mask.bits[i] && to_outside[i] > r2) ? 1 : 0;
            ex.bits[i] = (!s.mask.bits[i] && to_inside[i] > r2) ? 1 : 0;
        }
        if (in.count() == 0) {
            r.warnings.push_back("slice at plane " + std::to_string(s.plane) +
                                 ": interior restriction is empty after erosion " +
                                 std::to_string(erosion));
        }
        r.inner.push_back(std::move(in));
        r.outer.push_back(std::move(ex));
    }
    return r;
}

BinaryVolume fatten(const SliceStack& stack, const std::vector<Mask2D>& omega,
                    const PhaseFieldParams& params, FattenSide side, const BinaryVolume& e0) {
    stack.validate();
    require_same_spec(stack.grid, e0.spec(), "fatten");
    if (omega.size() != stack.slices.size()) {
        throw ValidationError("fatten: one restriction mask per slice required");
    }
    const auto geo = PlaneGeometry::of(stack.grid, stack.axis);
    const double h = params.thickness();
    BinaryVolume out(stack.grid);
    for (std::size_t s = 0; s < omega.size(); ++s) {
        const auto& w = omega[s];
        if (w.count() == 0) continue;
        const int plane = stack.slices[s].plane;
        const auto d = slice_signed_distance(w, geo.spacing_u, geo.spacing_v);
        for (int v = 0; v < geo.height; ++v) {
            for (int u = 0; u < geo.width; ++u) {
                if (!w.at(u, v)) continue;
                out.set(geo.voxel(stack.grid, u, v, plane), true);
                const double half = h * std::abs(d.at(u, v));
                for (int m = 1; m * geo.spacing_normal < half; ++m) {
                    for (int p : {plane - m, plane + m}) {
                        if (p < 0 || p >= geo.depth) continue;
                        const auto idx = geo.voxel(stack.grid, u, v, p);
                        const bool keep = side == FattenSide::interior ? e0[idx] : !e0[idx];
                        if (keep) out.set(idx, true);
                    }
                }
            }
        }
    }
    return out;
}

ObstaclePair obstacle_profiles(const BinaryVolume& omega_in, const BinaryVolume& omega_ex,
                               const PhaseFieldParams& params, ObstacleMode mode) {
    require_same_spec(omega_in.spec(), omega_ex.spec(), "obstacle_profiles");
    const auto& spec = omega_in.spec();
    for (std::size_t i = 0; i < omega_in.size(); ++i) {
        if (omega_in[i] && omega_ex[i]) {
            const auto c = spec.coords(i);
            throw InfeasibleConstraintsError(
                "interior and exterior restrictions overlap at voxel (" + std::to_string(c[0]) +
                "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")");
        }
    }
    ObstaclePair obst = ObstaclePair::trivial(spec);
    if (mode == ObstacleMode::indicator) {
        for (std::size_t i = 0; i < omega_in.size(); ++i) {
            if (omega_in[i]) obst.lower[i] = 0.5;
            if (omega_ex[i]) obst.upper[i] = 0.5;
        }
    } else {
        const double inv_eps = 1.0 / params.epsilon;
        if (!omega_in.empty_set()) {
            const auto d = signed_distance(omega_in);
            for (std::size_t i = 0; i < d.size(); ++i) obst.lower[i] = profile_q(d[i] * inv_eps);
        }
        if (!omega_ex.empty_set()) {
            const auto d = signed_distance(omega_ex);
            for (std::size_t i = 0; i < d.size(); ++i) {
                obst.upper[i] = 1.0 - profile_q(d[i] * inv_eps);
            }
        }
    }
    obst.validate();
    return obst;
}

BinaryVolume fill_gaps_by_duplication(const SliceStack& stack) {
    stack.validate();
    if (stack.slices.size() < 2) {
        throw DegenerateInputError("gap filling needs at least two slices");
    }
    const auto geo = PlaneGeometry::of(stack.grid, stack.axis);
    BinaryVolume out(stack.grid);
    for (std::size_t s = 0; s + 1 < stack.slices.size(); ++s) {
        const auto& lo = stack.slices[s];
        const auto& hi = stack.slices[s + 1];
        for (int p = lo.plane; p <= hi.plane; ++p) {
            // Ties (equidistant planes) go to the lower slice.
            const auto& src = (p - lo.plane) <= (hi.plane - p) ? lo.mask : hi.mask;
            for (int v = 0; v < geo.height; ++v) {
                for (int u = 0; u < geo.width; ++u) {
                    out.set(geo.voxel(stack.grid, u, v, p), src.at(u, v));
                }
            }
        }
    }
    return out;
}

ConstraintSet build_constraints(const SliceStack& stack, const PhaseFieldParams& params,
                                ObstacleMode mode, int erosion) {
    ConstraintSet cs;
    cs.initial_set = fill_gaps_by_duplication(stack);
    auto r = restrictions_from_slices(stack, erosion);
    cs.omega_in = fatten(stack, r.inner, params, FattenSide::interior, cs.initial_set);
    cs.omega_ex = fatten(stack, r.outer, params, FattenSide::exterior, cs.initial_set);
    cs.obstacles = obstacle_profiles(cs.omega_in, cs.omega_ex, params, mode);
    cs.warnings = std::move(r.warnings);
    return cs;
}

}  // namespace pfsurf
