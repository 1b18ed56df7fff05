#pragma once

#include <string>
#include <vector>

#include "pfsurf/grid.hpp"
#include "pfsurf/phasefield.hpp"

namespace pfsurf {

/// One cross-section: plane index along the stack axis and its in-plane mask.
struct Slice {
    int plane = 0;
    Mask2D mask;
};

/// Parallel binary cross-sections of an unknown solid.
struct SliceStack {
    GridSpec grid;
    int axis = 2;
    std::vector<Slice> slices;

    /// Throws ValidationError unless planes are strictly increasing, inside
    /// the grid, and every mask has the in-plane dimensions of `grid`.
    void validate() const;
};

/// In-plane extents of slices normal to `axis`.
struct PlaneGeometry {
    int axis = 2;
    int width = 0;
    int height = 0;
    double spacing_u = 0.0;
    double spacing_v = 0.0;
    double spacing_normal = 0.0;
    int depth = 0;

    static PlaneGeometry of(const GridSpec& grid, int axis);
    std::size_t voxel(const GridSpec& grid, int u, int v, int plane) const noexcept;
};

Mask2D extract_plane(const BinaryVolume& vol, int axis, int plane);

/// Per-slice interior (omega_in) and exterior (omega_ex) restrictions.
struct Restrictions {
    std::vector<Mask2D> inner;
    std::vector<Mask2D> outer;
    std::vector<std::string> warnings;
};

Restrictions restrictions_from_slices(const SliceStack& stack, int erosion);

enum class FattenSide { interior, exterior };

/// Thickens every in-plane restriction into the slab |zeta| < h |d_i(xi, omega_i)|.
/// Interior slabs are clipped to E0, exterior slabs to its complement. The
/// slice plane itself is always included.
BinaryVolume fatten(const SliceStack& stack, const std::vector<Mask2D>& omega,
                    const PhaseFieldParams& params, FattenSide side, const BinaryVolume& e0);

enum class ObstacleMode { exact, indicator };

ObstaclePair obstacle_profiles(const BinaryVolume& omega_in, const BinaryVolume& omega_ex,
                               const PhaseFieldParams& params, ObstacleMode mode);

/// Rough initial volume: every plane between the first and last slice takes
/// the mask of its nearest slice (ties go to the lower slice); planes outside
/// the slice range stay empty.
BinaryVolume fill_gaps_by_duplication(const SliceStack& stack);

/// Everything a solver needs from a slice stack.
struct ConstraintSet {
    BinaryVolume initial_set;
    BinaryVolume omega_in;
    BinaryVolume omega_ex;
    ObstaclePair obstacles;
    std::vector<std::string> warnings;
};

ConstraintSet build_constraints(const SliceStack& stack, const PhaseFieldParams& params,
                                ObstacleMode mode, int erosion = 0);

}  // namespace pfsurf
