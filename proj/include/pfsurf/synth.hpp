#pragma once

#include <cstdint>
#include <vector>

#include "pfsurf/constraints.hpp"
#include "pfsurf/grid.hpp"

namespace pfsurf {

/// Voxels whose centre lies in the closed ball. The ball must fit inside
/// [0.1, 0.9]^3 (ValidationError otherwise); radius 0 gives the empty set.
BinaryVolume gen_sphere(int n, double radius, const std::array<double, 3>& center);

struct BranchingGeometry {
    double trunk_radius = 0.08;
    std::array<double, 2> branch_radii{0.06, 0.06};
    double branch_angle_deg = 35.0;  ///< tilt of each branch from the trunk axis
    double trunk_bottom = 0.2;       ///< z of the trunk's lower axis end
    double junction = 0.5;           ///< z where the branches leave the trunk
    double branch_length = 0.3;
};

/// Y-shaped union of a vertical capsule trunk at x = y = 1/2 and two capsule
/// branches tilted by +-angle in the x-z plane. A zero branch radius drops
/// that branch. Throws ValidationError if any capsule leaves [0.1, 0.9]^3.
BinaryVolume gen_branching_cylinders(int n, const BranchingGeometry& g = {});

/// Stacks the masks of `vol` at the given planes (axis-normal).
SliceStack subsample_slices(const BinaryVolume& vol, const std::vector<int>& planes, int axis = 2);

struct UnevenRule {
    int count = 5;
    int gap_min = 4;
    int gap_max = 5;
    std::uint64_t seed = 1;
};

/// Seeded uneven planes across the occupied extent of `vol` along `axis`.
/// Gaps lie in [gap_min, gap_max], both extremes occur when the extent allows,
/// and the span is as close to the occupied extent as the bounds permit.
std::vector<int> uneven_planes(const BinaryVolume& vol, const UnevenRule& rule, int axis = 2);

/// First and last plane along `axis` holding any voxel of `vol`; {-1, -1}
/// for the empty set.
std::array<int, 2> occupied_extent(const BinaryVolume& vol, int axis = 2);

/// The sphere test object: radius 0.3 at the domain centre.
BinaryVolume example_sphere(int n);
/// Five planes at fractions 7, 11, 16, 20, 25 of 32 (gaps 4 and 5 at n = 32).
std::vector<int> example_sphere_planes(int n);
SliceStack example_sphere_stack(int n);

/// The branching test object with default geometry.
BinaryVolume example_branching(int n);
/// 24 uneven slices with gaps 3..13 at n = 128 (gaps scale with n, and the
/// count shrinks when a coarse grid cannot hold 24), seeded.
SliceStack example_branching_stack(int n, std::uint64_t seed = 7);

}  // namespace pfsurf
