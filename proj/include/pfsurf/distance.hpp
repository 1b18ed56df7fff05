#pragma once

#include <span>
#include <vector>

#include "pfsurf/grid.hpp"

namespace pfsurf {

/// Squared Euclidean distance from every sample to the nearest set sample of a
/// 1-, 2- or 3-D mask (x fastest), by separable lower envelopes of parabolas.
/// `weights[a]` is the squared length of one step along axis a. Set samples
/// get 0. Throws AllFarError if the mask has no set sample.
std::vector<double> squared_edt(std::span<const int> dims, std::span<const double> weights,
                                std::span<const std::uint8_t> mask);

/// Squared distance in voxel units (exact integers on isotropic grids).
std::vector<double> squared_edt_voxels(const BinaryVolume& mask);

/// Distance (domain units) from each voxel centre to the nearest set voxel centre.
ScalarField3D edt_unsigned(const BinaryVolume& mask);
Field2D edt_unsigned(const Mask2D& mask, double spacing_u, double spacing_v);

/// Signed distance, negative inside the set. Both one-sided transforms are
/// shifted by half a spacing so that the zero level sits on the voxel interface.
/// A full mask yields minus the domain diagonal everywhere.
ScalarField3D signed_distance(const BinaryVolume& mask);

/// In-plane signed distance d_i(x, pi) = dist(x, pi) - dist(x, plane \ pi),
/// with the same half-spacing convention. A full mask yields minus the plane
/// diagonal.
Field2D slice_signed_distance(const Mask2D& mask, double spacing_u, double spacing_v);

}  // namespace pfsurf
