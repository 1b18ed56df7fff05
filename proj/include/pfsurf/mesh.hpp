#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "pfsurf/grid.hpp"

namespace pfsurf {

using Vec3 = std::array<double, 3>;
using Tri = std::array<int, 3>;

/// Indexed triangle mesh in domain units. Triangles are counter-clockwise when
/// seen from the side their normal points to.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;

    bool empty() const noexcept { return triangles.empty(); }
};

/// Marching cubes on the cells between voxel centres (no periodic wrap).
/// Inside is `u > level`; normals point toward `u < level`. Crossings within
/// 1e-6 of a grid node are snapped onto it and merged, and triangles that
/// collapse as a result are dropped. Nodes exactly at the level count as
/// outside. Where merging would join separate sheets touching one node (an
/// edge with more than two triangles or a pinched fan), that node is left
/// unmerged and its crossings sit 1e-3 of an edge away from it.
TriMesh extract_isosurface(const ScalarField3D& u, double level = 0.5);

/// Triangle list of one marching-cubes case as edge indices (0..11), three
/// per triangle. Edge e joins cube corners edge_corners(e); corner c sits at
/// offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
const std::vector<int>& marching_cubes_case(int config);
std::array<int, 2> edge_corners(int edge);

struct MeshAdjacency {
    /// Incident triangle ids per vertex.
    std::vector<std::vector<int>> vertex_triangles;
    /// One-ring neighbours per vertex, in cyclic order when the ring is a fan.
    std::vector<std::vector<int>> vertex_neighbors;
    /// True for vertices on a boundary edge (an edge with one triangle).
    std::vector<bool> boundary;
    std::size_t edge_count = 0;
    std::size_t boundary_edge_count = 0;
};

/// Throws NonManifoldError listing every edge that bounds more than two
/// triangles.
MeshAdjacency build_adjacency(const TriMesh& mesh);

/// Area-weighted unit vertex normals (zero for isolated vertices).
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

double triangle_area(const TriMesh& mesh, std::size_t t);
double surface_area(const TriMesh& mesh);
/// Volume enclosed by a closed, outward-oriented mesh (divergence theorem).
double signed_volume(const TriMesh& mesh);
/// V - E + F.
long euler_characteristic(const TriMesh& mesh);
/// True when every shared edge is traversed in opposite directions.
bool consistently_oriented(const TriMesh& mesh);

void write_obj(const std::filesystem::path& path, const TriMesh& mesh);
/// Reads `v` and `f` records (1-based, optional `/` suffixes; polygons are
/// fan-split). Throws ValidationError naming file and line on bad input.
TriMesh read_obj(const std::filesystem::path& path);

}  // namespace pfsurf
