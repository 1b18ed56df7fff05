#pragma once

#include <filesystem>
#include <vector>

#include "pfsurf/mesh.hpp"

namespace pfsurf {

enum class VertexArea {
    mixed_voronoi,  ///< Voronoi area, obtuse triangles split 1/2 and 1/4
    barycentric,    ///< one third of every incident triangle
};

/// Per-vertex curvature values. Entries for skipped vertices are NaN.
struct VertexCurvature {
    std::vector<double> values;
    std::vector<double> areas;
    std::vector<bool> included;
    std::size_t skipped_boundary = 0;
    std::size_t skipped_degenerate = 0;
    std::size_t cot_clamped = 0;  ///< vertices where |cot| hit the 1e6 clamp
};

/// Angle deficit over vertex area: (2 pi - sum theta) / A.
VertexCurvature gaussian_curvature(const TriMesh& mesh, const MeshAdjacency& adj,
                                   VertexArea area = VertexArea::mixed_voronoi);

/// Cotangent formula K = (1/2A) sum (cot a + cot b)(v_j - v_i); the scalar is
/// half its length, positive when K points against the outward normal, so the
/// unit sphere reports +1.
VertexCurvature mean_curvature(const TriMesh& mesh, const MeshAdjacency& adj,
                               VertexArea area = VertexArea::mixed_voronoi);

/// Mean-curvature vector of every vertex (zero for skipped vertices).
std::vector<Vec3> mean_curvature_vectors(const TriMesh& mesh, const MeshAdjacency& adj,
                                         VertexArea area = VertexArea::mixed_voronoi);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
    double bin_lo(std::size_t b) const;
    double bin_hi(std::size_t b) const;
};

/// Equal-width bins between the 1st and 99th percentiles; values beyond are
/// clipped into the end bins.
Histogram clipped_histogram(const std::vector<double>& values, int bins);

/// Population standard deviation (0 for fewer than one value).
double population_stddev(const std::vector<double>& values);
/// Linear-interpolation percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

struct CurvatureReport {
    std::vector<double> kappa_g;     ///< per mesh vertex, NaN if skipped
    std::vector<double> kappa_mean;  ///< per mesh vertex, NaN if skipped
    std::vector<bool> included;
    double sigma_gc = 0.0;
    double sigma_mc = 0.0;
    Histogram hist_gc;
    Histogram hist_mc;
    std::size_t n_vertices = 0;  ///< vertices of the mesh
    std::size_t n_included = 0;
    std::size_t skipped_boundary_vertices = 0;
    std::size_t skipped_degenerate_vertices = 0;
    std::size_t cot_clamped = 0;

    std::size_t n_skipped() const noexcept {
        return skipped_boundary_vertices + skipped_degenerate_vertices;
    }
};

CurvatureReport curvature_report(const TriMesh& mesh, int bins = 50,
                                 VertexArea area = VertexArea::mixed_voronoi);

/// `vertex,kg,km` for every included vertex.
void write_vertex_csv(const std::filesystem::path& path, const CurvatureReport& r);
/// {sigma_gc, sigma_mc, n_vertices, n_skipped}
void write_summary_json(const std::filesystem::path& path, const CurvatureReport& r);
/// `bin_lo,bin_hi,count_gc,count_mc`: the Gaussian bins first (count_mc empty),
/// then the mean-curvature bins (count_gc empty), since their ranges differ.
void write_histogram_csv(const std::filesystem::path& path, const CurvatureReport& r);

}  // namespace pfsurf
