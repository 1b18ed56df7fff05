#include "pfsurf/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "json.hpp"

namespace pfsurf {
namespace {

constexpr double kCotClamp = 1e6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// cot of the angle between a and b, clamped.
double cot(const Vec3& a, const Vec3& b, bool& clamped) {
    const double s = norm(cross(a, b));
    const double c = dot(a, b);
    if (s * kCotClamp <= std::abs(c)) {
        clamped = true;
        return c >= 0 ? kCotClamp : -kCotClamp;
    }
    return c / s;
}

// Everything the two curvature formulas need at one vertex.
struct VertexLocal {
    bool ok = false;
    bool boundary = false;
    bool clamped = false;
    double area = 0.0;
    double angle_sum = 0.0;
    Vec3 laplace{0, 0, 0};  // sum (cot a + cot b)(v_j - v_i)
};

VertexLocal local_quantities(const TriMesh& mesh, const MeshAdjacency& adj, std::size_t v,
                             VertexArea mode) {
    VertexLocal out;
    if (adj.boundary[v]) {
        out.boundary = true;
        return out;
    }
    const auto& ts = adj.vertex_triangles[v];
    if (ts.empty()) return out;
    const Vec3& p = mesh.vertices[v];
    for (int t : ts) {
        const auto& tri = mesh.triangles[t];
        const int c = tri[0] == static_cast<int>(v) ? 0 : tri[1] == static_cast<int>(v) ? 1 : 2;
        const Vec3& q = mesh.vertices[tri[(c + 1) % 3]];
        const Vec3& r = mesh.vertices[tri[(c + 2) % 3]];
        const Vec3 pq = sub(q, p), pr = sub(r, p), qr = sub(r, q);
        const double tri_area = 0.5 * norm(cross(pq, pr));
        const double cos_p = dot(pq, pr) / (norm(pq) * norm(pr));
        out.angle_sum += std::acos(std::clamp(cos_p, -1.0, 1.0));

        const double cot_q = cot(sub(p, q), qr, out.clamped);            // angle at q
        const double cot_r = cot(sub(p, r), sub(q, r), out.clamped);     // angle at r
        for (int d = 0; d < 3; ++d) out.laplace[d] += cot_r * pq[d] + cot_q * pr[d];

        if (mode == VertexArea::barycentric) {
            out.area += tri_area / 3.0;
        } else {
            const bool obtuse_p = dot(pq, pr) < 0;
            const bool obtuse_q = dot(sub(p, q), qr) < 0;
            const bool obtuse_r = dot(sub(p, r), sub(q, r)) < 0;
            if (obtuse_p) {
                out.area += tri_area / 2.0;
            } else if (obtuse_q || obtuse_r) {
                out.area += tri_area / 4.0;
            } else {
                out.area += (dot(pr, pr) * cot_q + dot(pq, pq) * cot_r) / 8.0;
            }
        }
    }
    out.ok = out.area > 0.0 && std::isfinite(out.area);
    return out;
}

template <class Fn>
VertexCurvature per_vertex(const TriMesh& mesh, const MeshAdjacency& adj, VertexArea mode,
                           Fn&& value_of) {
    const std::size_t nv = mesh.vertices.size();
    VertexCurvature r;
    r.values.assign(nv, kNaN);
    r.areas.assign(nv, 0.0);
    r.included.assign(nv, false);
    std::vector<VertexLocal> loc(nv);
    const auto n = static_cast<std::int64_t>(nv);
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v) loc[v] = local_quantities(mesh, adj, v, mode);
    for (std::size_t v = 0; v < nv; ++v) {
        if (loc[v].boundary) {
            ++r.skipped_boundary;
            continue;
        }
        if (!loc[v].ok) {
            ++r.skipped_degenerate;
            continue;
        }
        if (loc[v].clamped) ++r.cot_clamped;
        r.values[v] = value_of(v, loc[v]);
        r.areas[v] = loc[v].area;
        r.included[v] = true;
    }
    return r;
}

}  // namespace

VertexCurvature gaussian_curvature(const TriMesh& mesh, const MeshAdjacency& adj,
                                   VertexArea area) {
    return per_vertex(mesh, adj, area, [](std::size_t, const VertexLocal& l) {
        return (2.0 * std::numbers::pi - l.angle_sum) / l.area;
    });
}

std::vector<Vec3> mean_curvature_vectors(const TriMesh& mesh, const MeshAdjacency& adj,
                                         VertexArea area) {
    std::vector<Vec3> out(mesh.vertices.size(), Vec3{0, 0, 0});
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const auto l = local_quantities(mesh, adj, v, area);
        if (!l.ok) continue;
        for (int d = 0; d < 3; ++d) out[v][d] = l.laplace[d] / (2.0 * l.area);
    }
    return out;
}

VertexCurvature mean_curvature(const TriMesh& mesh, const MeshAdjacency& adj, VertexArea area) {
    const auto normals = vertex_normals(mesh);
    return per_vertex(mesh, adj, area, [&](std::size_t v, const VertexLocal& l) {
        Vec3 k;
        for (int d = 0; d < 3; ++d) k[d] = l.laplace[d] / (2.0 * l.area);
        const double half = 0.5 * norm(k);
        return dot(k, normals[v]) > 0 ? -half : half;
    });
}

double Histogram::bin_lo(std::size_t b) const {
    return counts.empty() ? lo : lo + (hi - lo) * static_cast<double>(b) / counts.size();
}
double Histogram::bin_hi(std::size_t b) const {
    return counts.empty() ? hi : lo + (hi - lo) * static_cast<double>(b + 1) / counts.size();
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * (values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double f = pos - i;
    return i + 1 < values.size() ? values[i] + f * (values[i + 1] - values[i]) : values[i];
}

Histogram clipped_histogram(const std::vector<double>& values, int bins) {
    Histogram h;
    if (bins <= 0) throw ValidationError("histogram needs at least one bin");
    h.counts.assign(bins, 0);
    if (values.empty()) return h;
    h.lo = percentile(values, 1.0);
    h.hi = percentile(values, 99.0);
    const double width = (h.hi - h.lo) / bins;
    for (double v : values) {
        long b = width > 0 ? static_cast<long>(std::floor((v - h.lo) / width)) : 0;
        b = std::clamp<long>(b, 0, bins - 1);
        ++h.counts[b];
    }
    return h;
}

double population_stddev(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / values.size());
}

CurvatureReport curvature_report(const TriMesh& mesh, int bins, VertexArea area) {
    CurvatureReport r;
    r.n_vertices = mesh.vertices.size();
    r.hist_gc.counts.assign(std::max(bins, 1), 0);
    r.hist_mc.counts.assign(std::max(bins, 1), 0);
    if (mesh.empty()) return r;

    const auto adj = build_adjacency(mesh);
    const auto g = gaussian_curvature(mesh, adj, area);
    const auto m = mean_curvature(mesh, adj, area);
    r.kappa_g = g.values;
    r.kappa_mean = m.values;
    r.included = g.included;
    r.skipped_boundary_vertices = g.skipped_boundary;
    r.skipped_degenerate_vertices = g.skipped_degenerate;
    r.cot_clamped = m.cot_clamped;

    std::vector<double> gs, ms;
    for (std::size_t v = 0; v < r.n_vertices; ++v) {
        if (!r.included[v]) continue;
        gs.push_back(r.kappa_g[v]);
        ms.push_back(r.kappa_mean[v]);
    }
    r.n_included = gs.size();
    r.sigma_gc = population_stddev(gs);
    r.sigma_mc = population_stddev(ms);
    r.hist_gc = clipped_histogram(gs, bins);
    r.hist_mc = clipped_histogram(ms, bins);
    return r;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_vertex_csv(const std::filesystem::path& path, const CurvatureReport& r) {
    auto out = open_out(path);
    out << "vertex,kg,km\n";
    for (std::size_t v = 0; v < r.included.size(); ++v) {
        if (r.included[v]) out << v << ',' << fmt(r.kappa_g[v]) << ',' << fmt(r.kappa_mean[v]) << '\n';
    }
}

void write_summary_json(const std::filesystem::path& path, const CurvatureReport& r) {
    nlohmann::ordered_json j;
    j["sigma_gc"] = r.sigma_gc;
    j["sigma_mc"] = r.sigma_mc;
    j["n_vertices"] = r.n_vertices;
    j["n_skipped"] = r.n_skipped();
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path, const CurvatureReport& r) {
    auto out = open_out(path);
    out << "bin_lo,bin_hi,count_gc,count_mc\n";
    for (std::size_t b = 0; b < r.hist_gc.counts.size(); ++b) {
        out << fmt(r.hist_gc.bin_lo(b)) << ',' << fmt(r.hist_gc.bin_hi(b)) << ','
            << r.hist_gc.counts[b] << ",\n";
    }
    for (std::size_t b = 0; b < r.hist_mc.counts.size(); ++b) {
        out << fmt(r.hist_mc.bin_lo(b)) << ',' << fmt(r.hist_mc.bin_hi(b)) << ",,"
            << r.hist_mc.counts[b] << '\n';
    }
}

}  // namespace pfsurf
