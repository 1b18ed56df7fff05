#include "pfsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace pfsurf {
namespace {

// Corner c of the unit cube sits at (c&1, (c>>1)&1, (c>>2)&1); edge e joins two
// corners differing in exactly one bit.
struct CubeGeometry {
    std::array<std::array<int, 2>, 12> edges{};
    int edge_of[8][8]{};
    // Faces: corners in cyclic order and outward normal.
    std::array<std::array<int, 4>, 6> face_corners{};
    std::array<Vec3, 6> face_normal{};

    CubeGeometry() {
        for (auto& row : edge_of) std::fill(std::begin(row), std::end(row), -1);
        int e = 0;
        for (int axis = 0; axis < 3; ++axis) {
            for (int c = 0; c < 8; ++c) {
                if (c & (1 << axis)) continue;
                const int d = c | (1 << axis);
                edges[e] = {c, d};
                edge_of[c][d] = edge_of[d][c] = e;
                ++e;
            }
        }
        int f = 0;
        for (int axis = 0; axis < 3; ++axis) {
            const int a = (axis + 1) % 3, b = (axis + 2) % 3;
            for (int side = 0; side < 2; ++side) {
                const int base = side << axis;
                face_corners[f] = {base, base | (1 << a), base | (1 << a) | (1 << b),
                                   base | (1 << b)};
                Vec3 n{0, 0, 0};
                n[axis] = side ? 1.0 : -1.0;
                face_normal[f] = n;
                ++f;
            }
        }
    }

    static Vec3 corner(int c) {
        return {double(c & 1), double((c >> 1) & 1), double((c >> 2) & 1)};
    }
    Vec3 midpoint(int e) const {
        const auto a = corner(edges[e][0]), b = corner(edges[e][1]);
        return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
    }
};

const CubeGeometry& geometry() {
    static const CubeGeometry g;
    return g;
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Builds one case: pair crossings on each face (ambiguous faces cut off each
// inside corner separately), orient every segment so inside corners lie on its
// right when viewed from outside the cube, chain segments into loops and fan
// them into triangles.
std::vector<int> build_case(int config) {
    const auto& g = geometry();
    auto inside = [config](int c) { return (config >> c) & 1; };
    std::vector<std::array<int, 2>> segments;

    for (int f = 0; f < 6; ++f) {
        const auto& fc = g.face_corners[f];
        std::vector<std::array<int, 2>> pairs;
        std::vector<int> crossing;
        for (int i = 0; i < 4; ++i) {
            const int a = fc[i], b = fc[(i + 1) % 4];
            if (inside(a) != inside(b)) crossing.push_back(g.edge_of[a][b]);
        }
        if (crossing.size() == 2) {
            pairs.push_back({crossing[0], crossing[1]});
        } else if (crossing.size() == 4) {
            for (int i = 0; i < 4; ++i) {
                if (!inside(fc[i])) continue;
                const int prev = fc[(i + 3) % 4], next = fc[(i + 1) % 4];
                pairs.push_back({g.edge_of[prev][fc[i]], g.edge_of[fc[i]][next]});
            }
        }
        for (auto [e1, e2] : pairs) {
            const Vec3 p = g.midpoint(e1);
            const Vec3 d = sub(g.midpoint(e2), p);
            const int a = g.edges[e1][0];
            const double side = dot(cross(g.face_normal[f], d), sub(CubeGeometry::corner(a), p));
            const bool flip = inside(a) ? side > 0 : side < 0;
            segments.push_back(flip ? std::array<int, 2>{e2, e1} : std::array<int, 2>{e1, e2});
        }
    }

    std::vector<int> tris;
    std::vector<bool> used(segments.size(), false);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        std::vector<int> loop;
        std::size_t cur = s;
        while (!used[cur]) {
            used[cur] = true;
            loop.push_back(segments[cur][0]);
            const int end = segments[cur][1];
            for (std::size_t t = 0; t < segments.size(); ++t) {
                if (!used[t] && segments[t][0] == end) {
                    cur = t;
                    break;
                }
            }
        }
        for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
            tris.insert(tris.end(), {loop[0], loop[i], loop[i + 1]});
        }
    }
    return tris;
}

const std::array<std::vector<int>, 256>& case_table() {
    static const auto table = [] {
        std::array<std::vector<int>, 256> t;
        for (int c = 0; c < 256; ++c) t[c] = build_case(c);
        return t;
    }();
    return table;
}

constexpr double kSnap = 1e-6;
constexpr double kTieOffset = 1e-3;

}  // namespace

const std::vector<int>& marching_cubes_case(int config) { return case_table().at(config); }

std::array<int, 2> edge_corners(int edge) { return geometry().edges.at(edge); }

namespace {

struct Extraction {
    TriMesh mesh;
    std::vector<std::int64_t> node_of_vertex;  // merged grid node, or -1
};

// One marching-cubes pass. Crossings within kSnap of a node are merged onto
// that node unless the node is listed in `split`; those keep one vertex per
// edge, kTieOffset of an edge away from the node.
Extraction extract_pass(const ScalarField3D& u, double level,
                        const std::unordered_set<std::int64_t>& split) {
    const auto& s = u.spec();
    const auto& g = geometry();
    const auto& table = case_table();
    Extraction ex;
    auto& mesh = ex.mesh;
    std::unordered_map<std::uint64_t, int> vertex_of;
    const std::uint64_t node_count = s.size();

    auto vertex_for_edge = [&](int i, int j, int k, int e) {
        const auto [c0, c1] = g.edges[e];
        const int i0 = i + (c0 & 1), j0 = j + ((c0 >> 1) & 1), k0 = k + ((c0 >> 2) & 1);
        const int i1 = i + (c1 & 1), j1 = j + ((c1 >> 1) & 1), k1 = k + ((c1 >> 2) & 1);
        const double v0 = u.at(i0, j0, k0), v1 = u.at(i1, j1, k1);
        const Vec3 p0 = s.center(i0, j0, k0), p1 = s.center(i1, j1, k1);
        const double len = std::sqrt(dot(sub(p1, p0), sub(p1, p0)));
        const auto n0 = static_cast<std::int64_t>(s.index(i0, j0, k0));
        const auto n1 = static_cast<std::int64_t>(s.index(i1, j1, k1));
        const int axis = c0 ^ c1;  // 1, 2 or 4
        const std::uint64_t edge_key = 3 * n0 + (axis == 1 ? 0 : axis == 2 ? 1 : 2);

        double t = v0 == level ? 0.0 : v1 == level ? 1.0 : (level - v0) / (v1 - v0);
        std::int64_t node = -1;
        if (t * len < kSnap) {
            if (split.count(n0)) {
                t = kTieOffset;
            } else {
                node = n0;
            }
        } else if ((1.0 - t) * len < kSnap) {
            if (split.count(n1)) {
                t = 1.0 - kTieOffset;
            } else {
                node = n1;
            }
        }
        const std::uint64_t key = node >= 0 ? 3 * node_count + node : edge_key;
        auto [it, fresh] = vertex_of.try_emplace(key, static_cast<int>(mesh.vertices.size()));
        if (fresh) {
            mesh.vertices.push_back(node >= 0 ? (node == n0 ? p0 : p1)
                                              : Vec3{p0[0] + t * (p1[0] - p0[0]),
                                                     p0[1] + t * (p1[1] - p0[1]),
                                                     p0[2] + t * (p1[2] - p0[2])});
            ex.node_of_vertex.push_back(node);
        }
        return it->second;
    };

    for (int k = 0; k + 1 < s.nz; ++k) {
        for (int j = 0; j + 1 < s.ny; ++j) {
            for (int i = 0; i + 1 < s.nx; ++i) {
                int config = 0;
                for (int c = 0; c < 8; ++c) {
                    if (u.at(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)) > level) {
                        config |= 1 << c;
                    }
                }
                const auto& tris = table[config];
                for (std::size_t n = 0; n < tris.size(); n += 3) {
                    const Tri t{vertex_for_edge(i, j, k, tris[n]),
                                vertex_for_edge(i, j, k, tris[n + 1]),
                                vertex_for_edge(i, j, k, tris[n + 2])};
                    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
                    mesh.triangles.push_back(t);
                }
            }
        }
    }
    return ex;
}

// Merged nodes where merging broke the manifold property: an edge with more
// than two triangles, a repeated triangle, or a vertex whose triangles do not
// form a single fan.
std::vector<std::int64_t> bad_merges(const Extraction& ex) {
    const auto& mesh = ex.mesh;
    std::set<std::int64_t> bad;
    auto flag = [&](int v) {
        if (ex.node_of_vertex[v] >= 0) bad.insert(ex.node_of_vertex[v]);
    };
    std::map<std::pair<int, int>, int> edges;
    std::set<std::array<int, 3>> seen;
    for (const auto& t : mesh.triangles) {
        auto sorted = t;
        std::sort(sorted.begin(), sorted.end());
        if (!seen.insert(sorted).second) {
            for (int v : t) flag(v);
        }
        for (int c = 0; c < 3; ++c) {
            const int a = t[c], b = t[(c + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [e, n] : edges) {
        if (n > 2) {
            flag(e.first);
            flag(e.second);
        }
    }
    // Fan check for merged vertices only (edge vertices are always regular).
    std::unordered_map<int, std::vector<int>> incident;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        for (int v : mesh.triangles[t]) {
            if (ex.node_of_vertex[v] >= 0) incident[v].push_back(static_cast<int>(t));
        }
    }
    for (const auto& [v, ts] : incident) {
        // Union triangles around v that share an edge (v, x).
        std::map<int, std::vector<std::size_t>> by_other;
        for (std::size_t a = 0; a < ts.size(); ++a) {
            for (int x : mesh.triangles[ts[a]]) {
                if (x != v) by_other[x].push_back(a);
            }
        }
        std::vector<std::size_t> parent(ts.size());
        for (std::size_t a = 0; a < ts.size(); ++a) parent[a] = a;
        auto find = [&](std::size_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (const auto& [x, list] : by_other) {
            for (std::size_t q = 1; q < list.size(); ++q) parent[find(list[q])] = find(list[0]);
        }
        std::size_t roots = 0;
        for (std::size_t a = 0; a < ts.size(); ++a) roots += find(a) == a;
        if (roots > 1) flag(v);
    }
    return {bad.begin(), bad.end()};
}

}  // namespace

TriMesh extract_isosurface(const ScalarField3D& u, double level) {
    if (!u.all_finite()) throw ValidationError("extract_isosurface: field has non-finite values");
    std::unordered_set<std::int64_t> split;
    for (int round = 0; round < 8; ++round) {
        auto ex = extract_pass(u, level, split);
        const auto bad = bad_merges(ex);
        if (bad.empty()) return std::move(ex.mesh);
        split.insert(bad.begin(), bad.end());
    }
    // Last resort: no merging near any of the offending nodes was enough
    // before; split every snapped node.
    std::unordered_set<std::int64_t> all;
    for (std::size_t n = 0; n < u.size(); ++n) all.insert(static_cast<std::int64_t>(n));
    return extract_pass(u, level, all).mesh;
}

MeshAdjacency build_adjacency(const TriMesh& mesh) {
    const std::size_t nv = mesh.vertices.size();
    MeshAdjacency adj;
    adj.vertex_triangles.resize(nv);
    adj.vertex_neighbors.resize(nv);
    adj.boundary.assign(nv, false);

    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int c = 0; c < 3; ++c) {
            if (tri[c] < 0 || static_cast<std::size_t>(tri[c]) >= nv) {
                throw ValidationError("triangle " + std::to_string(t) +
                                      " references a missing vertex");
            }
            adj.vertex_triangles[tri[c]].push_back(static_cast<int>(t));
            const int a = tri[c], b = tri[(c + 1) % 3];
            ++edge_count[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::string bad;
    std::size_t bad_count = 0;
    for (const auto& [e, n] : edge_count) {
        if (n > 2) {
            if (bad_count < 20) {
                bad += " (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
            }
            ++bad_count;
        } else if (n == 1) {
            adj.boundary[e.first] = adj.boundary[e.second] = true;
            ++adj.boundary_edge_count;
        }
    }
    if (bad_count) {
        throw NonManifoldError(std::to_string(bad_count) + " non-manifold edge(s):" + bad);
    }
    adj.edge_count = edge_count.size();

    // Order each one-ring by walking from triangle to triangle around the vertex.
    for (std::size_t v = 0; v < nv; ++v) {
        const auto& ts = adj.vertex_triangles[v];
        if (ts.empty()) continue;
        // Directed "next" map: in triangle (v, a, b) counter-clockwise, a -> b.
        std::map<int, int> next;
        for (int t : ts) {
            const auto& tri = mesh.triangles[t];
            const int c = tri[0] == static_cast<int>(v) ? 0 : tri[1] == static_cast<int>(v) ? 1 : 2;
            next[tri[(c + 1) % 3]] = tri[(c + 2) % 3];
        }
        std::map<int, int> indeg;
        for (const auto& [a, b] : next) ++indeg[b];
        int start = next.begin()->first;
        for (const auto& [a, b] : next) {
            if (!indeg.count(a)) {
                start = a;
                break;
            }
        }
        auto& ring = adj.vertex_neighbors[v];
        int cur = start;
        for (std::size_t guard = 0; guard <= next.size(); ++guard) {
            ring.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end() || it->second == start) break;
            cur = it->second;
        }
        if (ring.size() < next.size() + (adj.boundary[v] ? 1 : 0)) {
            // Not a single fan (pinched vertex): fall back to the sorted set.
            ring.clear();
            for (const auto& [a, b] : next) {
                ring.push_back(a);
                ring.push_back(b);
            }
            std::sort(ring.begin(), ring.end());
            ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
        }
    }
    return adj;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
    std::vector<Vec3> n(mesh.vertices.size(), Vec3{0, 0, 0});
    for (const auto& t : mesh.triangles) {
        const auto& a = mesh.vertices[t[0]];
        const Vec3 c = cross(sub(mesh.vertices[t[1]], a), sub(mesh.vertices[t[2]], a));
        for (int v : t) {
            for (int d = 0; d < 3; ++d) n[v][d] += c[d];
        }
    }
    for (auto& v : n) {
        const double len = std::sqrt(dot(v, v));
        if (len > 0) {
            for (auto& x : v) x /= len;
        }
    }
    return n;
}

double triangle_area(const TriMesh& mesh, std::size_t t) {
    const auto& tri = mesh.triangles[t];
    const auto& a = mesh.vertices[tri[0]];
    const Vec3 c = cross(sub(mesh.vertices[tri[1]], a), sub(mesh.vertices[tri[2]], a));
    return 0.5 * std::sqrt(dot(c, c));
}

double surface_area(const TriMesh& mesh) {
    double sum = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) sum += triangle_area(mesh, t);
    return sum;
}

double signed_volume(const TriMesh& mesh) {
    double sum = 0.0;
    for (const auto& t : mesh.triangles) {
        sum += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
    }
    return sum / 6.0;
}

long euler_characteristic(const TriMesh& mesh) {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& t : mesh.triangles) {
        for (int c = 0; c < 3; ++c) {
            const int a = t[c], b = t[(c + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}] = 1;
        }
    }
    return static_cast<long>(mesh.vertices.size()) - static_cast<long>(edges.size()) +
           static_cast<long>(mesh.triangles.size());
}

bool consistently_oriented(const TriMesh& mesh) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : mesh.triangles) {
        for (int c = 0; c < 3; ++c) {
            if (++directed[{t[c], t[(c + 1) % 3]}] > 1) return false;
        }
    }
    return true;
}

void write_obj(const std::filesystem::path& path, const TriMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    char buf[96];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
        out << buf;
    }
    for (const auto& t : mesh.triangles) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

TriMesh read_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open OBJ file '" + path.string() + "'");
    TriMesh mesh;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + why);
    };
    std::vector<std::vector<int>> faces;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p[0] >> p[1] >> p[2])) fail("malformed vertex record");
            mesh.vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                try {
                    idx.push_back(std::stoi(tok.substr(0, tok.find('/'))));
                } catch (const std::exception&) {
                    fail("malformed face index '" + tok + "'");
                }
            }
            if (idx.size() < 3) fail("face with fewer than three vertices");
            faces.push_back(std::move(idx));
        }
    }
    const int nv = static_cast<int>(mesh.vertices.size());
    for (auto& f : faces) {
        for (auto& i : f) {
            i = i < 0 ? nv + i : i - 1;
            if (i < 0 || i >= nv) {
                throw ValidationError(path.string() + ": face index out of range");
            }
        }
        for (std::size_t k = 1; k + 1 < f.size(); ++k) mesh.triangles.push_back({f[0], f[k], f[k + 1]});
    }
    return mesh;
}

}  // namespace pfsurf
