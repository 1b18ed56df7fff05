#include "pfsurf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace pfsurf {
namespace {

constexpr double kPadLo = 0.1;
constexpr double kPadHi = 0.9;

struct Capsule {
    std::array<double, 3> a, b;
    double r;

    bool contains(const std::array<double, 3>& p) const {
        double ab[3], ap[3], len2 = 0.0, t = 0.0;
        for (int d = 0; d < 3; ++d) {
            ab[d] = b[d] - a[d];
            ap[d] = p[d] - a[d];
            len2 += ab[d] * ab[d];
            t += ab[d] * ap[d];
        }
        t = len2 > 0 ? std::clamp(t / len2, 0.0, 1.0) : 0.0;
        double d2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            const double e = ap[d] - t * ab[d];
            d2 += e * e;
        }
        return d2 <= r * r;
    }

    void require_inside(const char* what) const {
        for (int d = 0; d < 3; ++d) {
            const double lo = std::min(a[d], b[d]) - r, hi = std::max(a[d], b[d]) + r;
            if (lo < kPadLo || hi > kPadHi) {
                throw ValidationError(std::string(what) + " leaves the padded box [0.1, 0.9]^3");
            }
        }
    }
};

}  // namespace

BinaryVolume gen_sphere(int n, double radius, const std::array<double, 3>& center) {
    if (radius < 0) throw ValidationError("sphere radius must be >= 0");
    const Capsule ball{center, center, radius};
    if (radius > 0) ball.require_inside("sphere");
    const auto spec = GridSpec::cube(n);
    BinaryVolume vol(spec);
    if (radius == 0) return vol;
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) vol.set(i, j, k, ball.contains(spec.center(i, j, k)));
        }
    }
    return vol;
}

BinaryVolume gen_branching_cylinders(int n, const BranchingGeometry& g) {
    if (g.trunk_radius <= 0) throw ValidationError("trunk radius must be > 0");
    const double a = g.branch_angle_deg * std::numbers::pi / 180.0;
    std::vector<Capsule> parts{{{0.5, 0.5, g.trunk_bottom}, {0.5, 0.5, g.junction}, g.trunk_radius}};
    for (int s = 0; s < 2; ++s) {
        const double r = g.branch_radii[s];
        if (r < 0) throw ValidationError("branch radius must be >= 0");
        if (r == 0) continue;
        const double sign = s == 0 ? -1.0 : 1.0;
        parts.push_back({{0.5, 0.5, g.junction},
                         {0.5 + sign * g.branch_length * std::sin(a), 0.5,
                          g.junction + g.branch_length * std::cos(a)},
                         r});
    }
    for (const auto& c : parts) c.require_inside("branching cylinders");

    const auto spec = GridSpec::cube(n);
    BinaryVolume vol(spec);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const auto p = spec.center(i, j, k);
                vol.set(i, j, k,
                        std::any_of(parts.begin(), parts.end(),
                                    [&](const Capsule& c) { return c.contains(p); }));
            }
        }
    }
    return vol;
}

SliceStack subsample_slices(const BinaryVolume& vol, const std::vector<int>& planes, int axis) {
    if (axis < 0 || axis > 2) throw ValidationError("slice axis must be 0, 1 or 2");
    SliceStack stack;
    stack.grid = vol.spec();
    stack.axis = axis;
    for (int p : planes) {
        if (p < 0 || p >= vol.spec().count(axis)) {
            throw ValidationError("slice plane " + std::to_string(p) + " is outside the grid");
        }
        stack.slices.push_back({p, extract_plane(vol, axis, p)});
    }
    stack.validate();
    return stack;
}

std::array<int, 2> occupied_extent(const BinaryVolume& vol, int axis) {
    const int depth = vol.spec().count(axis);
    int lo = -1, hi = -1;
    for (int p = 0; p < depth; ++p) {
        if (extract_plane(vol, axis, p).count() == 0) continue;
        if (lo < 0) lo = p;
        hi = p;
    }
    return {lo, hi};
}

std::vector<int> uneven_planes(const BinaryVolume& vol, const UnevenRule& rule, int axis) {
    if (rule.count < 2) throw ValidationError("uneven rule needs at least 2 slices");
    if (rule.gap_min < 1 || rule.gap_max < rule.gap_min) {
        throw ValidationError("uneven rule needs 1 <= gap_min <= gap_max");
    }
    const auto [lo, hi] = occupied_extent(vol, axis);
    if (lo < 0) throw DegenerateInputError("cannot place slices through an empty volume");
    const int gaps = rule.count - 1;
    const int extent = hi - lo;
    if (gaps * rule.gap_min > extent) {
        throw ValidationError("object extent " + std::to_string(extent) + " is too short for " +
                              std::to_string(rule.count) + " slices with gaps >= " +
                              std::to_string(rule.gap_min));
    }
    const int span = std::min(extent, gaps * rule.gap_max);

    std::mt19937_64 rng(rule.seed);
    std::vector<int> g(gaps, rule.gap_min);
    int extra = span - gaps * rule.gap_min;
    const int widen = rule.gap_max - rule.gap_min;
    // Make the widest gap appear first (if the budget allows), then hand out
    // the rest one unit at a time to random gaps below the cap, never touching
    // the last gap so the narrowest one also survives.
    if (widen > 0 && extra >= widen) {
        g[0] = rule.gap_max;
        extra -= widen;
    }
    std::vector<int> open;
    for (int i = 1; i < gaps - 1; ++i) open.push_back(i);
    while (extra > 0) {
        std::erase_if(open, [&](int i) { return g[i] >= rule.gap_max; });
        if (open.empty()) {
            for (int i = 0; i < gaps && extra > 0; ++i) {
                const int add = std::min(extra, rule.gap_max - g[i]);
                g[i] += add;
                extra -= add;
            }
            break;
        }
        const int pick = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
        ++g[pick];
        --extra;
    }
    std::shuffle(g.begin(), g.end(), rng);

    std::vector<int> planes{lo + (extent - span) / 2};
    for (int d : g) planes.push_back(planes.back() + d);
    return planes;
}

BinaryVolume example_sphere(int n) { return gen_sphere(n, 0.3, {0.5, 0.5, 0.5}); }

std::vector<int> example_sphere_planes(int n) {
    std::vector<int> planes;
    for (int f : {7, 11, 16, 20, 25}) planes.push_back(f * n / 32);
    return planes;
}

SliceStack example_sphere_stack(int n) {
    return subsample_slices(example_sphere(n), example_sphere_planes(n));
}

BinaryVolume example_branching(int n) { return gen_branching_cylinders(n); }

SliceStack example_branching_stack(int n, std::uint64_t seed) {
    const auto vol = example_branching(n);
    const int gmin = std::max(1, 3 * n / 128), gmax = std::max(gmin, 13 * n / 128);
    const auto ext = occupied_extent(vol);
    const int count = std::min(24, (ext[1] - ext[0]) / gmin + 1);
    return subsample_slices(vol, uneven_planes(vol, {count, gmin, gmax, seed}));
}

}  // namespace pfsurf
