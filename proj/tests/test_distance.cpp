#include <cmath>
#include <random>

#include "doctest.h"
#include "pfsurf/distance.hpp"
#include "pfsurf/synth.hpp"

using namespace pfsurf;

namespace {

// O(V * S) brute force in squared voxel units.
std::vector<double> brute_force_sq(const BinaryVolume& m) {
    const auto& g = m.spec();
    std::vector<std::array<int, 3>> set;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i]) set.push_back(g.coords(i));
    }
    std::vector<double> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto p = g.coords(i);
        double best = 1e300;
        for (const auto& q : set) {
            const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
            best = std::min(best, dx * dx + dy * dy + dz * dz);
        }
        out[i] = best;
    }
    return out;
}

}  // namespace

TEST_CASE("face-adjacent voxel is one spacing from a single set voxel") {
    const auto g = GridSpec::cube(5);
    BinaryVolume m(g);
    m.set(2, 2, 2, true);
    const auto d = edt_unsigned(m);
    CHECK(d.at(2, 2, 2) == 0.0);
    CHECK(d.at(3, 2, 2) == doctest::Approx(0.2));
    CHECK(d.at(2, 2, 4) == doctest::Approx(0.4));
}

TEST_CASE("full mask gives zero unsigned distance and non-positive signed distance") {
    const BinaryVolume m(GridSpec::cube(4), true);
    const auto d = edt_unsigned(m);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == 0.0);
    const auto s = signed_distance(m);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] <= 0.0);
}

TEST_CASE("empty mask raises AllFarError") {
    CHECK_THROWS_AS(edt_unsigned(BinaryVolume(GridSpec::cube(4))), AllFarError);
}

TEST_CASE("two opposite corners on 8^3 match brute force") {
    BinaryVolume m(GridSpec::cube(8));
    m.set(0, 0, 0, true);
    m.set(7, 7, 7, true);
    const auto fast = squared_edt_voxels(m);
    const auto slow = brute_force_sq(m);
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
}

TEST_CASE("200 random sparse masks on 4^3 match brute force exactly") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> cnt(1, 3), pos(0, 63);
    const auto g = GridSpec::cube(4);
    for (int c = 0; c < 200; ++c) {
        BinaryVolume m(g);
        const int k = cnt(rng);
        for (int s = 0; s < k; ++s) m.set(static_cast<std::size_t>(pos(rng)), true);
        const auto fast = squared_edt_voxels(m);
        const auto slow = brute_force_sq(m);
        for (std::size_t i = 0; i < fast.size(); ++i) REQUIRE(fast[i] == slow[i]);
    }
}

TEST_CASE("anisotropic weights in the generic transform") {
    // 1-D line of 6 samples with step^2 = 4: distances 2 per sample.
    const int dims[1] = {6};
    const double w[1] = {4.0};
    const std::uint8_t mask[6] = {0, 0, 1, 0, 0, 0};
    const auto d = squared_edt(dims, w, mask);
    const double expected[6] = {16, 4, 0, 4, 16, 36};
    for (int i = 0; i < 6; ++i) CHECK(d[i] == expected[i]);
}

TEST_CASE("half-space signed distance is linear with unit slope") {
    const auto g = GridSpec::cube(16);
    BinaryVolume m(g);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, g.coords(i)[2] < 8);
    const auto d = signed_distance(m);
    const double h = 1.0 / 16;
    for (int k = 0; k < 16; ++k) {
        // Interface at z = 0.5; voxel centre (k + 1/2) h.
        const double expected = (k + 0.5) * h - 0.5;
        CHECK(d.at(3, 5, k) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("ball centre distance is about minus the radius") {
    const auto ball = gen_sphere(64, 0.3, {0.5, 0.5, 0.5});
    const auto d = signed_distance(ball);
    // Voxel (32,32,32) is half a diagonal spacing from the true centre.
    CHECK(std::abs(d.at(32, 32, 32) + 0.3) < 2.0 / 64);
}

TEST_CASE("sign partition and Lipschitz bound on a ball") {
    const int n = 24;
    const auto ball = gen_sphere(n, 0.25, {0.5, 0.5, 0.5});
    const auto d = signed_distance(ball);
    const auto& g = d.spec();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (ball[i]) CHECK(d[i] <= 0.0);
        else CHECK(d[i] >= 0.0);
    }
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
    for (int t = 0; t < 2000; ++t) {
        const auto a = pick(rng), b = pick(rng);
        const auto pa = g.center(g.coords(a)[0], g.coords(a)[1], g.coords(a)[2]);
        const auto pb = g.center(g.coords(b)[0], g.coords(b)[1], g.coords(b)[2]);
        const double dist = std::hypot(pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]);
        CHECK(std::abs(d[a] - d[b]) <= dist + 2.0 / n);
    }
}

TEST_CASE("gradient magnitude is about one away from interface and medial axis") {
    const int n = 48;
    const auto ball = gen_sphere(n, 0.3, {0.5, 0.5, 0.5});
    const auto d = signed_distance(ball);
    const double h = 1.0 / n;
    int tested = 0, good = 0;
    for (int k = 1; k < n - 1; ++k) {
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                const auto c = d.spec().center(i, j, k);
                const double r = std::hypot(c[0] - 0.5, c[1] - 0.5, c[2] - 0.5);
                // Away from the interface (r = 0.3) and the medial point (r = 0).
                if (std::abs(r - 0.3) < 2 * h || r < 3 * h) continue;
                const double gx = (d.at(i + 1, j, k) - d.at(i - 1, j, k)) / (2 * h);
                const double gy = (d.at(i, j + 1, k) - d.at(i, j - 1, k)) / (2 * h);
                const double gz = (d.at(i, j, k + 1) - d.at(i, j, k - 1)) / (2 * h);
                ++tested;
                if (std::abs(std::hypot(gx, gy, gz) - 1.0) < 0.1) ++good;
            }
        }
    }
    CHECK(good >= 0.9 * tested);
}

TEST_CASE("slice distances: half-plane, disk, and boundary") {
    const int w = 32;
    const double h = 1.0 / w;
    Mask2D half(w, w);
    for (int v = 0; v < w; ++v) {
        for (int u = 0; u < 16; ++u) half.set(u, v, true);
    }
    const auto dh = slice_signed_distance(half, h, h);
    for (int u = 0; u < w; ++u) CHECK(dh.at(u, 7) == doctest::Approx((u + 0.5) * h - 0.5));
    // Voxels adjacent to the boundary are within one spacing.
    CHECK(std::abs(dh.at(15, 3)) <= h);
    CHECK(std::abs(dh.at(16, 3)) <= h);

    Mask2D disk(w, w);
    const double r = 0.3;
    for (int v = 0; v < w; ++v) {
        for (int u = 0; u < w; ++u) {
            disk.set(u, v, std::hypot((u + 0.5) * h - 0.5, (v + 0.5) * h - 0.5) <= r);
        }
    }
    const auto dd = slice_signed_distance(disk, h, h);
    CHECK(std::abs(dd.at(16, 16) + r) < 2 * h);
}
