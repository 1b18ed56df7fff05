#include <cmath>
#include <random>

#include "doctest.h"
#include "pfsurf/phasefield.hpp"
#include "pfsurf/synth.hpp"
#include "support.hpp"

using namespace pfsurf;
namespace ts = testing_support;

TEST_CASE("profile q values and symmetry") {
    CHECK(profile_q(0.0) == 0.5);
    for (double x : {0.1, 1.0, 7.0}) CHECK(profile_q(x) + profile_q(-x) == doctest::Approx(1.0));
    CHECK(profile_q(20.0) < 1e-8);
    CHECK(profile_q(-60.0) <= 1.0);
    CHECK(profile_q(60.0) >= 0.0);
}

TEST_CASE("profile q solves q' = -sqrt(2 W(q))") {
    for (int i = 0; i < 100; ++i) {
        const double x = -8.0 + 16.0 * i / 99.0;
        const double h = 1e-5;
        const double dq = (profile_q(x + h) - profile_q(x - h)) / (2 * h);
        CHECK(std::abs(dq + std::sqrt(2.0 * ts::w0(profile_q(x)))) < 1e-6);
    }
}

TEST_CASE("double well values at the wells and midpoint") {
    for (double u : {0.0, 1.0}) {
        const auto w = double_well(u);
        CHECK(w.w == 0.0);
        CHECK(w.w1 == 0.0);
        CHECK(w.w2 == 1.0);
    }
    const auto m = double_well(0.5);
    CHECK(m.w == doctest::Approx(1.0 / 32));
    CHECK(m.w1 == 0.0);
    CHECK(m.w2 == doctest::Approx(-0.5));
}

TEST_CASE("W derivatives agree with centred differences") {
    const double h = 1e-4;
    for (double u : {-0.2, 0.3, 1.4}) {
        CHECK(std::abs((well(u + h) - well(u - h)) / (2 * h) - well_d1(u)) < 1e-6);
        CHECK(std::abs((well_d1(u + h) - well_d1(u - h)) / (2 * h) - well_d2(u)) < 1e-6);
    }
}

TEST_CASE("phase-field params") {
    const PhaseFieldParams p(0.04, 0.5);
    CHECK(p.thickness() == doctest::Approx(0.2));
    CHECK_THROWS_AS(PhaseFieldParams(0.0), ConfigError);
    CHECK_THROWS_AS(PhaseFieldParams(0.1, 1.5), ConfigError);
}

TEST_CASE("init_phase_field profile of a ball") {
    const int n = 64;
    const double eps = 1.5 / n;
    const auto ball = gen_sphere(n, 0.25, {0.5, 0.5, 0.5});
    const auto u = init_phase_field(ball, PhaseFieldParams(eps));
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(u[i] >= 0.0);
        CHECK(u[i] <= 1.0);
    }
    // Ray along +x from the centre: non-increasing outward.
    for (int i = 32; i < n - 1; ++i) CHECK(u.at(i + 1, 32, 32) <= u.at(i, 32, 32));
    // Deep inside: d = -0.25 ~ -10.7 eps.
    CHECK(u.at(32, 32, 32) > 0.9999);
    // The voxel straddling the interface along the ray.
    double best = 1.0;
    for (int i = 32; i < n; ++i) best = std::min(best, std::abs(u.at(i, 32, 32) - 0.5));
    CHECK(best <= 0.15);
}

TEST_CASE("init_phase_field rejects empty or full sets") {
    const auto g = GridSpec::cube(8);
    CHECK_THROWS_AS(init_phase_field(BinaryVolume(g), PhaseFieldParams(0.1)), DegenerateInputError);
    CHECK_THROWS_AS(init_phase_field(BinaryVolume(g, true), PhaseFieldParams(0.1)),
                    DegenerateInputError);
}

TEST_CASE("obstacle projection") {
    const auto g = GridSpec::cube(6);
    const auto trivial = ObstaclePair::trivial(g);
    const auto u = ts::random_field(g, 3, 0.0, 1.0);
    CHECK(ts::max_abs_diff(project_obstacle(u, trivial), u) == 0.0);

    const ScalarField3D two(g, 2.0);
    const auto p2 = project_obstacle(two, trivial);
    for (std::size_t i = 0; i < p2.size(); ++i) CHECK(p2[i] == 1.0);

    ObstaclePair box{ts::random_field(g, 4, 0.0, 0.4), ts::random_field(g, 5, 0.6, 1.0)};
    const auto v = ts::random_field(g, 6, -1.0, 2.0);
    const auto once = project_obstacle(v, box);
    const auto twice = project_obstacle(once, box);
    CHECK(ts::max_abs_diff(once, twice) == 0.0);
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i] >= box.lower[i]);
        CHECK(once[i] <= box.upper[i]);
    }
}

TEST_CASE("projection is non-expansive in the max norm") {
    const auto g = GridSpec::cube(5);
    ObstaclePair box{ts::random_field(g, 10, 0.0, 0.5), ts::random_field(g, 11, 0.5, 1.0)};
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto a = ts::random_field(g, 100 + s, -1.0, 2.0);
        const auto b = ts::random_field(g, 200 + s, -1.0, 2.0);
        const double lhs = ts::max_abs_diff(project_obstacle(a, box), project_obstacle(b, box));
        CHECK(lhs <= ts::max_abs_diff(a, b));
    }
}

TEST_CASE("crossed bounds are infeasible") {
    const auto g = GridSpec::cube(4);
    ObstaclePair bad{ScalarField3D(g, 0.6), ScalarField3D(g, 0.4)};
    CHECK_THROWS_AS(bad.validate(), InfeasibleConstraintsError);
    CHECK_THROWS_AS(project_obstacle(ScalarField3D(g), bad), InfeasibleConstraintsError);
}
