#include <doctest.h>

#include <cmath>
#include <random>

#include "plasmonqd/entanglement.hpp"
#include "plasmonqd/errors.hpp"
#include "plasmonqd/spectra.hpp"

using namespace plasmonqd;

TEST_CASE("concurrence basics") {
    CHECK(concurrence({1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(concurrence({1, 0}, {0, 0}) == 0.0);
    auto s = project_state({0.3, 0.4}, {0.3, 0.4});
    CHECK(s.concurrence == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(s.theta) < 1e-15);
    s = project_state({0.3, 0}, {-0.3, 0});
    CHECK(s.theta == doctest::Approx(pi));
    CHECK_THROWS_AS(project_state({0, 0}, {1e-16, 0}), EmptyProjection);
}

TEST_CASE("normalisation and scale invariance") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const cplx x1{n(rng), n(rng)}, x2{n(rng), n(rng)}, z{n(rng), n(rng)};
        const auto a = project_state(x1, x2);
        const auto b = project_state(z * x1, z * x2);
        CHECK(std::abs(std::norm(a.xi1) + std::norm(a.xi2) - 1.0) < 1e-12);
        CHECK(std::abs(a.concurrence - 2 * std::abs(a.xi1) * std::abs(a.xi2)) < 1e-12);
        CHECK(std::abs(a.concurrence - b.concurrence) < 1e-12);
        CHECK(std::abs(std::polar(1.0, a.theta) - std::polar(1.0, b.theta)) < 1e-12);
        CHECK(a.theta > -pi);
        CHECK(a.theta <= pi);
    }
}

TEST_CASE("maximal entanglement at kd = n pi") {
    for (int n = 1; n <= 4; ++n)
        for (double d = -3.0; d <= 3.0; d += 0.25) {
            if (std::abs(d) < 1e-9) continue;
            ModelParams p;
            p.kd = n * pi;
            p.delta = d;
            const auto s = project_state(solve_two_dot(p));
            CHECK(std::abs(s.concurrence - 1.0) < 1e-10);
            CHECK(std::abs(std::polar(1.0, s.theta) - (n % 2 ? -1.0 : 1.0)) < 1e-10);
        }
}

TEST_CASE("high concurrence curve") {
    CHECK(high_c_curve(pi, 0.0) == doctest::Approx(0.0));
    CHECK(high_c_curve(pi / 4, 0.0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(high_c_curve(pi / 4, 0.05) == doctest::Approx(-0.525).epsilon(1e-14));
    CHECK_THROWS_AS(high_c_curve(pi / 2 + 1e-7, 0.0), TangentPole);
    for (double kd = 0.1; kd < 2 * pi; kd += 0.13) {
        if (near_tangent_pole(kd, 1e-3)) continue;
        ModelParams p;
        p.kd = kd;
        p.delta = high_c_curve(kd, 0.0);
        const auto s = project_state(solve_two_dot(p));
        CHECK(s.concurrence >= 0.99);
    }
}

TEST_CASE("resonant dot shields its partner; far detuning excites both alike") {
    ModelParams p;
    p.kd = 0.7 * pi;
    p.delta = 0.0;
    CHECK(project_state(solve_two_dot(p)).concurrence < 1e-12);
    p.delta = 0.2;
    CHECK(project_state(solve_two_dot(p)).concurrence < 0.9);
    p.delta = 3.0;
    const double c3 = project_state(solve_two_dot(p)).concurrence;
    p.delta = 30.0;
    const double c30 = project_state(solve_two_dot(p)).concurrence;
    CHECK(c3 > 0.98);
    CHECK(c30 > c3);
}

TEST_CASE("concurrence map") {
    std::vector<double> kds{2 * pi, 3 * pi, 1.0}, ds;
    for (int i = 0; i < 21; ++i) ds.push_back(-3.0 + 0.3 * i);
    const auto map = concurrence_map(kds, ds, ModelParams{}, 2);
    REQUIRE(map.cells.size() == kds.size() * ds.size());
    for (std::size_t j = 0; j < ds.size(); ++j) {
        for (int k = 0; k < 2; ++k) {
            const auto& c = map.cells[k * ds.size() + j];
            REQUIRE(c.C.has_value());
            CHECK(*c.C >= 0.999);
            CHECK(c.limit == (std::abs(ds[j]) < 1e-12));
        }
    }
    CHECK(map.cells[0].kd == 2 * pi);
    CHECK(map.cells[1].delta == ds[1]);
    CHECK_FALSE(map.warnings.empty());
    for (const auto& c : map.cells)
        if (c.C) {
            CHECK(*c.C >= 0.0);
            CHECK(*c.C <= 1.0 + 1e-12);
        }
}

TEST_CASE("phase along the high concurrence branch") {
    std::vector<double> ds;
    for (int i = -7500; i <= 7500; ++i) ds.push_back(2e-4 * i);
    const auto rows = phase_scan(ds, {0.0, 0.025, 0.125});
    REQUIRE(rows.size() == 3 * ds.size());
    for (std::size_t g = 0; g < 3; ++g) {
        const auto* blk = &rows[g * ds.size()];
        const auto& mid = blk[7500];
        if (g == 0) {
            CHECK(mid.limit);
            CHECK(std::abs(mid.theta - pi) < 1e-6);
        } else {
            CHECK(std::abs(mid.theta) < 1e-6);
        }
        // continuous on the branch: with loss theta sweeps through 0 over a width ~gamma'
        for (std::size_t i = 1; i < ds.size(); ++i) {
            const double jump = std::abs(std::remainder(blk[i].theta - blk[i - 1].theta, 2 * pi));
            CHECK(jump < 0.1);
        }
        CHECK(std::abs(std::remainder(blk[0].theta + blk[15000].theta, 2 * pi)) < 1e-9);
    }
    KdPolicy bad;
    bad.centre = 1.0;
    CHECK_THROWS_AS(phase_scan(ds, {0.0}, bad), InvalidParams);
}

TEST_CASE("kd policy stays on its branch") {
    KdPolicy pol;
    for (double d : {-5.0, -0.3, 0.0, 0.4, 7.0}) {
        const double kd = pol.kd_for(d, 0.05);
        CHECK(kd > 1.5 * pi);
        CHECK(kd < 2.5 * pi);
        CHECK(-0.5 * 1.05 * std::tan(kd) == doctest::Approx(d).epsilon(1e-10));
    }
}
