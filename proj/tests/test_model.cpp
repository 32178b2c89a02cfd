#include <doctest.h>

#include <cmath>
#include <random>

#include "plasmonqd/errors.hpp"
#include "plasmonqd/model.hpp"

using namespace plasmonqd;

namespace {

ModelParams lossless(double kd, double delta) {
    ModelParams p;
    p.kd = kd;
    p.delta = delta;
    return p;
}

void check_close(cplx got, cplx want, double tol) {
    CHECK(std::abs(got - want) <= tol);
}

}  // namespace

TEST_CASE("superradiant rate") {
    CHECK(std::abs(superradiant_rate(pi, 0.025)) < 1e-17);
    check_close(superradiant_rate(1e-10, 0.05), cplx(0.0, 0.025), 1e-18);
    check_close(superradiant_rate(0.0, 0.05), cplx(0.0, 0.025), 0.0);
    check_close(superradiant_rate(pi / 2, 0.025), cplx(0.0, 0.025 / pi), 1e-17);
    // just above the series cut-off the two branches agree
    check_close(superradiant_rate(2e-8, 0.05), superradiant_rate(0.5e-8, 0.05), 1e-17);
}

TEST_CASE("two-dot amplitudes against an independent 6x6 solve") {
    // reference: all six coefficient relations solved as one dense linear system
    {
        ModelParams p;
        p.kd = 1.1;
        p.delta = 0.37;
        p.gamma0 = 0.03;
        p.gamma_nr = 0.02;
        p.k0d = 1.1;
        p.include_superradiance = true;
        const auto s = solve_two_dot(p);
        check_close(s.xi1, {0.6120446433555381, -1.5904233604500559}, 1e-13);
        check_close(s.xi2, {0.35674156598994727, -0.40818669066570556}, 1e-13);
        check_close(s.a, {0.20478831977497208, -0.30602232167776905}, 1e-13);
        check_close(s.b, {0.066389404773288654, -0.26279778684236199}, 1e-13);
        check_close(s.t, {-0.046752984701822542, -0.2050411255197338}, 1e-13);
        check_close(s.r, {-0.72882227545173928, -0.56882010852013098}, 1e-13);
        CHECK(s.residual <= 1e-12);
    }
    {
        ModelParams p;
        p.kd = pi / 4;
        p.gamma0 = 0.025;
        p.gamma_nr = 0.025;
        const auto s = solve_two_dot(p);
        check_close(s.t, {0.0012440723198140699, 0.0011284102674050216}, 1e-13);
        check_close(s.r, {-0.95130627593580486, -0.0011848307807752684}, 1e-13);
        check_close(s.xi1, {-0.047393231231010864, -1.9477489625678106}, 1e-13);
    }
    {
        const auto s = solve_two_dot(lossless(2.5, -0.8));
        check_close(s.t, {0.22805538148769053, 0.51444623072225859}, 1e-13);
        check_close(s.r, {-0.4049414123320767, 0.72066515889743665}, 1e-13);
        CHECK(s.T == doctest::Approx(0.3166641813298353).epsilon(1e-12));
    }
}

TEST_CASE("zero reflection at kd = pi/4, delta = -1/2") {
    const auto s = solve_two_dot(lossless(pi / 4, -0.5 * std::tan(pi / 4)));
    CHECK(std::abs(s.r) < 1e-15);
    CHECK(std::abs(s.T - 1.0) < 1e-14);
}

TEST_CASE("kd = 2 pi collapses onto one emitter") {
    ModelParams p;
    p.kd = 2 * pi;
    p.gamma0 = 0.025;
    p.gamma_nr = 0.025;
    const auto s = solve_two_dot(p);
    CHECK(std::abs(s.xi1 - s.xi2) < 1e-12);
    const auto single = solve_single_dot(0.05, 0.0, 2.0);
    CHECK(std::abs(s.R - single.R) < 1e-10);
}

TEST_CASE("single dot closed form") {
    auto s = solve_single_dot(0.0, 0.0);
    CHECK(s.R == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.T < 1e-30);
    s = solve_single_dot(0.0, 1e7);
    CHECK(s.T > 1.0 - 1e-14);
    s = solve_single_dot(0.05, 0.0);
    CHECK(s.R == doctest::Approx(1.0 / (1.05 * 1.05)).epsilon(1e-14));
    CHECK(s.residual <= 1e-12);
    CHECK_THROWS_AS(solve_single_dot(-0.1, 0.0), InvalidParams);
}

TEST_CASE("probabilities") {
    ScatteringSolution s;
    s.t = 1.0;
    s.r = 0.0;
    auto p = probabilities(s);
    CHECK(p.T == 1.0);
    CHECK(p.R == 0.0);
    CHECK(p.Loss == 0.0);
    s.t = 0.0;
    s.r = -1.0;
    p = probabilities(s);
    CHECK(p.R == 1.0);
    CHECK(p.Loss == 0.0);
    const auto sol = solve_two_dot(lossless(pi / 4, 0.3));
    CHECK(std::abs(probabilities(sol).Loss) < 1e-10);
}

TEST_CASE("flux conservation and residuals on a 100x100 grid") {
    double worst_flux = 0.0, worst_res = 0.0;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const auto s = solve_two_dot(lossless(2 * pi * (i + 0.5) / 100, -3.0 + 6.0 * (j + 0.5) / 100));
            worst_flux = std::max(worst_flux, std::abs(s.T + s.R - 1.0));
            worst_res = std::max(worst_res, s.residual);
        }
    CHECK(worst_flux < 1e-10);
    CHECK(worst_res <= 1e-12);
}

TEST_CASE("lossy and super-radiant points: loss positive, residual small") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> kd(0.01, 4 * pi), del(-4, 4), rate(0.0, 0.3);
    for (int n = 0; n < 2000; ++n) {
        ModelParams p;
        p.kd = kd(rng);
        p.delta = del(rng);
        p.gamma0 = rate(rng);
        p.gamma_nr = rate(rng);
        p.k0d = p.kd;
        p.include_superradiance = n % 2 == 0;
        const auto s = solve_two_dot(p);
        CHECK(s.residual <= 1e-12);
        CHECK(s.T >= 0.0);
        CHECK(s.R >= 0.0);
        CHECK(s.Loss >= -1e-12);
        CHECK(coefficient_residual(p, s) == doctest::Approx(s.residual));
    }
}

TEST_CASE("symmetric line at kd = n pi") {
    for (int n = 1; n <= 4; ++n)
        for (double d : {0.1, 0.5, 1.3, 2.9}) {
            ModelParams p = lossless(n * pi, d);
            p.gamma_nr = 0.05;
            const double rp = solve_two_dot(p).R;
            p.delta = -d;
            CHECK(std::abs(rp - solve_two_dot(p).R) < 1e-10);
        }
}

TEST_CASE("kd = 2 n pi matches the single emitter with doubled width") {
    for (int n = 1; n <= 3; ++n)
        for (double gp : {0.0, 0.05, 0.3})
            for (double d = -3.0; d <= 3.0; d += 0.173) {
                ModelParams p = lossless(2 * n * pi, d);
                p.gamma_nr = gp;
                const auto two = solve_two_dot(p);
                const auto one = solve_single_dot(gp, d, 2.0);
                CHECK(std::abs(two.t - one.t) < 1e-10);
                CHECK(std::abs(two.r - one.r) < 1e-10);
            }
}

TEST_CASE("xi swap symmetry") {
    for (double d : {-2.0, -0.4, 0.7, 2.2}) {
        auto s = solve_two_dot(lossless(2 * pi, d));
        CHECK(std::abs(s.xi1 - s.xi2) < 1e-10);
        s = solve_two_dot(lossless(3 * pi, d));
        CHECK(std::abs(s.xi1 + s.xi2) < 1e-10);
    }
}

TEST_CASE("dark point is reported, not regularised") {
    CHECK_THROWS_AS(solve_two_dot(lossless(2 * pi, 0.0)), SingularSystem);
    CHECK_THROWS_AS(solve_two_dot(lossless(pi, 0.0)), SingularSystem);
    ModelParams p = lossless(2 * pi, 0.0);
    p.gamma_nr = 1e-6;
    CHECK_NOTHROW(solve_two_dot(p));
}

TEST_CASE("parameter validation") {
    ModelParams p;
    p.gamma0 = -0.1;
    CHECK_THROWS_AS(solve_two_dot(p), InvalidParams);
    p = ModelParams{};
    p.include_superradiance = true;
    p.k0d = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParams);
    p.k0d = std::nan("");
    CHECK_THROWS_AS(p.validate(), InvalidParams);
}

TEST_CASE("solver diagnostics track every call") {
    const auto before = solver_diagnostics();
    solve_two_dot(lossless(1.0, 0.2));
    solve_single_dot(0.1, 0.3);
    const auto after = solver_diagnostics();
    CHECK(after.calls == before.calls + 2);
    CHECK(after.max_residual <= 1e-12);
}
