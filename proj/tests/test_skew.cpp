#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ergo/metrics.hpp"
#include "ergo/rng.hpp"
#include "ergo/skew.hpp"
#include "ergo/unipotent.hpp"

using namespace ergo;

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(furstenberg_default(2, {1}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(furstenberg_default(2, {1}, 355.0 / 113.0 - 3.0), std::invalid_argument);
    CHECK_NOTHROW(furstenberg_default(2, {1}, golden_alpha()));
    CHECK_NOTHROW(furstenberg_default(4, {1, 1, 2}, golden_alpha()));
    CHECK_THROWS_AS(SkewSystem(2, golden_alpha(), {FunctionSpec(1, 2)}), std::invalid_argument);
}

TEST_CASE("step arithmetic") {
    SkewSystem sys = furstenberg_default(2, {1}, golden_alpha());
    auto p = sys.step(std::vector<double>{0.0, 0.0});
    CHECK(p[0] == doctest::Approx(golden_alpha()));
    CHECK(p[1] == doctest::Approx(0.0));
    auto q = sys.step(p);
    CHECK(q[0] == doctest::Approx(wrap(2 * golden_alpha())));
    CHECK(q[1] == doctest::Approx(golden_alpha()));
}

TEST_CASE("base coordinate is the rotation") {
    SkewSystem sys = furstenberg_default(3, {1, 1}, golden_alpha());
    std::vector<double> p{0.123, 0.456, 0.789};
    double x0 = p[0];
    for (int n = 1; n <= 40; ++n) {
        p = sys.step(p);
        CHECK(circ_dist(p[0], wrap(x0 + n * golden_alpha())) < 1e-9);
    }
}

TEST_CASE("step commutes with the factor map") {
    FunctionSpec f1(1, 1, {{{1}, 0.2, -0.1}});
    FunctionSpec f2(2, 2, {{{1, 1}, 0.05, 0.0}});
    SkewSystem sys(3, golden_alpha(), {f1, f2});
    SkewSystem truncated(2, golden_alpha(), {f1});
    std::vector<double> p{0.3, 0.6, 0.9};
    auto full = sys.step(p);
    auto proj = truncated.step(std::vector<double>{p[0], p[1]});
    CHECK(full[0] == proj[0]);
    CHECK(full[1] == proj[1]);
}

TEST_CASE("derivative_step closed forms") {
    SUBCASE("winding 1") {
        SkewSystem sys = furstenberg_default(2, {1}, golden_alpha());
        double p[2] = {0.37, 0.11};
        auto m = derivative_step(sys, p);
        CHECK(m.at(1, 2) == doctest::Approx(1.0));
    }
    SUBCASE("winding plus harmonic") {
        FunctionSpec f(1, 1, {{{1}, 0.0, 1.0 / two_pi}});
        SkewSystem sys(2, golden_alpha(), {f});
        for (double x : {0.0, 0.1, 0.37, 0.92}) {
            double p[2] = {x, 0.5};
            auto m = derivative_step(sys, p);
            CHECK(m.at(1, 2) == doctest::Approx(1.0 + std::cos(two_pi * x)));
        }
    }
}

TEST_CASE("derivative matches finite differences along orbits") {
    FunctionSpec f1(1, 1, {{{1}, 0.1, -0.05}});
    FunctionSpec f2(1, 2, {{{1, 1}, 0.04, 0.02}, {{0, 1}, -0.03, 0.06}});
    SkewSystem sys(3, golden_alpha(), {f1, f2});
    auto g = rng_stream(21, "fd");
    const double h = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x{uniform01(g), uniform01(g), uniform01(g)};
        for (long n : {1L, 2L, 10L, 50L}) {
            // Cocycle product along the orbit.
            Unipotent<double> jac = identity<double>(3);
            std::vector<double> cur = x;
            for (long k = 0; k < n; ++k) {
                jac = derivative_step(sys, cur.data()) * jac;
                cur = sys.step(cur);
            }
            // Finite differences of the n-step map, basis (d/dx_3,d/dx_2,d/dx_1).
            for (int i = 1; i <= 3; ++i)
                for (int j = i + 1; j <= 3; ++j) {
                    int c_out = 4 - i, c_in = 4 - j;
                    std::vector<double> xp = x, xm = x;
                    xp[c_in - 1] += h;
                    xm[c_in - 1] -= h;
                    for (long k = 0; k < n; ++k) {
                        xp = sys.step(xp);
                        xm = sys.step(xm);
                    }
                    double fd = circ_signed(xp[c_out - 1], xm[c_out - 1]) / (2 * h);
                    double tol = (n <= 2) ? 1e-4 : 1e-3;
                    CHECK(jac.at(i, j) ==
                          doctest::Approx(fd).epsilon(tol).scale(std::max(1.0, std::fabs(fd))));
                }
        }
    }
}

TEST_CASE("winding is the exact integral of the diagonal skew derivative") {
    FunctionSpec f(3, 1, {{{1}, 0.2, 0.4}, {{2}, -0.1, 0.05}});
    // Trapezoid over a fine grid; the trig parts integrate to zero exactly.
    const int N = 4096;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += f.deriv(double(i) / N);
    CHECK(acc / N == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("vertical_rotation_defect") {
    SkewSystem sys = furstenberg_default(2, {1}, golden_alpha());
    ParticleCloud mu = stratified_section_cloud(2, 2000, 0.37);
    CHECK(vertical_rotation_defect(sys, mu, 0.0, 5, 8, 1.0) == 0.0);
    // Product cloud (Lebesgue x Lebesgue) is already invariant.
    ParticleCloud grid = stratified_grid_cloud(2, 45);
    CHECK(vertical_rotation_defect(sys, grid, 0.37, 0, 8, 1.0) < 1e-6);
}

TEST_CASE("system JSON round trip") {
    FunctionSpec f1(1, 1, {{{2}, 0.25, -0.125}});
    FunctionSpec f2(2, 2, {{{1, -1}, 0.0625, 0.5}});
    SkewSystem sys(3, golden_alpha(), {f1, f2});
    SkewSystem back = skew_system_from_json(skew_system_json(sys));
    CHECK(back.d == 3);
    CHECK(back.alpha == sys.alpha);
    REQUIRE(back.skews.size() == 2);
    CHECK(back.skews[0].winding == 1);
    CHECK(back.skews[1].winding == 2);
    CHECK(back.skews[1].harmonics[0].freq == std::vector<int>{1, -1});
    CHECK(back.skews[1].harmonics[0].a == 0.0625);
    CHECK(back.skews[1].harmonics[0].b == 0.5);
    CHECK(skew_system_json(sys).find("\"format\": 1") != std::string::npos);
}
