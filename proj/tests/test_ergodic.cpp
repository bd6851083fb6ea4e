// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "kanlab/ergodic.hpp"
#include "kanlab/rng.hpp"
#include "kanlab/systems.hpp"

using namespace kanlab;

namespace {
const double kK4Closed = std::log((1.0 + std::sqrt(1.0 - 0.25)) / 2.0);  // eps = 1/2
}

TEST_CASE("orbit basics") {
    KanCylinderSystem sys(3, 0.5);

    SUBCASE("fixed point gives a constant sequence") {
        const PhasePoint fp{CirclePoint(0.0), 0.0};
        const auto pts = orbit_points(sys, fp, 5);
        REQUIRE(pts.size() == 6);
        for (const auto& x : pts) {
            CHECK(as_circle(x.base).value() == 0.0);
            CHECK(x.fiber == 0.0);
        }
    }

    SUBCASE("base expands by 3, invariant fiber stays put exactly") {
        const auto pts = orbit_points(sys, PhasePoint{CirclePoint(0.1), 0.0}, 4);
        REQUIRE(pts.size() == 5);
        const double expect[] = {0.1, 0.3, 0.9, 0.7, 0.1};
        for (int i = 0; i < 5; ++i) {
            CHECK(as_circle(pts[i].base).value() == doctest::Approx(expect[i]).epsilon(1e-12));
            CHECK(pts[i].fiber == 0.0);
        }
    }

    SUBCASE("n = 0 gives only the initial point") {
        const auto pts = orbit_points(sys, PhasePoint{CirclePoint(0.3), 0.25}, 0);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].fiber == 0.25);
    }

    SUBCASE("negative length rejected") {
        CHECK_THROWS_AS(orbit_points(sys, PhasePoint{CirclePoint(0.3), 0.25}, -1),
                        std::domain_error);
    }
}

TEST_CASE("birkhoff average basics") {
    KanCylinderSystem sys(3, 0.5);
    OrbitSettings s;
    s.n_transient = 0;
    s.n_average = 1000;

    SUBCASE("constant observable averages to the constant exactly") {
        const double avg = birkhoff_average(sys, PhasePoint{CirclePoint(0.37), 0.2},
                                            [](const PhasePoint&) { return 2.5; }, s);
        CHECK(avg == 2.5);
    }

    SUBCASE("fixed point returns the observable at the point") {
        const double avg = birkhoff_average(
            sys, PhasePoint{CirclePoint(0.0), 0.0},
            [](const PhasePoint& x) { return as_circle(x.base).value() + x.fiber; }, s);
        CHECK(avg == 0.0);
    }

    SUBCASE("affine in the observable") {
        const PhasePoint x0{CirclePoint(0.123), 0.0};
        const auto g = [](const PhasePoint& x) { return as_circle(x.base).value(); };
        const double avg_g = birkhoff_average(sys, x0, g, s);
        const double avg_affine = birkhoff_average(
            sys, x0, [&](const PhasePoint& x) { return 2.0 * g(x) - 3.0; }, s);
        CHECK(avg_affine == doctest::Approx(2.0 * avg_g - 3.0).epsilon(1e-12));
    }

    SUBCASE("theta equidistributes on the invariant circle") {
        // Lebesgue is the ergodic invariant measure of theta -> 3 theta;
        // the quadrature oracle for the observable is int theta dtheta = 1/2.
        OrbitSettings big;
        big.n_transient = 100;
        big.n_average = 1'000'000;
        big.seed = 4242;
        const PhasePoint x0 = random_point_on_level(sys, 0.0, big.seed);
        const double avg = birkhoff_average(
            sys, x0, [](const PhasePoint& x) { return as_circle(x.base).value(); }, big);
        CHECK(std::fabs(avg - 0.5) < 5e-3);
    }
}

TEST_CASE("center lyapunov on constant orbits is exact") {
    SUBCASE("cylinder boundary fixed point") {
        KanCylinderSystem sys(3, 0.5);
        OrbitSettings s;
        s.n_transient = 0;
        s.n_average = 1000;
        const auto est = center_lyapunov(sys, PhasePoint{CirclePoint(0.0), 0.0}, s);
        // constant orbit: the multiplier is 1 - eps at every iterate, so the
        // estimate equals log(0.5) up to averaging round-off
        CHECK(est.center == doctest::Approx(std::log(0.5)).epsilon(1e-15));
        CHECK(est.standard_error <= 1e-15);
        CHECK(est.n_used == 1000);
        CHECK(est.base_unstable == std::log(3.0));
        CHECK_FALSE(est.base_stable.has_value());
    }
    SUBCASE("toy sink circle") {
        ToySystem sys(Mat2i{2, 1, 1, 1}, 0.5);
        OrbitSettings s;
        s.n_transient = 10;
        s.n_average = 2000;
        s.seed = 7;
        const auto est = center_lyapunov(sys, random_point_on_level(sys, 0.5, s.seed), s);
        CHECK(est.center == doctest::Approx(std::log(0.5)).epsilon(1e-15));  // xi'(1/2) = 1 - delta
        CHECK(est.standard_error <= 1e-15);
        const double lu = std::log((3.0 + std::sqrt(5.0)) / 2.0);
        CHECK(est.base_unstable == lu);
        REQUIRE(est.base_stable.has_value());
        CHECK(*est.base_stable == -lu);
        // partial hyperbolicity ordering at the attractor
        CHECK(*est.base_stable < est.center);
        CHECK(est.center < est.base_unstable);
    }
}

TEST_CASE("center lyapunov on the invariant circle matches the K4 integral") {
    KanCylinderSystem sys(3, 0.5);
    OrbitSettings s;
    s.n_transient = 1000;
    s.n_average = 1'000'000;
    s.seed = 20240817ull;
    const auto est = center_lyapunov(sys, random_point_on_level(sys, 0.0, s.seed), s);
    CHECK(std::fabs(est.center - kK4Closed) <= 3.0 * est.standard_error);
    CHECK(std::fabs(est.center - kK4Closed) <= 0.01);
    CHECK(est.standard_error > 0.0);
    CHECK(est.n_used == 1'000'000);
}

TEST_CASE("center lyapunov determinism") {
    KanCylinderSystem sys(3, 0.5);
    OrbitSettings s;
    s.n_transient = 50;
    s.n_average = 20'000;
    s.seed = 99;
    const PhasePoint x0 = random_point_on_level(sys, 0.0, s.seed);
    const auto a = center_lyapunov(sys, x0, s);
    const auto b = center_lyapunov(sys, x0, s);
    CHECK(a.center == b.center);
    CHECK(a.standard_error == b.standard_error);
    const auto c = center_lyapunov(sys, random_point_on_level(sys, 0.0, 100), s);
    CHECK(a.center != c.center);  // different seed, different orbit
}

TEST_CASE("boundary log integral: cylinder closed form") {
    KanCylinderSystem sys(3, 0.5);
    const double i0 = boundary_log_integral(sys, 0.0);
    const double i1 = boundary_log_integral(sys, 1.0);
    CHECK(std::fabs(i0 - kK4Closed) <= 1e-8);
    CHECK(std::fabs(i1 - kK4Closed) <= 1e-8);
    CHECK(std::fabs(i0 - i1) <= 1e-10);  // theta -> theta + 1/2 symmetry
    CHECK(i0 < 0.0);
}

TEST_CASE("boundary log integral: t3 and solid torus") {
    SUBCASE("t3 boundary integrals are negative and equal") {
        KanT3System sys;
        const double i0 = boundary_log_integral(sys, 0.0);
        const double ih = boundary_log_integral(sys, 0.5);
        CHECK(i0 < 0.0);
        CHECK(std::fabs(i0 - ih) <= 1e-6);
    }
    SUBCASE("solid torus level-0 integral matches the radial oracle") {
        // The coupling is radial in each disjoint bump support, so
        //   int_{T^2} log|d_t psi(z, 0)| dz = 2 pi r^2 int_0^1 u log(1 - eps^2 beta(u)^2) du.
        KanSolidTorusSystem sys;
        const double eps = sys.eps();
        const double r = sys.bump_radius();
        const int n = 200'000;
        CompensatedSum oracle;
        for (int i = 0; i < n; ++i) {
            const double u = (i + 0.5) / n;
            const double beta = detail::bump(u);
            oracle.add(u * std::log(1.0 - eps * eps * beta * beta));
        }
        const double expected = 2.0 * M_PI * r * r * oracle.value() / n;
        const double i0 = boundary_log_integral(sys, 0.0);
        CHECK(std::fabs(i0 - expected) <= 1e-6);
        CHECK(i0 < 0.0);
    }
}

TEST_CASE("boundary log integral: toy levels are the fixed multiplier logs") {
    ToySystem sys(Mat2i{2, 1, 1, 1}, 0.5);
    CHECK(boundary_log_integral(sys, 0.0) == doctest::Approx(std::log(1.5)).epsilon(1e-12));
    CHECK(boundary_log_integral(sys, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("boundary log integral rejects bad input") {
    KanCylinderSystem sys(3, 0.5);
    CHECK_THROWS_AS(boundary_log_integral(sys, 0.25), std::domain_error);
    QuadratureSettings quad;
    quad.samples_1d = 8;
    CHECK_THROWS_AS(boundary_log_integral(sys, 0.0, quad), std::domain_error);
}

TEST_CASE("random phase points are deterministic in the seed") {
    KanT3System sys;
    const PhasePoint a = random_phase_point(sys, 13);
    const PhasePoint b = random_phase_point(sys, 13);
    CHECK(as_torus(a.base) == as_torus(b.base));
    CHECK(a.fiber == b.fiber);
    const PhasePoint c = random_phase_point(sys, 14);
    CHECK(as_torus(a.base).u.value() != as_torus(c.base).u.value());

    CHECK_THROWS_AS(random_point_on_level(sys, 0.3, 1), std::domain_error);
    const PhasePoint lvl = random_point_on_level(sys, 0.5, 21);
    CHECK(lvl.fiber == 0.5);
}
