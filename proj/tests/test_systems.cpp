// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "kanlab/ergodic.hpp"
#include "kanlab/rng.hpp"
#include "kanlab/systems.hpp"

using namespace kanlab;

namespace {

// Central finite difference of the fiber map, circle-aware so the wrap does
// not break the quotient near t = 0.
double fd_fiber_derivative(const SkewProductSystem& sys, const BasePoint& b, double t,
                           double h = 1e-6) {
    const double fp = sys.fiber_map(b, t + h);
    const double fm = sys.fiber_map(b, t - h);
    double d = fp - fm;
    if (sys.fiber_kind() == FiberKind::Circle) {
        d = wrap_unit(d + 0.5) - 0.5;
    }
    return d / (2.0 * h);
}

BasePoint random_base(const SkewProductSystem& sys, SplitMix64& rng) {
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        return CirclePoint(rng.next_unit());
    }
    const double u = rng.next_unit();
    const double v = rng.next_unit();
    return TorusPoint(u, v);
}

}  // namespace

TEST_CASE("kan cylinder map examples") {
    KanCylinderSystem sys(3, 0.5);

    const PhasePoint a = sys.map(PhasePoint{CirclePoint(0.0), 0.0});
    CHECK(as_circle(a.base).value() == 0.0);
    CHECK(a.fiber == 0.0);

    const PhasePoint b = sys.map(PhasePoint{CirclePoint(0.5), 1.0});
    CHECK(as_circle(b.base).value() == 0.5);  // 3 * 1/2 = 1/2 mod 1
    CHECK(b.fiber == 1.0);                    // boundary fixed exactly

    const PhasePoint c = sys.map(PhasePoint{CirclePoint(0.25), 0.5});
    CHECK(as_circle(c.base).value() == 0.75);
    CHECK(c.fiber == 0.5);  // cos(2 pi / 4) = 0 exactly
}

TEST_CASE("kan cylinder rejects invalid points and parameters") {
    KanCylinderSystem sys(3, 0.5);
    CHECK_THROWS_AS(sys.map(PhasePoint{CirclePoint(0.1), 1.5}), std::domain_error);
    CHECK_THROWS_AS(sys.map(PhasePoint{CirclePoint(0.1), -0.1}), std::domain_error);
    CHECK_THROWS_AS(sys.map(PhasePoint{TorusPoint(0.1, 0.2), 0.5}), std::domain_error);
    CHECK_THROWS_AS(KanCylinderSystem(2, 0.5), std::domain_error);
    CHECK_THROWS_AS(KanCylinderSystem(3, 1.0), std::domain_error);
    CHECK_THROWS_AS(KanCylinderSystem(3, -0.1), std::domain_error);
    CHECK_NOTHROW(KanCylinderSystem(3, 0.0));  // degenerate but constructible
}

TEST_CASE("kan cylinder fiber derivative examples") {
    KanCylinderSystem sys(3, 0.5);
    CHECK(sys.fiber_derivative(CirclePoint(0.0), 0.0) == 0.5);
    CHECK(sys.fiber_derivative(CirclePoint(0.5), 0.0) == 1.5);
    CHECK(sys.fiber_derivative(CirclePoint(0.123), 0.5) == 1.0);  // factor (1-2t) vanishes
    CHECK(sys.fiber_derivative(CirclePoint(0.87), 0.5) == 1.0);
}

TEST_CASE("toy map examples") {
    ToySystem sys(Mat2i{2, 1, 1, 1}, 0.5);

    const PhasePoint a = sys.map(PhasePoint{TorusPoint(0.0, 0.0), 0.0});
    CHECK(as_torus(a.base) == TorusPoint(0.0, 0.0));
    CHECK(a.fiber == 0.0);

    const PhasePoint b = sys.map(PhasePoint{TorusPoint(0.0, 0.0), 0.5});
    CHECK(b.fiber == 0.5);  // sin(pi) = 0 exactly, invariant circle

    const PhasePoint c = sys.map(PhasePoint{TorusPoint(0.5, 0.5), 0.25});
    CHECK(as_torus(c.base).u.value() == 0.5);  // (2*0.5 + 0.5) mod 1
    CHECK(as_torus(c.base).v.value() == 0.0);  // (0.5 + 0.5) mod 1
    CHECK(c.fiber == doctest::Approx(0.25 + 0.5 / (2.0 * M_PI)).epsilon(1e-15));
}

TEST_CASE("toy construction guards") {
    CHECK_THROWS_AS(ToySystem(Mat2i{1, 1, 0, 1}, 0.5), std::domain_error);   // parabolic
    CHECK_THROWS_AS(ToySystem(Mat2i{0, 1, -1, 0}, 0.5), std::domain_error);  // rotation
    CHECK_THROWS_AS(ToySystem(Mat2i{2, 0, 0, 2}, 0.5), std::domain_error);   // |det| != 1
    CHECK_THROWS_AS(ToySystem(Mat2i{2, 1, 1, 1}, 0.0), std::domain_error);
    CHECK_THROWS_AS(ToySystem(Mat2i{2, 1, 1, 1}, 1.0), std::domain_error);
    CHECK_NOTHROW(ToySystem(Mat2i{2, 1, 1, 1}, 0.9));  // domination left to the validator
}

TEST_CASE("kan t3 map examples") {
    KanT3System sys;  // defaults: M = [[5,3],[3,2]], eps = 1/2, r = 0.2

    CHECK(sys.p() == TorusPoint(0.0, 0.0));
    CHECK(sys.q() == TorusPoint(0.2, 0.4));

    const PhasePoint a = sys.map(PhasePoint{sys.p(), 0.0});
    CHECK(as_torus(a.base) == sys.p());
    CHECK(a.fiber == 0.0);

    // far from both bumps the fiber coordinate is untouched
    const TorusPoint far(0.7, 0.05);
    CHECK(sys.coupling(far) == 0.0);
    const PhasePoint b = sys.map(PhasePoint{far, 0.33});
    CHECK(b.fiber == 0.33);

    // over q the coupling is -1, so phi = t + (eps/2pi) sin(2 pi t)
    const PhasePoint c = sys.map(PhasePoint{sys.q(), 0.25});
    CHECK(c.fiber == doctest::Approx(0.25 + 0.5 / (2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("bump coupling normalization") {
    KanT3System sys;
    CHECK(sys.coupling(sys.p()) == 1.0);
    CHECK(sys.coupling(sys.q()) == -1.0);
    // on the support boundary and outside
    CHECK(sys.coupling(TorusPoint(0.2001, 0.0)) == 0.0);
    CHECK(sys.coupling(TorusPoint(0.5, 0.9)) == 0.0);
    // strictly inside the p-support
    const double inside = sys.coupling(TorusPoint(0.05, 0.0));
    CHECK(inside > 0.0);
    CHECK(inside < 1.0);
}

TEST_CASE("kan solid torus keeps interval boundaries fixed exactly") {
    KanSolidTorusSystem sys;
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const TorusPoint z(rng.next_unit(), rng.next_unit());
        CHECK(sys.fiber_map(z, 0.0) == 0.0);
        CHECK(sys.fiber_map(z, 1.0) == 1.0);
    }
}

TEST_CASE("kan torus construction guards") {
    CHECK_THROWS_AS(KanSolidTorusSystem(Mat2i{2, 1, 1, 1}), std::domain_error);  // one fixed point
    // q not a fixed point
    CHECK_THROWS_AS(KanT3System(Mat2i{5, 3, 3, 2}, 0.5, 0.2, TorusPoint(0.0, 0.0),
                                TorusPoint(0.3, 0.3)),
                    std::domain_error);
    // overlapping bump supports: dist(p,q) = sqrt(0.2) < 2r for r = 0.23
    CHECK_THROWS_AS(KanT3System(Mat2i{5, 3, 3, 2}, 0.5, 0.23), std::domain_error);
}

TEST_CASE("anosov map examples") {
    const Mat2i cat{2, 1, 1, 1};
    CHECK(anosov_map(cat, TorusPoint(0.0, 0.0)) == TorusPoint(0.0, 0.0));

    const TorusPoint half = anosov_map(cat, TorusPoint(0.5, 0.0));
    CHECK(half.u.value() == 0.0);
    CHECK(half.v.value() == 0.5);

    // (1/5, 2/5) is fixed by [[5,3],[3,2]]: (M - I) z = (2, 1) in Z^2
    const Mat2i m{5, 3, 3, 2};
    const TorusPoint q(0.2, 0.4);
    CHECK(torus_dist(anosov_map(m, q), q) < 1e-14);
}

TEST_CASE("base fixed points") {
    SUBCASE("expanding circle map") {
        KanCylinderSystem sys(3, 0.5);
        const auto pts = sys.base_fixed_points();
        REQUIRE(pts.size() == 2);
        CHECK(as_circle(pts[0]).value() == 0.0);
        CHECK(as_circle(pts[1]).value() == 0.5);
    }
    SUBCASE("cat map has only the origin") {
        ToySystem sys(Mat2i{2, 1, 1, 1}, 0.5);
        const auto pts = sys.base_fixed_points();
        REQUIRE(pts.size() == 1);
        CHECK(as_torus(pts[0]) == TorusPoint(0.0, 0.0));
    }
    SUBCASE("squared cat map has five") {
        KanT3System sys;
        const auto pts = sys.base_fixed_points();
        REQUIRE(pts.size() == 5);  // |det(M - I)| = 5
        std::set<std::pair<double, double>> got;
        for (const auto& b : pts) {
            const auto& z = as_torus(b);
            got.insert({z.u.value(), z.v.value()});
            // each enumerated point is fixed
            CHECK(torus_dist(anosov_map(sys.matrix(), z), z) < 1e-12);
        }
        CHECK(got.count({0.0, 0.0}) == 1);
        CHECK(got.count({0.2, 0.4}) == 1);
    }
}

TEST_CASE("skew-product structure: base image independent of the fiber") {
    KanCylinderSystem cyl;
    ToySystem toy;
    KanT3System t3;
    SplitMix64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const double t1 = 0.999 * rng.next_unit();
        const double t2 = 0.999 * rng.next_unit();
        for (const SkewProductSystem* sys :
             {static_cast<const SkewProductSystem*>(&cyl), static_cast<const SkewProductSystem*>(&toy),
              static_cast<const SkewProductSystem*>(&t3)}) {
            const BasePoint b = random_base(*sys, rng);
            const PhasePoint y1 = sys->map(PhasePoint{b, t1});
            const PhasePoint y2 = sys->map(PhasePoint{b, t2});
            if (sys->base_kind() == BaseKind::ExpandingCircle) {
                CHECK(as_circle(y1.base) == as_circle(y2.base));
            } else {
                CHECK(as_torus(y1.base) == as_torus(y2.base));
            }
        }
    }
}

TEST_CASE("fiber derivative matches finite differences") {
    KanCylinderSystem cyl;
    ToySystem toy;
    KanSolidTorusSystem solid;
    KanT3System t3;
    SplitMix64 rng(17);
    for (const SkewProductSystem* sys :
         {static_cast<const SkewProductSystem*>(&cyl), static_cast<const SkewProductSystem*>(&toy),
          static_cast<const SkewProductSystem*>(&solid),
          static_cast<const SkewProductSystem*>(&t3)}) {
        for (int i = 0; i < 1000; ++i) {
            const BasePoint b = random_base(*sys, rng);
            const double t = 0.01 + 0.98 * rng.next_unit();
            const double analytic = sys->fiber_derivative(b, t);
            const double fd = fd_fiber_derivative(*sys, b, t);
            CHECK(std::fabs(fd - analytic) / std::fabs(analytic) <= 1e-6);
            CHECK(analytic > 0.0);  // every fiber map is an increasing bijection
        }
    }
}

TEST_CASE("validator: kan cylinder defaults pass with the closed-form K4 integral") {
    KanCylinderSystem sys(3, 0.5);
    const auto report = validate_conditions(sys);
    CHECK(report.family == "kan_endomorphism");
    REQUIRE(report.entries.size() == 4);
    CHECK(report.all_pass());

    const auto* k4 = report.find("K4");
    REQUIRE(k4 != nullptr);
    const double closed = std::log((1.0 + std::sqrt(1.0 - 0.25)) / 2.0);  // -0.0693349...
    CHECK(std::fabs(*k4->value("integral_level0") - closed) <= 1e-8);
    CHECK(std::fabs(*k4->value("integral_level1") - closed) <= 1e-8);
    // the two boundary integrals agree by the theta -> theta + 1/2 symmetry
    CHECK(std::fabs(*k4->value("integral_level0") - *k4->value("integral_level1")) <= 1e-10);

    const auto* k2 = report.find("K2");
    REQUIRE(k2 != nullptr);
    CHECK(*k2->value("p_multiplier_level0") == 0.5);
    CHECK(*k2->value("p_multiplier_level1") == 1.5);
    CHECK(*k2->value("q_multiplier_level0") == 1.5);
    CHECK(*k2->value("q_multiplier_level1") == 0.5);

    const auto* k3 = report.find("K3");
    REQUIRE(k3 != nullptr);
    CHECK(*k3->value("sup_abs_fiber_derivative") == 1.5);
    CHECK(*k3->value("bound_upper") == 3.0);
}

TEST_CASE("validator: decoupled cylinder fails K2") {
    KanCylinderSystem sys(3, 0.0);
    const auto report = validate_conditions(sys);
    const auto* k2 = report.find("K2");
    REQUIRE(k2 != nullptr);
    CHECK_FALSE(k2->pass);  // boundary fixed points are not hyperbolic, multiplier = 1
    CHECK(*k2->value("p_multiplier_level0") == 1.0);
    CHECK_FALSE(report.all_pass());
    // K1 still holds: the boundaries are fixed even in the decoupled case
    CHECK(report.find("K1")->pass);
}

TEST_CASE("validator: toy domination") {
    SUBCASE("defaults pass") {
        ToySystem sys(Mat2i{2, 1, 1, 1}, 0.5);
        const auto report = validate_conditions(sys);
        CHECK(report.family == "toy");
        REQUIRE(report.entries.size() == 3);
        CHECK(report.all_pass());
        const auto* dom = report.find("domination");
        REQUIRE(dom != nullptr);
        CHECK(*dom->value("lambda_unstable") ==
              doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    }
    SUBCASE("delta = 0.9 fails: 1 - delta drops below |lambda_s|") {
        ToySystem sys(Mat2i{2, 1, 1, 1}, 0.9);
        const auto report = validate_conditions(sys);
        const auto* dom = report.find("domination");
        REQUIRE(dom != nullptr);
        CHECK_FALSE(dom->pass);
        CHECK(*dom->value("inf_abs_fiber_derivative") == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(*dom->value("lambda_stable") ==
              doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
        CHECK_FALSE(report.all_pass());
        // base hyperbolicity and the Morse-Smale structure are unaffected
        CHECK(report.find("base_hyperbolic")->pass);
        CHECK(report.find("fiber_morse_smale")->pass);
    }
}

TEST_CASE("validator: solid torus and t3 defaults pass") {
    SUBCASE("solid torus") {
        KanSolidTorusSystem sys;
        const auto report = validate_conditions(sys);
        CHECK(report.family == "kan_solid_torus");
        REQUIRE(report.entries.size() == 4);
        CHECK(report.all_pass());
        const auto* kd3 = report.find("KD3");
        REQUIRE(kd3 != nullptr);
        // both the spectral and the operator-norm reading are recorded
        CHECK(kd3->value("spectral_lower").has_value());
        CHECK(kd3->value("opnorm_lower").has_value());
        CHECK(kd3->value("opnorm_upper").has_value());
        CHECK(*kd3->value("sup_abs_fiber_derivative") == 1.5);
        const auto* kd4 = report.find("KD4");
        REQUIRE(kd4 != nullptr);
        CHECK(*kd4->value("integral_level0") < 0.0);
        CHECK(std::fabs(*kd4->value("integral_level0") - *kd4->value("integral_level1")) <= 1e-6);
    }
    SUBCASE("t3") {
        KanT3System sys;
        const auto report = validate_conditions(sys);
        CHECK(report.family == "kan_t3");
        REQUIRE(report.entries.size() == 4);
        CHECK(report.all_pass());
        const auto* kb4 = report.find("KB4");
        REQUIRE(kb4 != nullptr);
        CHECK(*kb4->value("integral_level0") < 0.0);
        CHECK(std::fabs(*kb4->value("integral_level0") - *kb4->value("integral_level1")) <= 1e-6);
    }
}

TEST_CASE("validator: every family condition appears exactly once") {
    const auto check_names = [](const ConditionReport& r, std::vector<std::string> expect) {
        REQUIRE(r.entries.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i) {
            CHECK(r.entries[i].name == expect[i]);
        }
    };
    check_names(validate_conditions(KanCylinderSystem()), {"K1", "K2", "K3", "K4"});
    check_names(validate_conditions(KanSolidTorusSystem()), {"KD1", "KD2", "KD3", "KD4"});
    check_names(validate_conditions(KanT3System()), {"KB1", "KB2", "KB3", "KB4"});
    check_names(validate_conditions(ToySystem()),
                {"base_hyperbolic", "fiber_morse_smale", "domination"});
}

TEST_CASE("validator rejects undersized quadrature") {
    KanCylinderSystem sys;
    QuadratureSettings quad;
    quad.samples_1d = 8;
    CHECK_THROWS_AS(validate_conditions(sys, quad), std::domain_error);
}

TEST_CASE("boundary invariance is exact at sampled base points") {
    KanCylinderSystem cyl;
    KanSolidTorusSystem solid;
    KanT3System t3;
    ToySystem toy;
    SplitMix64 rng(23);
    for (int i = 0; i < 500; ++i) {
        const double theta = rng.next_unit();
        CHECK(cyl.fiber_map(CirclePoint(theta), 0.0) == 0.0);
        CHECK(cyl.fiber_map(CirclePoint(theta), 1.0) == 1.0);
        const TorusPoint z(rng.next_unit(), rng.next_unit());
        CHECK(solid.fiber_map(z, 0.0) == 0.0);
        CHECK(solid.fiber_map(z, 1.0) == 1.0);
        CHECK(t3.fiber_map(z, 0.0) == 0.0);
        CHECK(t3.fiber_map(z, 0.5) == 0.5);
        CHECK(toy.fiber_map(z, 0.0) == 0.0);
        CHECK(toy.fiber_map(z, 0.5) == 0.5);
    }
}

TEST_CASE("mat2 spectrum helpers") {
    const Mat2i cat{2, 1, 1, 1};
    CHECK(cat.is_hyperbolic_automorphism());
    CHECK(cat.eig_max_abs() == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
    CHECK(cat.eig_min_abs() == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));

    const Mat2i m{5, 3, 3, 2};
    CHECK(m.is_hyperbolic_automorphism());
    // symmetric matrix: operator norm equals the spectral radius
    CHECK(m.op_norm() == doctest::Approx(m.eig_max_abs()).epsilon(1e-12));
    CHECK(m.op_norm_inv_inverse() == doctest::Approx(m.eig_min_abs()).epsilon(1e-12));

    const Mat2i flip{1, 1, 1, 0};  // det = -1, trace = 1: hyperbolic
    CHECK(flip.is_hyperbolic_automorphism());
    CHECK_FALSE(Mat2i{1, 1, 0, 1}.is_hyperbolic_automorphism());
    CHECK_FALSE(Mat2i{0, 1, -1, 0}.is_hyperbolic_automorphism());
}
