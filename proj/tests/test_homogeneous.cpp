#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "epile/homogeneous.hpp"
#include "epile/verification.hpp"
#include "test_support.hpp"

using namespace epile;
using epile::testkit::CaseGenerator;

namespace {

// Reference values computed independently in extended precision (closed
// form in mpmath, cross-checked against a collocation BVP solve).
constexpr double kPsi = 0.158588556913434;
constexpr double kHeadDisplacementDt20 = 9.13763119584667e-4;
constexpr double kTipStressDt20 = -797769.726713202;
constexpr double kHeadDisplacementMech = -7.26797907147532e-4;
constexpr double kNullPointKb100 = 6.13759512369528;

HomogeneousCase centrifuge(TipStiffness tip, LoadCase load) {
    return make_homogeneous_case(testkit::centrifuge_pile(), testkit::kCentrifugeShear, tip, load);
}

} // namespace

TEST(Homogeneous, CentrifugeThermalFrozenValues) {
    const auto c = centrifuge(TipStiffness::rigid(), {20.0, 0.0});
    EXPECT_NEAR(c.psi(), kPsi, 1e-14);
    const PointResponse head = evaluate(c, 12.8);
    EXPECT_NEAR(head.u, kHeadDisplacementDt20, 1e-12 * kHeadDisplacementDt20);
    EXPECT_NEAR(head.strain, 7.5e-6 * 20.0, 1e-16);
    EXPECT_NEAR(head.stress, 0.0, 1e-9 * 7.17e9 * 1.5e-4);
    const PointResponse tip = evaluate(c, 0.0);
    EXPECT_EQ(tip.u, 0.0);
    EXPECT_NEAR(tip.stress, kTipStressDt20, 1e-12 * std::abs(kTipStressDt20));
    // Published rounding.
    EXPECT_NEAR(head.u * 1e3, 0.9138, 0.005 * 0.9138);
    EXPECT_NEAR(tip.stress * 1e-6, -0.798, 0.005 * 0.798);
}

TEST(Homogeneous, CentrifugeMechanicalFrozenValue) {
    const auto c = centrifuge(TipStiffness::rigid(), {0.0, -1000e3});
    EXPECT_NEAR(evaluate(c, 12.8).u, kHeadDisplacementMech, 1e-12 * std::abs(kHeadDisplacementMech));
    EXPECT_NEAR(evaluate(c, 12.8).stress, -1000e3 / c.pile().area, 1e-9);
}

TEST(Homogeneous, NullPointFrozenTipSpring) {
    const auto c = centrifuge(TipStiffness::spring(100e6), {20.0, 0.0});
    EXPECT_NEAR(null_point(c), kNullPointKb100, 1e-9 * 12.8);
    EXPECT_NEAR(evaluate(c, null_point(c)).u, 0.0, 1e-15);
}

TEST(Homogeneous, NullPointFloatingIsMidLength) {
    for (double ks : {1e3, 1e6, 55e6, 1e9, 1e11}) {
        const auto c = centrifuge(TipStiffness::spring(0.0), {20.0, 0.0});
        const auto d = make_homogeneous_case(c.pile(), ks, TipStiffness::spring(0.0), {20.0, 0.0});
        EXPECT_NEAR(null_point(d), 6.4, 1e-9 * 12.8) << "k_s=" << ks;
    }
}

TEST(Homogeneous, NullPointLargePsiLengthStaysFinite) {
    // psi L ~ 40: the textbook atanh argument rounds to 1 here.
    const PileSection pile = make_circular_pile(40.0, 0.5, 5e9, 1e-5);
    const double ks = 1.0 * 1.0 * 5e9 * 0.5 / 4.0;
    const auto c = make_homogeneous_case(pile, ks, TipStiffness::spring(0.0), {10.0, 0.0});
    EXPECT_NEAR(c.psi() * pile.length, 40.0, 1e-9);
    EXPECT_NEAR(null_point(c), 20.0, 1e-9 * 40.0);
    const PointResponse r = evaluate(c, 20.0);
    EXPECT_TRUE(std::isfinite(r.u) && std::isfinite(r.stress));
    EXPECT_NEAR(r.u, 0.0, 1e-15);
}

TEST(Homogeneous, NullPointRigidIsTip) {
    EXPECT_EQ(null_point(centrifuge(TipStiffness::rigid(), {20.0, 0.0})), 0.0);
}

TEST(Homogeneous, NullPointMovesTowardTipWithStiffness) {
    double previous = 6.4;
    for (double kb : {1e6, 1e7, 1e8, 1e9, 1e10, 1e12}) {
        const double x0 = null_point(centrifuge(TipStiffness::spring(kb), {20.0, 0.0}));
        EXPECT_LT(x0, previous);
        EXPECT_GE(x0, 0.0);
        previous = x0;
    }
}

TEST(Homogeneous, NullPointUndefinedWithoutShaftSprings) {
    const auto c = make_homogeneous_case(testkit::centrifuge_pile(), 0.0, TipStiffness::spring(1e8),
                                         {20.0, 0.0});
    EXPECT_THROW(null_point(c), SolverError);
}

TEST(Homogeneous, ZeroLoadGivesZeroResponse) {
    for (int i = 0; i < 3; ++i) {
        CaseGenerator gen(1);
        const auto c = make_homogeneous_case(testkit::centrifuge_pile(), 55e6, gen.tip(i), {0.0, 0.0});
        for (double x : testkit::linspace(0.0, 12.8, 17)) {
            const PointResponse r = evaluate(c, x);
            EXPECT_EQ(r.u, 0.0);
            EXPECT_EQ(r.strain, 0.0);
            EXPECT_EQ(r.stress, 0.0);
            EXPECT_EQ(r.shear, 0.0);
        }
    }
}

TEST(Homogeneous, OutsidePileThrows) {
    const auto c = centrifuge(TipStiffness::rigid(), {20.0, 0.0});
    EXPECT_THROW(evaluate(c, -1e-3), DomainError);
    EXPECT_THROW(evaluate(c, 12.9), DomainError);
    EXPECT_THROW(evaluate(c, NAN), DomainError);
}

TEST(Homogeneous, RejectsExcessivePsiLength) {
    const PileSection pile = make_circular_pile(100.0, 0.1, 1e9, 1e-5);
    EXPECT_THROW(make_homogeneous_case(pile, 1e12, TipStiffness::rigid(), {1.0, 0.0}), SolverError);
}

TEST(Homogeneous, RejectsLayerLengthMismatch) {
    const PileSection pile = testkit::centrifuge_pile();
    EXPECT_THROW(HomogeneousCase(pile, SoilLayer{12.0, 55e6, {}}, TipStiffness::rigid(), {}), ValidationError);
}

TEST(Homogeneous, ZeroShaftSpringLimits) {
    const PileSection pile = testkit::centrifuge_pile();
    const double strain = pile.thermal_expansion * 20.0;
    // Free expansion about the middle.
    const auto floating = make_homogeneous_case(pile, 0.0, TipStiffness::spring(0.0), {20.0, 0.0});
    for (double x : testkit::linspace(0.0, 12.8, 9)) {
        const PointResponse r = evaluate(floating, x);
        EXPECT_NEAR(r.u, strain * (x - 6.4), 1e-18);
        EXPECT_NEAR(r.stress, 0.0, 1e-9);
    }
    // Elastic column on a rigid base.
    const auto column = make_homogeneous_case(pile, 0.0, TipStiffness::rigid(), {0.0, -1e6});
    EXPECT_NEAR(evaluate(column, 12.8).u, -1e6 * 12.8 / (pile.area * pile.young_modulus), 1e-18);
    // No support at all.
    const auto loose = make_homogeneous_case(pile, 0.0, TipStiffness::spring(0.0), {0.0, -1e6});
    EXPECT_THROW(evaluate(loose, 1.0), SolverError);
}

TEST(Homogeneous, LimitStiffTipApproachesRigid) {
    // The tip moves by ~E max(psi, 1/L) / k_b relative to the pile response,
    // so only piles with E max(psi, 1/L) <= 5e8 Pa/m can meet 1e-6 at
    // k_b = 1e15 Pa/m.
    CaseGenerator gen(404);
    int checked = 0;
    for (int i = 0; i < 5000 && checked < 20; ++i) {
        const PileSection pile = gen.pile();
        const double ks = gen.shear();
        // One load component at a time: with both, thermal and mechanical
        // displacements can cancel and shrink the scale of the comparison.
        const LoadCase both = gen.load();
        const LoadCase load = (i % 2) ? LoadCase{both.delta_t, 0.0} : LoadCase{0.0, both.head_force};
        if (pile.young_modulus * std::max(psi(pile, SoilLayer{pile.length, ks, {}}), 1.0 / pile.length) > 5e8) continue;
        ++checked;
        const auto stiff = make_homogeneous_case(pile, ks, TipStiffness::spring(1e15), load);
        const auto rigid = make_homogeneous_case(pile, ks, TipStiffness::rigid(), load);
        const auto xs = testkit::linspace(0.0, pile.length, 65);
        auto u_s = [&](double x) { return evaluate(stiff, x).u; };
        auto u_r = [&](double x) { return evaluate(rigid, x).u; };
        auto s_s = [&](double x) { return evaluate(stiff, x).stress; };
        auto s_r = [&](double x) { return evaluate(rigid, x).stress; };
        EXPECT_LT(testkit::relative_linf(xs, u_s, u_r), 1e-6);
        EXPECT_LT(testkit::relative_linf(xs, s_s, s_r), 1e-6);
    }
    EXPECT_EQ(checked, 20);
}

TEST(Homogeneous, BoundaryConditionsHold) {
    CaseGenerator gen(17);
    for (int i = 0; i < 60; ++i) {
        const PileSection pile = gen.pile();
        const TipStiffness tip = gen.tip(i);
        const auto c = make_homogeneous_case(pile, gen.shear(), tip, gen.load());
        const double stress_scale =
            std::max(std::abs(c.load().head_force / pile.area),
                     std::abs(pile.young_modulus * pile.thermal_expansion * c.load().delta_t));
        EXPECT_NEAR(evaluate(c, pile.length).stress, c.load().head_force / pile.area, 1e-10 * stress_scale);
        const PointResponse t = evaluate(c, 0.0);
        if (tip.is_rigid()) {
            EXPECT_EQ(t.u, 0.0);
        } else {
            EXPECT_NEAR(t.stress, tip.value() * t.u, 1e-10 * stress_scale);
        }
    }
}

TEST(Homogeneous, ConstitutiveAndShearRelations) {
    CaseGenerator gen(23);
    for (int i = 0; i < 30; ++i) {
        const PileSection pile = gen.pile();
        const double ks = gen.shear();
        const auto c = make_homogeneous_case(pile, ks, gen.tip(i), gen.load());
        const double stress_scale = pile.young_modulus * pile.thermal_expansion * std::abs(c.load().delta_t) +
                                    std::abs(c.load().head_force / pile.area);
        const double shear_scale = ks * std::abs(evaluate(c, pile.length).u) + ks * std::abs(evaluate(c, 0.0).u);
        for (double x : testkit::linspace(0.0, pile.length, 33)) {
            const PointResponse r = evaluate(c, x);
            const double expected = pile.young_modulus * (r.strain - pile.thermal_expansion * c.load().delta_t);
            EXPECT_NEAR(r.stress, expected, 1e-10 * stress_scale);
            EXPECT_NEAR(r.shear, -ks * r.u, 1e-12 * shear_scale);
        }
    }
}

TEST(Homogeneous, GoverningEquationResidual) {
    // u'' = psi^2 u, checked with a central difference on the closed form.
    CaseGenerator gen(29);
    for (int i = 0; i < 20; ++i) {
        const PileSection pile = gen.pile();
        const auto c = make_homogeneous_case(pile, gen.shear(), gen.tip(i), gen.load());
        const double h = 1e-3 * pile.length;
        for (double x : testkit::linspace(0.1 * pile.length, 0.9 * pile.length, 9)) {
            const double du_plus = evaluate(c, x + h).strain;
            const double du_minus = evaluate(c, x - h).strain;
            const double second = (du_plus - du_minus) / (2.0 * h);
            const double rhs = c.psi() * c.psi() * evaluate(c, x).u;
            const double scale = c.psi() * c.psi() * std::abs(evaluate(c, pile.length).u) +
                                 std::abs(evaluate(c, pile.length).strain) / pile.length;
            EXPECT_NEAR(second, rhs, 1e-4 * scale);
        }
    }
}

TEST(Homogeneous, GlobalEquilibrium) {
    CaseGenerator gen(31);
    for (int i = 0; i < 30; ++i) {
        const PileSection pile = gen.pile();
        const auto c = make_homogeneous_case(pile, gen.shear(), gen.tip(i), gen.load());
        EXPECT_LT(verify::global_equilibrium(c, 1000).relative(), 1e-6);
    }
}

TEST(Homogeneous, SuperpositionAndLinearity) {
    CaseGenerator gen(37);
    for (int i = 0; i < 40; ++i) {
        const PileSection pile = gen.pile();
        const auto c = make_homogeneous_case(pile, gen.shear(), gen.tip(i), gen.load());
        const auto thermal = c.with_load({c.load().delta_t, 0.0});
        const auto mech = c.with_load({0.0, c.load().head_force});
        const auto doubled = c.with_load({2.0 * c.load().delta_t, 2.0 * c.load().head_force});
        const double u_scale = std::max(std::abs(evaluate(thermal, pile.length).u),
                                        std::abs(evaluate(mech, pile.length).u));
        for (double x : testkit::linspace(0.0, pile.length, 21)) {
            const PointResponse sum = evaluate(c, x);
            EXPECT_NEAR(sum.u, evaluate(thermal, x).u + evaluate(mech, x).u, 1e-12 * u_scale);
            EXPECT_NEAR(evaluate(doubled, x).u, 2.0 * sum.u, 1e-12 * u_scale);
        }
    }
}

TEST(Homogeneous, ThermalOnlySignStructure) {
    CaseGenerator gen(41);
    for (int i = 0; i < 30; ++i) {
        const PileSection pile = gen.pile();
        const double dt = gen.uniform(5.0, 30.0);
        const TipStiffness tip = (i % 2 == 0) ? TipStiffness::spring(gen.log_uniform(1e6, 1e10))
                                              : TipStiffness::spring(0.0);
        const auto c = make_homogeneous_case(pile, gen.shear(), tip, {dt, 0.0});
        const double x0 = null_point(c);
        double peak = -1.0, argmax = -1.0;
        for (double x : testkit::linspace(0.0, pile.length, 2001)) {
            const PointResponse r = evaluate(c, x);
            // Heating: compression everywhere, expansion away from x0.
            EXPECT_LE(r.stress, 1e-9 * pile.young_modulus * pile.thermal_expansion * dt);
            if (x > x0 + 1e-9 * pile.length) {
                EXPECT_GT(r.u, 0.0);
                EXPECT_LT(r.shear, 0.0);
            }
            if (x < x0 - 1e-9 * pile.length) {
                EXPECT_LT(r.u, 0.0);
                EXPECT_GT(r.shear, 0.0);
            }
            if (std::abs(r.stress) > peak) {
                peak = std::abs(r.stress);
                argmax = x;
            }
        }
        EXPECT_NEAR(argmax, x0, pile.length / 2000.0 + 1e-9);
    }
}

TEST(Homogeneous, SampleProfileShape) {
    const auto c = centrifuge(TipStiffness::rigid(), {20.0, 0.0});
    EXPECT_THROW(sample_profile(c, 1), ValidationError);
    const ResponseProfile two = sample_profile(c, 2);
    ASSERT_EQ(two.samples.size(), 2u);
    EXPECT_EQ(two.samples.front().x, 0.0);
    EXPECT_EQ(two.samples.back().x, 12.8);

    const ResponseProfile p = sample_profile(c, 129);
    for (std::size_t i = 1; i < p.samples.size(); ++i) EXPECT_GT(p.samples[i].x, p.samples[i - 1].x);
    ASSERT_TRUE(p.thermal_null_point.has_value());
    EXPECT_EQ(*p.thermal_null_point, 0.0);
    EXPECT_EQ(p.null_points, std::vector<double>{0.0});
}

TEST(Homogeneous, SampleProfileNullPoints) {
    const auto floating = centrifuge(TipStiffness::spring(0.0), {20.0, 0.0});
    const ResponseProfile p = sample_profile(floating, 11);
    ASSERT_EQ(p.null_points.size(), 1u);
    EXPECT_NEAR(p.null_points[0], 6.4, 1e-9 * 12.8);

    // A head load shifts the zero of u; it must still be a zero.
    const auto combined = centrifuge(TipStiffness::spring(100e6), {20.0, -300e3});
    const ResponseProfile q = sample_profile(combined, 11);
    ASSERT_EQ(q.null_points.size(), 1u);
    EXPECT_NEAR(evaluate(combined, q.null_points[0]).u, 0.0, 1e-12 * std::abs(evaluate(combined, 12.8).u));
    ASSERT_TRUE(q.thermal_null_point.has_value());
    EXPECT_NEAR(*q.thermal_null_point, kNullPointKb100, 1e-9 * 12.8);

    const auto unloaded = centrifuge(TipStiffness::spring(0.0), {0.0, 0.0});
    EXPECT_FALSE(sample_profile(unloaded, 5).thermal_null_point.has_value());
}

TEST(Homogeneous, HeadDisplacementSeries) {
    const auto c = centrifuge(TipStiffness::rigid(), {0.0, 0.0});
    const std::array<double, 3> ramp{0.0, 10.0, 20.0};
    const auto u = head_displacement_series(c, ramp);
    ASSERT_EQ(u.size(), 3u);
    EXPECT_EQ(u[0], 0.0);
    EXPECT_NEAR(u[1], 0.5 * kHeadDisplacementDt20, 1e-12 * kHeadDisplacementDt20);
    EXPECT_NEAR(u[2], kHeadDisplacementDt20, 1e-12 * kHeadDisplacementDt20);

    // Reversible: a closed cycle ends where it started.
    const std::array<double, 5> cycle{0.0, 15.0, 30.0, 15.0, 0.0};
    const auto v = head_displacement_series(c, cycle);
    EXPECT_EQ(v.front(), v.back());
    EXPECT_EQ(v[1], v[3]);

    const std::array<double, 3> flat{7.0, 7.0, 7.0};
    const auto w = head_displacement_series(c, flat);
    EXPECT_EQ(w[0], w[1]);
    EXPECT_EQ(w[1], w[2]);
    EXPECT_TRUE(head_displacement_series(c, std::span<const double>{}).empty());
}
