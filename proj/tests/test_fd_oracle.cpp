#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "epile/fd_oracle.hpp"
#include "epile/homogeneous.hpp"
#include "epile/verification.hpp"
#include "test_support.hpp"

using namespace epile;

namespace {

const SoilProfile kTwoLayer{{{3.0, 200e6, "base"}, {9.8, 20e6, "cover"}}, TipStiffness::spring(500e6)};

} // namespace

TEST(FdGrid, InterfacesAreNodes) {
    const PileSection pile = testkit::centrifuge_pile();
    const fd::FdGrid g = fd::make_grid(pile, kTwoLayer, 101);
    ASSERT_EQ(g.size(), 101u);
    EXPECT_EQ(g.x.front(), 0.0);
    EXPECT_EQ(g.x.back(), 12.8);
    ASSERT_EQ(g.interface_nodes.size(), 1u);
    EXPECT_DOUBLE_EQ(g.x[g.interface_nodes[0]], 3.0);
    EXPECT_EQ(g.node_layer[g.interface_nodes[0]], 0u);
    EXPECT_EQ(g.node_layer[g.interface_nodes[0] + 1], 1u);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_GT(g.x[j], g.x[j - 1]);
    EXPECT_EQ(g.interval_layer.size(), 100u);
}

TEST(FdGrid, EveryLayerGetsTwoIntervals) {
    testkit::CaseGenerator gen(211);
    for (int i = 0; i < 40; ++i) {
        const PileSection pile = gen.pile();
        const SoilProfile p = gen.layered_profile(pile.length, TipStiffness::rigid());
        const std::size_t n = 2 * p.layers.size() + 1 + static_cast<std::size_t>(gen.integer(0, 50));
        const fd::FdGrid g = fd::make_grid(pile, p, n);
        ASSERT_EQ(g.size(), n);
        std::vector<std::size_t> count(p.layers.size(), 0);
        for (std::size_t l : g.interval_layer) ++count[l];
        for (std::size_t c : count) EXPECT_GE(c, 2u);
    }
}

TEST(FdGrid, TooFewNodesRejected) {
    const PileSection pile = testkit::centrifuge_pile();
    EXPECT_THROW(fd::make_grid(pile, kTwoLayer, 4), ValidationError);
    EXPECT_NO_THROW(fd::make_grid(pile, kTwoLayer, 5));
    EXPECT_THROW(fd::make_grid(pile, testkit::single_layer(12.8, 1e6, TipStiffness::rigid()), 2),
                 ValidationError);
}

TEST(FdOracle, CentrifugeEndBearing) {
    const PileSection pile = testkit::centrifuge_pile();
    const SoilProfile soil = testkit::single_layer(12.8, 55e6, TipStiffness::rigid());
    const LoadCase load{20.0, 0.0};
    const ResponseProfile p = fd::solve_fd(pile, soil, load, 8192);
    EXPECT_EQ(p.solver, "fd");
    EXPECT_NEAR(p.samples.back().u, 9.13763119584667e-4, 1e-5 * 9.13763119584667e-4);
    EXPECT_NEAR(p.samples.front().stress, -797769.726713202, 1e-5 * 797769.726713202);
    EXPECT_EQ(p.samples.front().u, 0.0);
    EXPECT_LT(verify::relative_linf(p, verify::analytic_reference(pile, soil, load)).max(), 1e-4);
}

TEST(FdOracle, ZeroLoadGivesZero) {
    const ResponseProfile p = fd::solve_fd(testkit::centrifuge_pile(), kTwoLayer, {0.0, 0.0}, 257);
    for (const Sample& s : p.samples) {
        EXPECT_EQ(s.u, 0.0);
        EXPECT_EQ(s.stress, 0.0);
    }
    EXPECT_TRUE(p.null_points.empty());
}

TEST(FdOracle, HalvingSpacingQuartersError) {
    const PileSection pile = testkit::centrifuge_pile();
    const LoadCase load{20.0, -400e3};
    const auto ref = verify::analytic_reference(pile, kTwoLayer, load);
    const double coarse = verify::relative_linf(fd::solve_fd(pile, kTwoLayer, load, 257), ref).max();
    const double fine = verify::relative_linf(fd::solve_fd(pile, kTwoLayer, load, 513), ref).max();
    EXPECT_NEAR(coarse / fine, 4.0, 0.4);
}

TEST(FdOracle, ObservedOrderHomogeneousAndLayered) {
    const std::array<std::size_t, 4> sizes{256, 512, 1024, 2048};
    const PileSection pile = testkit::centrifuge_pile();
    const auto h = verify::observed_convergence_order(
        pile, testkit::single_layer(12.8, 55e6, TipStiffness::spring(100e6)), {20.0, -300e3}, sizes);
    EXPECT_GE(h.order, 1.8);
    EXPECT_LE(h.order, 2.2);
    EXPECT_FALSE(h.warning.has_value());
    const auto l = verify::observed_convergence_order(pile, kTwoLayer, {20.0, -300e3}, sizes);
    EXPECT_GE(l.order, 1.8);
    EXPECT_LE(l.order, 2.2);
    EXPECT_EQ(l.errors.size(), 4u);
}

TEST(FdOracle, ConvergenceNeedsDoublingSizes) {
    const PileSection pile = testkit::centrifuge_pile();
    const std::array<std::size_t, 2> two{256, 512};
    EXPECT_THROW(verify::observed_convergence_order(pile, kTwoLayer, {20.0, 0.0}, two), ValidationError);
    const std::array<std::size_t, 3> close{256, 300, 600};
    EXPECT_THROW(verify::observed_convergence_order(pile, kTwoLayer, {20.0, 0.0}, close), ValidationError);
}

TEST(FdOracle, SameSystemForEqualInputs) {
    // A homogeneous case and the equivalent one-layer profile built by hand
    // assemble the same discrete system.
    const PileSection pile = testkit::centrifuge_pile();
    const auto c = make_homogeneous_case(pile, 55e6, TipStiffness::spring(1e8), {20.0, 0.0});
    const SoilProfile from_case{{c.layer()}, c.tip()};
    const SoilProfile by_hand{{SoilLayer{12.8, 55e6, "other"}}, TipStiffness::spring(1e8)};
    const auto g1 = fd::make_grid(pile, from_case, 129);
    const auto g2 = fd::make_grid(pile, by_hand, 129);
    EXPECT_EQ(g1.x, g2.x);
    EXPECT_TRUE(fd::assemble(pile, from_case, c.load(), g1) == fd::assemble(pile, by_hand, c.load(), g2));
}

TEST(FdOracle, DiscreteEquilibrium) {
    const PileSection pile = testkit::centrifuge_pile();
    const LoadCase load{20.0, -400e3};
    const ResponseProfile p = fd::solve_fd(pile, kTwoLayer, load, 4097);
    const fd::FdGrid g = fd::make_grid(pile, kTwoLayer, 4097);
    // Trapezoid rule per interval with that interval's spring, since the
    // shear jumps at the interface node.
    double integral = 0.0;
    for (std::size_t j = 1; j < p.samples.size(); ++j) {
        const Sample& a = p.samples[j - 1];
        const Sample& b = p.samples[j];
        const double ks = kTwoLayer.layers[g.interval_layer[j - 1]].shear_stiffness;
        integral -= ks * 0.5 * (a.u + b.u) * (b.x - a.x);
    }
    const double lhs = pile.area * (p.samples.back().stress - p.samples.front().stress);
    const double scale = std::abs(pile.area * p.samples.front().stress) + std::abs(400e3);
    EXPECT_LT(std::abs(lhs + pile.perimeter * integral) / scale, 1e-5);
}

TEST(FdOracle, NullPointNearAnalytic) {
    const PileSection pile = testkit::centrifuge_pile();
    const SoilProfile soil = testkit::single_layer(12.8, 55e6, TipStiffness::spring(100e6));
    const ResponseProfile p = fd::solve_fd(pile, soil, {20.0, 0.0}, 8192);
    ASSERT_EQ(p.null_points.size(), 1u);
    EXPECT_NEAR(p.null_points[0], 6.13759512369528, 1e-4);
}

TEST(FdOracle, SingularSystemFails) {
    const SoilProfile loose = testkit::single_layer(12.8, 0.0, TipStiffness::spring(0.0));
    EXPECT_THROW(fd::solve_fd(testkit::centrifuge_pile(), loose, {0.0, -1e6}, 65), SolverError);
}

TEST(FdOracle, ThomasSolvesKnownSystem) {
    // 4x4 tridiagonal with fill-ins; solution (1, 2, 3, 4).
    fd::FdSystem s;
    s.diag = {4.0, 4.0, 4.0, 4.0};
    s.lower = {0.0, 1.0, 1.0, 1.0};
    s.upper = {1.0, 1.0, 1.0, 0.0};
    s.tip_fill = 0.5;
    s.head_fill = 0.25;
    s.rhs = {4.0 + 2.0 + 1.5, 1.0 + 8.0 + 3.0, 2.0 + 12.0 + 4.0, 0.5 + 3.0 + 16.0};
    const auto u = fd::solve_system(s);
    ASSERT_EQ(u.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(u[i], static_cast<double>(i + 1), 1e-13);
}
