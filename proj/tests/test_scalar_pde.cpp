#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hml/error.hpp"
#include "hml/scalar_pde.hpp"

using namespace hml;

namespace {

ScalarTemplate desk() { return ScalarTemplate{}; }

ScalarTemplate coarse() {
    ScalarTemplate t;
    t.n = 129;
    return t;
}

bool has_center(const Grid& g, Complex c) {
    for (const auto& e : g.excisions())
        if (std::abs(e.center - c) < 1e-12) return true;
    return false;
}

}  // namespace

TEST(BuildProblem, SmallExcisionsAtCubeRootsOfMinusOne) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 1.0, 8.0, 257, 0.15, 1e-8);
    ASSERT_EQ(p.grid->excisions().size(), 3u);
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(has_center(*p.grid, std::polar(1.0, std::numbers::pi * (2 * k + 1) / 3.0)));
}

TEST(BuildProblem, TripleRootMergesIntoOneDisc) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 0.0, 8.0, 257, 0.15, 1e-8);
    ASSERT_EQ(p.grid->excisions().size(), 1u);
    EXPECT_EQ(p.grid->excisions()[0].center, Complex(0.0, 0.0));
    EXPECT_EQ(p.grid->excisions()[0].roots.size(), 3u);
}

TEST(BuildProblem, BigGammaZeroExcisionsAtCubeRootsOfUnity) {
    const ScalarProblem p = build_problem(ScalarKind::BigGamma0, 1.0, 8.0, 257, 0.15, 1e-8);
    ASSERT_EQ(p.grid->excisions().size(), 3u);
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(has_center(*p.grid, std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0)));
}

TEST(BuildProblem, Preconditions) {
    EXPECT_THROW(build_problem(ScalarKind::Small, 1.0, 8.0, 256, 0.15, 1e-8), GeometryError);
    EXPECT_THROW(build_problem(ScalarKind::Small, 1.0, 8.0, 257, -0.1, 1e-8), GeometryError);
    EXPECT_THROW(build_problem(ScalarKind::Small, 30.0, 4.0, 129, 0.15, 1e-8), GeometryError);
    EXPECT_THROW(build_problem(ScalarKind::BigGamma0, 0.0, 8.0, 257, 0.15, 1e-8), GeometryError);
    // Pinned staircase circles need three cells across the radius.
    EXPECT_THROW(build_problem(ScalarKind::Small, 1.0, 8.0, 257, 0.15, 1e-8, 50, BoundaryTreatment::AsymptoticDirichlet),
                 GeometryError);
}

TEST(BoundaryValue, OuterEdgeIsZero) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 1.0, 8.0, 257, 0.15, 1e-8);
    EXPECT_EQ(boundary_value(p, Complex(8.0, 0.3)), 0.0);
    EXPECT_EQ(boundary_value(p, Complex(-2.0, -8.0)), 0.0);
}

TEST(BoundaryValue, ExcisionCircles) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 1.0, 8.0, 257, 0.15, 1e-8);
    const Complex z(-0.85, 0.0);
    // (-0.85)^3 + 1 = 0.385875
    EXPECT_NEAR(boundary_value(p, z), -0.5 * std::log(0.385875), 1e-12);
    EXPECT_NEAR(boundary_value(p, z), 0.4761, 1e-4);
    const ScalarProblem b = build_problem(ScalarKind::BigGamma0, 1.0, 8.0, 257, 0.15, 1e-8);
    const Complex w = 1.0 + std::polar(0.15, 0.7);
    EXPECT_NEAR(boundary_value(b, w), -0.5 * std::log(std::abs((w * w + w + 1.0) / (w - 1.0))), 1e-12);
    EXPECT_THROW(boundary_value(p, Complex(3.0, 3.0)), DomainError);
}

// psi = 0 solves the far-zone equation exactly; near nodes carry the 5-point
// Laplacian of the singular part 1/2 log|z^3 + 1|.
TEST(Residual, ZeroFieldGivesSingularPartTruncation) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 1.0, 8.0, 129, 0.15, 1e-8);
    const Grid& g = *p.grid;
    const double h = g.h();
    auto s = [](Complex z) { return 0.5 * std::log(std::abs(z * z * z + 1.0)); };
    ScalarField psi{p.grid, std::vector<double>(g.size(), 0.0)};
    const ScalarField r = residual(psi, p);
    int far = 0, near = 0;
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        if (g.kind(k) != NodeKind::Interior || g.excised(k) || g.disc_of(g.z(k)) >= 0) continue;
        const Complex z = g.z(k);
        if (p.far(k)) {
            EXPECT_NEAR(r.values[k], 0.0, 1e-12) << k;
            ++far;
        } else {
            const double lap = (s(z + h) + s(z - h) + s(z + Complex(0, h)) + s(z - Complex(0, h)) - 4 * s(z)) / (h * h);
            EXPECT_NEAR(r.values[k], lap, 1e-9 * (1 + std::abs(lap))) << k;
            ++near;
        }
    }
    EXPECT_GT(far, 0);
    EXPECT_GT(near, 0);
}

TEST(Residual, ConstantFieldMatchesSourceTerm) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 0.0, 8.0, 257, 0.15, 1e-8);
    ScalarField psi{p.grid, std::vector<double>(p.grid->size(), 0.1)};
    const ScalarField r = residual(psi, p);
    const Grid& g = *p.grid;
    const double h = g.h();
    // z = 1 is a node; Delta of a constant is zero there, and the 5-point
    // Laplacian of 3/2 log|z| at z = 1 is (3/2) log(1 - h^4) / h^2.
    const double truncation = 1.5 * std::log(1.0 - std::pow(h, 4)) / (h * h);
    EXPECT_NEAR(r.values[g.index(144, 128)], -2.0 * std::sinh(0.2) + truncation, 1e-10);
    EXPECT_NEAR(-2.0 * std::sinh(0.2), -0.4027, 1e-4);
}

TEST(NewtonSolve, SmallUOneConverges) {
    const ScalarSolution s = solve_small(1.0, desk());
    EXPECT_LE(s.residual_sup, 1e-8);
    EXPECT_GT(s.newton_iterations, 0);
    const ScalarField r = residual(s.problem, s.state);
    double sup = 0.0;
    for (double v : r.values)
        if (std::isfinite(v)) sup = std::max(sup, std::abs(v));
    EXPECT_LE(sup, 1e-8);
    ASSERT_TRUE(s.decay.has_value());
    EXPECT_GT(s.decay->rate, 0.0);
}

TEST(NewtonSolve, RadialAtCentralFiber) {
    const ScalarSolution s = solve_small(0.0, desk());
    EXPECT_LE(s.residual_sup, 1e-8);
    EXPECT_LE(radial_variance(s, 0.5, 4.0), 5e-3);
}

TEST(NewtonSolve, InitializationIndependent) {
    const ScalarProblem p = build_problem(ScalarKind::Small, Complex(0.5, 0.5), 8.0, 129, 0.15, 1e-10);
    const ScalarSolution a = newton_solve(p);
    const ScalarSolution b = newton_solve(p, harmonic_extension(p));
    EXPECT_LE(annulus_distance(a.psi, b.psi, Annulus{0.0, 100.0}), 1e-9);
}

TEST(Symmetry, RotationAndConjugation) {
    for (Complex u : {Complex(1.0), Complex(0.0, 1.0), Complex(2.0, 1.0)}) {
        const ScalarSolution s = solve_small(u, coarse());
        EXPECT_LE(rotation_defect(s), 5e-3) << u;
    }
    const ScalarSolution s = solve_small(4.0, coarse());
    EXPECT_LE(conjugation_defect(s), 1e-10);
}

TEST(Symmetry, MaximumPrinciple) {
    ScalarTemplate t;
    t.eps = 0.2;
    t.treatment = BoundaryTreatment::AsymptoticDirichlet;
    const ScalarSolution s = solve_small(1.0, t);
    const auto [inner, ring] = maximum_principle_sups(s);
    EXPECT_LE(inner, ring + 1e-8);
}

TEST(DecayFit, RecoversPlantedRate) {
    const auto g = std::make_shared<const Grid>(8.0, 129);
    ScalarField psi{g, std::vector<double>(g->size())};
    for (std::size_t k = 0; k < g->size(); ++k) psi.values[k] = std::exp(-2.0 * std::abs(g->z(k)));
    const DecayFit f = decay_fit(psi, 8.0);
    EXPECT_NEAR(f.rate, 2.0, 0.05);
    EXPECT_NEAR(f.prefactor, 1.0, 0.05);
}

TEST(DecayFit, PositiveForSeveralFibers) {
    for (Complex u : {Complex(1.0), Complex(4.0)}) {
        const ScalarSolution s = solve_small(u, coarse());
        ASSERT_TRUE(s.decay.has_value());
        EXPECT_GT(s.decay->rate, 0.0);
    }
}

TEST(Convergence, IdenticalProblemsGiveZeroDistance) {
    const ScalarSolution ref = solve_small(0.0, coarse());
    const std::vector<ScalarSolution> same{ref, ref};
    for (const auto& p : convergence_study(same, ref, Annulus{1.0, 2.0})) EXPECT_EQ(p.distance, 0.0);
}

TEST(Convergence, DecreasingTowardCentralFiber) {
    const auto pts = convergence_study({1.0, 0.5, 0.25, 0.125}, Annulus{1.0, 2.0}, coarse());
    ASSERT_EQ(pts.size(), 4u);
    for (std::size_t j = 1; j < pts.size(); ++j) EXPECT_LT(pts[j].distance, pts[j - 1].distance);
    EXPECT_GT(observed_order(pts), 0.0);
}

TEST(Convergence, SecondOrderUnderRefinement) {
    ScalarTemplate t;
    t.n = 65;
    const ScalarSolution a = solve_small(1.0, t);
    t.n = 129;
    const ScalarSolution b = solve_small(1.0, t);
    t.n = 257;
    const ScalarSolution c = solve_small(1.0, t);
    const double ratio = refinement_ratio(a, b, c, Annulus{1.0, 2.0});
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
}

TEST(Convergence, InjectRequiresRefinement) {
    const auto coarse_grid = std::make_shared<const Grid>(8.0, 65);
    const auto wrong = std::make_shared<const Grid>(8.0, 127);
    ScalarField f{wrong, std::vector<double>(wrong->size(), 0.0)};
    EXPECT_THROW(inject(f, coarse_grid), DomainError);
}
