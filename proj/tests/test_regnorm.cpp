#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "hml/error.hpp"
#include "hml/regnorm.hpp"

using namespace hml;

namespace {

ScalarTemplate coarse() {
    ScalarTemplate t;
    t.n = 129;
    return t;
}

const ScalarSolution& small_one() {
    static const ScalarSolution s = solve_small(1.0, coarse());
    return s;
}

// Composite Simpson on [a, b].
template <class F>
double simpson(F f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST(TraceDensity, Values) {
    EXPECT_EQ(trace_density_small(Complex(0.3, 0.2), 0.0, Complex(1.0, 1.0)), 0.0);
    EXPECT_NEAR(trace_density_small(0.0, 0.5, std::polar(1.0, 0.4)), 4.0 * std::sinh(0.5) * std::sinh(0.5), 1e-14);
    EXPECT_NEAR(trace_density_small(0.0, 0.5, 1.0), 1.0861, 1e-4);
}

TEST(TraceDensity, MatrixTraceIdentity) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> d;
    for (int t = 0; t < 1000; ++t) {
        const Complex u(d(rng), d(rng)), z(d(rng), d(rng));
        const double psi = 0.7 * d(rng);
        const double aq = std::abs(z * z * z + u);
        // phi phi^{*h} = diag(|q| e^{-2 psi}, |q| e^{2 psi}) for the diagonal metric.
        const double oracle = aq * (std::exp(2 * psi) + std::exp(-2 * psi));
        const double tr = trace_density(higgs_eval(HiggsFieldSpec::small(u), z), small_metric(u, psi, z));
        EXPECT_NEAR(tr, oracle, 1e-12 * (1 + oracle));
        EXPECT_NEAR(tr - 2 * aq, trace_density_small(u, psi, z), 1e-12 * (1 + oracle));
    }
}

TEST(Quadrature, GaussianIntegral) {
    const Grid g(8.0, 257);
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = std::exp(-std::norm(g.z(k)));
    // (2/pi) * pi
    EXPECT_NEAR(quadrature(g, v), 2.0, 1e-12);
    v[17] = kNaN;
    EXPECT_TRUE(std::isfinite(quadrature(g, v)));
}

TEST(TailBound, MatchesNumericalIntegral) {
    const DecayFit fit{1.5, 2.0};
    const double R = 3.0, q0 = 0.7;
    const double c = fit.rate, C = fit.prefactor;
    const double numeric = 16.0 * C * C *
                           simpson([&](double r) { return (std::pow(r, 4) + q0 * r) * std::exp(-2 * c * r); }, R, 40.0, 20000);
    EXPECT_NEAR(tail_bound(fit, R, q0), numeric, 1e-10 * numeric);
    EXPECT_TRUE(std::isinf(tail_bound(DecayFit{-1.0, 1.0}, R, q0)));
    // Huge prefactors stay finite thanks to the log-space evaluation.
    EXPECT_TRUE(std::isfinite(tail_bound(DecayFit{27.4, 3e44}, 8.0, 1.0)));
}

TEST(SmoothnessProbe, CubicGivesRatioFour) {
    const double u0 = 1.0, delta = 0.1;
    auto f = [](double t) { return t * t * t - 0.5 * t; };
    double coarse_mu[5], fine_mu[5];
    for (int k = -2; k <= 2; ++k) {
        coarse_mu[k + 2] = f(u0 + k * delta);
        fine_mu[k + 2] = f(u0 + k * 0.5 * delta);
    }
    const SmoothnessProbe a = smoothness_probe(u0, delta, 1.0, coarse_mu);
    const SmoothnessProbe b = smoothness_probe(u0, 0.5 * delta, 1.0, fine_mu);
    EXPECT_NEAR(a.first_delta, 3.0 * u0 * u0 - 0.5 + delta * delta, 1e-12);
    EXPECT_NEAR(a.second_delta, 6.0 * u0, 1e-9);
    EXPECT_NEAR(richardson_ratio(a, b), 4.0, 1e-6);
}

TEST(SmoothReconstruction, UndefinedForNonnegativePsi) {
    EXPECT_THROW(smooth_higgs_reconstruction(1.0, 0.0, 0.5), UndefinedFormula);
    EXPECT_THROW(smooth_higgs_reconstruction(1.0, 0.2, 0.5), UndefinedFormula);
}

// For psi < 0 the printed field gives |q| ((1 - e^{2 psi}) + 1/(e^{-2 psi} - 1))
// against the diagonal metric, which is not 4|q| sinh^2 psi.
TEST(SmoothReconstruction, TraceAgainstDiagonalMetric) {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> d;
    double worst_gap = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Complex u(d(rng), d(rng)), z(d(rng), d(rng));
        const double psi = -0.05 - std::abs(d(rng));
        const double aq = std::abs(z * z * z + u);
        const double oracle = aq * ((1.0 - std::exp(2 * psi)) + 1.0 / (std::exp(-2 * psi) - 1.0));
        const double tr = trace_density(smooth_higgs_reconstruction(u, psi, z), small_metric(u, psi, z));
        EXPECT_NEAR(tr, oracle, 1e-10 * (1 + oracle));
        worst_gap = std::max(worst_gap, std::abs(oracle - trace_density_small(u, psi, z)) / (1 + oracle));
    }
    EXPECT_GT(worst_gap, 1e-3);
    // Lower-left entry blows up as psi -> 0-.
    EXPECT_GT(std::abs(smooth_higgs_reconstruction(1.0, -1e-6, 0.5)(1, 0)), 100.0);
}

TEST(Cutoff, StepShape) {
    EXPECT_EQ(cutoff(0.1, 0.3, 0.6), 1.0);
    EXPECT_EQ(cutoff(0.3, 0.3, 0.6), 1.0);
    EXPECT_EQ(cutoff(0.6, 0.3, 0.6), 0.0);
    EXPECT_EQ(cutoff(2.0, 0.3, 0.6), 0.0);
    EXPECT_NEAR(cutoff(0.45, 0.3, 0.6), 0.5, 1e-15);
    double prev = 1.0;
    for (int i = 0; i <= 300; ++i) {
        const double c = cutoff(0.3 + 0.001 * i, 0.3, 0.6);
        EXPECT_LE(c, prev + 1e-15);
        prev = c;
    }
    const double e = 1e-5;
    EXPECT_NEAR((cutoff(0.3 + e, 0.3, 0.6) - 1.0) / e, 0.0, 1e-6);
    EXPECT_NEAR(cutoff(0.6 - e, 0.3, 0.6) / e, 0.0, 1e-6);
}

TEST(PatchedField, ExactOutsideBumps) {
    const auto s = std::make_shared<const ScalarSolution>(small_one());
    const PatchedHiggsField f = make_patched_field(s, 0.3, 0.6);
    ASSERT_EQ(f.bumps.size(), 3u);
    const Complex z(2.5, 1.0);
    EXPECT_EQ(patched_field(f, z), higgs_eval(HiggsFieldSpec::small(1.0), z));
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> r(1.8, 4.0), a(0.0, 2 * std::numbers::pi);
    for (int t = 0; t < 100; ++t) EXPECT_LT(std::abs(moment_map(f, std::polar(r(rng), a(rng))).trace()), 1e-10);
}

TEST(PatchedField, PrintedFieldUndefinedNearRoots) {
    const auto s = std::make_shared<const ScalarSolution>(small_one());
    const PatchedHiggsField f = make_patched_field(s, 0.3, 0.6);
    const Complex near_root = std::polar(1.0, std::numbers::pi / 3.0) + 0.2;
    EXPECT_THROW(patched_field(f, near_root), UndefinedFormula);
    EXPECT_THROW(patched_mu(f), UndefinedFormula);
    EXPECT_THROW(make_patched_field(s, 0.1, 0.6), DomainError);
    EXPECT_THROW(make_patched_field(s, 0.3, 0.2), DomainError);
}

TEST(ErrorTerm, CancelsOnGammaZeroAnsatz) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> d;
    for (int t = 0; t < 200; ++t) {
        const Complex omega(d(rng), d(rng)), z(d(rng), d(rng));
        const double psi0 = 0.5 * d(rng);
        const Complex P = z * z + z * omega + omega * omega, Q = z - omega;
        const double f1 = std::sqrt(std::abs(P / Q)) * std::exp(psi0);
        const double E = error_term(0.0, omega, f1, 1.0 / f1, 0.0, psi0, z);
        EXPECT_NEAR(E, 0.0, 1e-10 * (1 + std::abs(P * Q) * std::cosh(2 * psi0)));
    }
}

TEST(ErrorTerm, TrivialInputs) {
    const Complex omega(0.8, 0.3), z(-0.4, 1.2);
    const Complex P = z * z + z * omega + omega * omega, Q = z - omega;
    EXPECT_NEAR(error_term(0.0, omega, 1.0, 1.0, 0.0, 0.0, z), std::norm(P) + std::norm(Q) - 2 * std::abs(P * Q), 1e-12);
}

// Tr(phi phi^{*h}) = E + 2|q| cosh 2psi0 + 2|gamma|^2 |g|^2 + 2 Re(conj(P) Q g^2),
// so the printed E differs from the alternative form 2|gamma|^2|g|^2 + 2|PQ| sinh^2 psi0.
TEST(ErrorTerm, TraceIdentityAndRecordedMismatch) {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> d;
    double mismatch = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Complex gamma(d(rng), d(rng)), omega(d(rng), d(rng)), z(d(rng), d(rng));
        const Eigen::Vector3d x(0.5 * d(rng), 0.5 * d(rng), 0.5 * d(rng));
        const Mat2 h = metric_from_log(x);
        const double f1 = h(0, 0).real(), f2 = h(1, 1).real();
        const Complex g = h(0, 1);
        const double psi0 = 0.5 * d(rng);
        const Complex P = z * z + z * omega + omega * omega, Q = z - omega;
        const double aq = std::abs(P * Q);
        const double tr = trace_density(higgs_eval(HiggsFieldSpec::big(gamma, omega), z), h);
        const double E = error_term(gamma, omega, f1, f2, g, psi0, z);
        const double rhs = E + 2 * aq * std::cosh(2 * psi0) + 2 * std::norm(gamma) * std::norm(g) +
                           2 * (std::conj(P) * Q * g * g).real();
        EXPECT_NEAR(tr, rhs, 1e-9 * (1 + std::abs(tr)));
        const double alt = 2 * std::norm(gamma) * std::norm(g) + 2 * aq * std::sinh(psi0) * std::sinh(psi0);
        mismatch = std::max(mismatch, std::abs(tr - 4 * aq - E - alt));
    }
    EXPECT_GT(mismatch, 1e-3);
}

TEST(MuSmall, NonnegativeAndRefinementStable) {
    const NormResult a = mu_small(small_one());
    EXPECT_GE(a.value, 0.0);
    EXPECT_GE(a.tail_estimate, 0.0);
    EXPECT_GE(a.excision_estimate, 0.0);
    EXPECT_EQ(a.n, 129);
    EXPECT_EQ(a.source, small_one().problem.label());
    ScalarTemplate t;
    const NormResult b = mu_small(solve_small(1.0, t));
    EXPECT_LE(std::abs(a.value - b.value) / b.value, 0.01);
}

TEST(MuSmall, CentralFiberDensityDecreasesOutward) {
    const ScalarSolution s = solve_small(0.0, coarse());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (double r = 2.0; r <= 4.0; r += 0.1) {
        const double psi = interpolate_bicubic(*s.problem.grid, s.psi.values, r);
        const double y = trace_density_small(0.0, psi, r);
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
        ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    EXPECT_LT(slope, 0.0);
}

TEST(MuBig, GammaZeroEqualsScalarPathBitwise) {
    const ScalarSolution s = solve_big_gamma0(1.0, coarse());
    const MatrixProblem p = build_matrix_problem(0.0, 1.0, 8.0, 129, 1e-8);
    const MatrixSolution m = flow_solve(p, embed_scalar(s, p.grid));
    const NormResult a = mu_big(m, s);
    const NormResult b = mu_big_scalar_path(s);
    EXPECT_EQ(a.value, b.value);
    EXPECT_GE(a.value, 0.0);
    const MatrixProblem other = build_matrix_problem(0.0, 1.0, 8.0, 65, 1e-8);
    MatrixSolution wrong;
    wrong.problem = other;
    wrong.h = far_field_model(other);
    EXPECT_THROW(mu_big(wrong, s), DomainError);
}

TEST(TrivializingGauge, VanishesInFarField) {
    EXPECT_LE(trivializing_gauge_vanishing(1.0, small_one(), Complex(3.5, 0.5)), 1e-6);
}
