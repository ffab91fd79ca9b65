#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hml/grid.hpp"
#include "hml/moduli.hpp"

namespace hml {

enum class ScalarKind { Small, BigGamma0 };

// Regularized: solve for the smooth w = psi + 1/2 log|P/Q| on the whole grid.
// AsymptoticDirichlet: pin psi = -1/2 log|P/Q| on staircase excision circles and
// solve outside only.
enum class BoundaryTreatment { Regularized, AsymptoticDirichlet };

struct ScalarProblem {
    ScalarKind kind = ScalarKind::Small;
    // u for Small, omega for BigGamma0.
    Complex param{};
    GridPtr grid;
    double eps = 0.0;
    double tolerance = 1e-8;
    int max_iterations = 50;
    BoundaryTreatment treatment = BoundaryTreatment::Regularized;

    // q = P Q. Small: P = z^3 + u, Q = 1. BigGamma0: P = z^2 + z w + w^2, Q = z - w.
    Complex P(Complex z) const;
    Complex Q(Complex z) const;
    Complex q(Complex z) const { return P(z) * Q(z); }
    // 1/2 log|P/Q|, so that f1 = |P/Q|^{1/2} e^psi = e^{w}.
    double singular_part(Complex z) const;
    std::vector<Complex> roots() const;
    // Nodes at |z| >= R/2 carry psi itself in the solver state.
    bool far(std::size_t k) const;
    std::string label() const;
};

ScalarProblem build_problem(ScalarKind kind, Complex param, double R, int n, double eps, double tol,
                            int max_iterations = 50,
                            BoundaryTreatment treatment = BoundaryTreatment::Regularized);

double boundary_value(const ScalarProblem& problem, Complex z);

// Solver unknowns: w at near nodes, psi at far nodes, NaN where undefined.
using ScalarState = std::vector<double>;

ScalarState default_initial_state(const ScalarProblem& problem);
ScalarState state_from_psi(const ScalarProblem& problem, const ScalarField& psi);
ScalarField psi_from_state(const ScalarProblem& problem, const ScalarState& state);
// w = log f1 at every node where it is defined.
std::vector<double> log_f1_from_state(const ScalarProblem& problem, const ScalarState& state);

ScalarField residual(const ScalarProblem& problem, const ScalarState& state);
ScalarField residual(const ScalarField& psi, const ScalarProblem& problem);

struct DecayFit {
    double rate = 0.0;
    double prefactor = 0.0;
};

struct ScalarSolution {
    ScalarProblem problem;
    ScalarState state;
    ScalarField psi;
    std::vector<double> log_f1;
    double residual_sup = 0.0;
    int newton_iterations = 0;
    int halvings = 0;
    std::optional<DecayFit> decay;
    double wall_seconds = 0.0;
};

// Discrete harmonic function with the excision/outer boundary data.
ScalarField harmonic_extension(const ScalarProblem& problem);

ScalarSolution newton_solve(const ScalarProblem& problem, const std::optional<ScalarField>& initial = std::nullopt);
ScalarSolution newton_solve_state(const ScalarProblem& problem, ScalarState initial);

DecayFit decay_fit(const ScalarField& psi, double R);
DecayFit decay_fit(const ScalarSolution& solution);

struct Annulus {
    double r_in = 1.0;
    double r_out = 2.0;
    bool contains(Complex z) const {
        const double r = std::abs(z);
        return r >= r_in && r <= r_out;
    }
};

struct ScalarTemplate {
    double R = 8.0;
    int n = 257;
    double eps = 0.15;
    double tol = 1e-8;
    int max_iterations = 50;
    BoundaryTreatment treatment = BoundaryTreatment::Regularized;
};

ScalarSolution solve_small(Complex u, const ScalarTemplate& t);
ScalarSolution solve_big_gamma0(Complex omega, const ScalarTemplate& t);

// Values of a field on the (2n-1)-grid sampled at the nodes of the n-grid.
ScalarField inject(const ScalarField& fine, const GridPtr& coarse);

// Ratio |psi_n - psi_{2n-1}| / |psi_{2n-1} - psi_{4n-3}| on the annulus.
double refinement_ratio(const ScalarSolution& coarse, const ScalarSolution& mid, const ScalarSolution& fine,
                        const Annulus& annulus);

// Sup of |a - b| over annulus nodes where both are finite.
double annulus_distance(const ScalarField& a, const ScalarField& b, const Annulus& annulus);

struct ConvergencePoint {
    Complex u;
    double distance = 0.0;
};

std::vector<ConvergencePoint> convergence_study(const std::vector<Complex>& u_sequence, const Annulus& annulus,
                                                const ScalarTemplate& t);
std::vector<ConvergencePoint> convergence_study(const std::vector<ScalarSolution>& solutions,
                                                const ScalarSolution& reference, const Annulus& annulus);

// Least-squares slope of log distance against log |u|.
double observed_order(const std::vector<ConvergencePoint>& points);

// Sup over non-excised interior nodes of |psi(e^{2 pi i/3} z) - psi(z)|, bicubic.
double rotation_defect(const ScalarSolution& solution);
// Sup of |psi(i, j) - psi(i, n-1-j)| over mirror pairs.
double conjugation_defect(const ScalarSolution& solution);
// Largest variance of bicubic psi over circles of radius r in [r_min, r_max].
double radial_variance(const ScalarSolution& solution, double r_min, double r_max);
// (sup |psi| on interior nodes, sup |psi| on excision-boundary nodes).
std::pair<double, double> maximum_principle_sups(const ScalarSolution& solution);

}  // namespace hml
