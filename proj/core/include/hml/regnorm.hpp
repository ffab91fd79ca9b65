#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hml/matrix_hitchin.hpp"
#include "hml/moduli.hpp"
#include "hml/scalar_pde.hpp"

namespace hml {

struct NormResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    double excision_estimate = 0.0;
    // Provenance of the underlying solution(s).
    std::string source;
    int n = 0;
    double R = 0.0;
    double eps = 0.0;
    double residual_sup = 0.0;
};

// (i/pi) dz dzbar = (2/pi) dx dy.
inline constexpr double kMeasure = 0.63661977236758134308;

// (2/pi) h^2 sum of node densities, pairwise summed; NaN entries are skipped.
double quadrature(const Grid& grid, const std::vector<double>& density);

double trace_density_small(Complex u, double psi, Complex z);
// Re Tr(phi phi^{*h}).
double trace_density(const Mat2& phi, const Mat2& h);
// diag(|q|^{1/2} e^psi, |q|^{-1/2} e^-psi).
Mat2 small_metric(Complex u, double psi, Complex z);

// Regulated density per node: 4|q| sinh^2 psi, evaluated from w inside discs.
std::vector<double> small_density(const ScalarSolution& solution);

NormResult mu_small(const ScalarSolution& solution);

// 16 C^2 int_R^inf (r^4 + q0 r) e^{-2 c r} dr: envelope of 4|q| psi^2 outside the square.
double tail_bound(const DecayFit& fit, double R, double q0);

struct SmoothnessProbe {
    Complex u0;
    Complex direction;
    double delta = 0.0;
    // mu at u0 + k delta direction, k = -2..2.
    double mu[5] = {0, 0, 0, 0, 0};
    double first_delta = 0.0;
    double first_2delta = 0.0;
    double second_delta = 0.0;
};

SmoothnessProbe smoothness_probe(Complex u0, double delta, Complex direction, const double mu[5]);
SmoothnessProbe mu_smoothness_probe(Complex u0, double delta, Complex direction, const ScalarTemplate& t);
// (D(2d) - D(d)) / (D(d) - D(d/2)); 4 for a smooth function.
double richardson_ratio(const SmoothnessProbe& at_delta, const SmoothnessProbe& at_half_delta);

// Printed smooth field near a root; throws UndefinedFormula for psi >= 0.
Mat2 smooth_higgs_reconstruction(Complex u, double psi, Complex z);

struct Bump {
    Complex center;
    double inner = 0.0;
    double outer = 0.0;
};

struct PatchedHiggsField {
    Complex u;
    std::shared_ptr<const ScalarSolution> solution;
    std::vector<Bump> bumps;
};

PatchedHiggsField make_patched_field(std::shared_ptr<const ScalarSolution> solution, double inner, double outer);
// C^2 quintic step: 1 inside inner, 0 beyond outer.
double cutoff(double distance, double inner, double outer);
Mat2 patched_field(const PatchedHiggsField& patched, Complex z);
Mat2 moment_map(const PatchedHiggsField& patched, Complex z);
// Quadrature of chi Tr(phi_hat phi_hat^*) + (1 - chi)(Tr(phi phi^*) - 2|q|).
NormResult patched_mu(const PatchedHiggsField& patched);

// E_gamma exactly as printed.
double error_term(Complex gamma, Complex omega, double f1, double f2, Complex g, double psi0, Complex z);

// (2/pi) sum of (2|gamma|^2 |g|^2 + 2|z^3 - omega^3| sinh^2 psi0) h^2.
NormResult mu_big(const MatrixSolution& matrix_solution, const ScalarSolution& gamma0_solution);
// The gamma = 0 value computed from the scalar solution alone.
NormResult mu_big_scalar_path(const ScalarSolution& gamma0_solution);

// |Tr(phi' phi'^{*h'}) - Tr(phi' phi'^dagger)| in the frame of trivializing_gauge.
double trivializing_gauge_vanishing(Complex u, const ScalarSolution& solution, Complex z);

}  // namespace hml
