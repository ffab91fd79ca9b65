#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hml/grid.hpp"
#include "hml/moduli.hpp"
#include "hml/scalar_pde.hpp"

namespace hml {

// Hermitian det-1 metric h = [[f1, g], [conj g, f2]] = exp(X) per node, with
// X = [[x3, x1 - i x2], [x1 + i x2, -x3]].
struct MetricField {
    GridPtr grid;
    std::vector<Eigen::Vector3d> X;

    static MetricField from_log(GridPtr grid, std::vector<Eigen::Vector3d> X);

    Mat2 h(std::size_t k) const;
    double f1(std::size_t k) const;
    double f2(std::size_t k) const;
    Complex g(std::size_t k) const;
};

Mat2 metric_from_log(const Eigen::Vector3d& x);
// Inverse of metric_from_log for a Hermitian positive det-1 matrix.
Eigen::Vector3d log_coordinates(const Mat2& h);
// exp of a traceless 2x2 matrix.
Mat2 exp_traceless(const Mat2& a);
// log of a 2x2 matrix with det 1 and positive real spectrum.
Mat2 log_det1(const Mat2& m);

struct EtaField {
    MetricField reference;
    std::vector<Mat2> eta;

    // h = h_ref^{1/2} exp(eta) h_ref^{1/2}.
    MetricField to_metric() const;
    static EtaField from_metric(const MetricField& h, const MetricField& reference);
};

struct MatrixProblem {
    Complex gamma{};
    Complex omega{};
    GridPtr grid;
    double tolerance = 1e-8;
    int max_iterations = 40;

    HiggsFieldSpec spec() const { return HiggsFieldSpec::big(gamma, omega); }
    // Diagonal model exponent: X = diag(s, -s) with s = 1/2 log|P/Q|.
    double model_exponent(Complex z) const;
    bool far(std::size_t k) const { return std::abs(grid->z(k)) >= 0.5 * grid->R(); }
};

MatrixProblem build_matrix_problem(Complex gamma, Complex omega, double R, int n, double tol, int max_iterations = 40);

// h Phi^dagger h^{-1}.
Mat2 adjoint(const Mat2& phi, const Mat2& h);

// Discrete dbar((d h) h^{-1}) per node; zero on the outer ring.
std::vector<Mat2> curvature(const MetricField& h);

struct HitchinResidual {
    std::vector<Mat2> values;
    double sup = 0.0;
};

// K(h) + 1/4 [Phi, Phi^{*h}], with the far-zone truncation of the diagonal model
// removed so that the model field is an exact discrete solution at infinity.
HitchinResidual hitchin_residual(const MetricField& h, const MatrixProblem& problem);

MetricField far_field_model(const MatrixProblem& problem);
// diag(w, -w) from a scalar BigGamma0 solution on a grid of the same shape.
MetricField embed_scalar(const ScalarSolution& s, const GridPtr& grid);

struct MatrixSolution {
    MetricField h;
    MatrixProblem problem;
    double residual_sup = 0.0;
    int iterations = 0;
    int flow_steps = 0;
    // Largest |det h - 1| seen over all iterates.
    double det_error = 0.0;
    double wall_seconds = 0.0;
};

MatrixSolution flow_solve(const MatrixProblem& problem, const std::optional<MetricField>& initial = std::nullopt);

struct MatrixTemplate {
    double R = 8.0;
    int n = 257;
    double tol = 1e-8;
    int max_iterations = 40;
};

// Entrywise sup of |h_a - h_b| (f1, f2, g) over annulus nodes.
double metric_distance(const MetricField& a, const MetricField& b, const Annulus& annulus);
double max_offdiagonal(const MetricField& h);

struct GammaPoint {
    Complex gamma;
    double distance = 0.0;
};

std::vector<GammaPoint> gamma_convergence(const std::vector<Complex>& gammas, Complex omega, const Annulus& annulus,
                                          const MatrixTemplate& t);
std::vector<GammaPoint> gamma_convergence(const std::vector<MatrixSolution>& solutions, const MatrixSolution& reference,
                                          const Annulus& annulus);

}  // namespace hml
