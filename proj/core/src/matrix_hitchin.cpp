#include "hml/matrix_hitchin.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>

#include "hml/error.hpp"

namespace hml {

namespace {

const Complex kI(0.0, 1.0);

inline Mat2 inverse2(const Mat2& m) {
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Mat2 r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r / det;
}

inline Mat2 hermitian_from_components(const Eigen::Vector3d& x) {
    Mat2 m;
    m << Complex(x[2], 0.0), Complex(x[0], -x[1]), Complex(x[0], x[1]), Complex(-x[2], 0.0);
    return m;
}

// exp(t X) for X with components x.
inline Mat2 exp_scaled(const Eigen::Vector3d& x, double t) {
    const double r = x.norm();
    const double a = t * r;
    const double c = std::cosh(a);
    const double s = (r > 1e-300) ? std::sinh(a) / r : t;
    Mat2 m = s * hermitian_from_components(x);
    m(0, 0) += c;
    m(1, 1) += c;
    return m;
}

}  // namespace

Mat2 metric_from_log(const Eigen::Vector3d& x) { return exp_scaled(x, 1.0); }

Eigen::Vector3d log_coordinates(const Mat2& h) {
    const double half_trace = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double r = std::acosh(std::max(1.0, half_trace));
    const double scale = (r > 1e-12) ? r / std::sinh(r) : 1.0 - r * r / 6.0;
    const double d = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const Complex lower = 0.5 * (h(1, 0) + std::conj(h(0, 1)));
    return {scale * lower.real(), scale * lower.imag(), scale * d};
}

Mat2 exp_traceless(const Mat2& a) {
    // a^2 = s2 I for traceless a.
    const Complex s2 = a(0, 0) * a(0, 0) + a(0, 1) * a(1, 0);
    const Complex s = std::sqrt(s2);
    Complex c, sh;
    if (std::abs(s) < 1e-8) {
        c = 1.0 + s2 / 2.0;
        sh = 1.0 + s2 / 6.0;
    } else {
        c = std::cosh(s);
        sh = std::sinh(s) / s;
    }
    Mat2 r = sh * a;
    r(0, 0) += c;
    r(1, 1) += c;
    return r;
}

Mat2 log_det1(const Mat2& m) {
    const Complex half_tr = 0.5 * (m(0, 0) + m(1, 1));
    Mat2 n = m;
    n(0, 0) -= half_tr;
    n(1, 1) -= half_tr;
    const Complex d = 0.5 * (m(0, 0) - m(1, 1));
    const double sig2 = (d * d + m(0, 1) * m(1, 0)).real();
    const double sig = std::sqrt(std::max(0.0, sig2));
    const double f = (sig > 1e-6) ? std::asinh(sig) / sig : 1.0 - sig * sig / 6.0;
    return f * n;
}

MetricField MetricField::from_log(GridPtr grid, std::vector<Eigen::Vector3d> X) {
    if (X.size() != grid->size()) throw DomainError("metric field does not match the grid");
    return MetricField{std::move(grid), std::move(X)};
}

Mat2 MetricField::h(std::size_t k) const { return metric_from_log(X[k]); }
double MetricField::f1(std::size_t k) const { return h(k)(0, 0).real(); }
double MetricField::f2(std::size_t k) const { return h(k)(1, 1).real(); }
Complex MetricField::g(std::size_t k) const { return h(k)(0, 1); }

MetricField EtaField::to_metric() const {
    const Grid& g = *reference.grid;
    std::vector<Eigen::Vector3d> X(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Mat2 half = exp_scaled(reference.X[k], 0.5);
        Mat2 h = half * exp_traceless(eta[k]) * half;
        X[k] = log_coordinates(0.5 * (h + h.adjoint()));
    }
    return MetricField::from_log(reference.grid, std::move(X));
}

EtaField EtaField::from_metric(const MetricField& h, const MetricField& reference) {
    EtaField e;
    e.reference = reference;
    e.eta.resize(h.X.size());
    for (std::size_t k = 0; k < h.X.size(); ++k) {
        const Mat2 mhalf = exp_scaled(reference.X[k], -0.5);
        Mat2 inner = mhalf * h.h(k) * mhalf;
        inner = 0.5 * (inner + inner.adjoint());
        e.eta[k] = hermitian_from_components(log_coordinates(inner));
    }
    return e;
}

double MatrixProblem::model_exponent(Complex z) const {
    const Complex w = omega;
    return 0.5 * (std::log(std::abs(z * z + z * w + w * w)) - std::log(std::abs(z - w)));
}

MatrixProblem build_matrix_problem(Complex gamma, Complex omega, double R, int n, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw GeometryError("tolerance must be positive", tol);
    if (max_iterations < 1) throw GeometryError("max_iterations must be >= 1", max_iterations);
    MatrixProblem p;
    p.gamma = gamma;
    p.omega = omega;
    p.tolerance = tol;
    p.max_iterations = max_iterations;
    p.grid = std::make_shared<const Grid>(R, n);
    // Roots of P Q have modulus |omega|; the model must be smooth across the far zone.
    const double reach = std::abs(omega) + 2.0 * p.grid->h();
    if (2.0 * reach > R) throw GeometryError("R must exceed 2 (|omega| + 2h), got reach", reach);
    return p;
}

Mat2 adjoint(const Mat2& phi, const Mat2& h) { return h * phi.adjoint() * inverse2(h); }

namespace {

struct Workspace {
    const Grid* grid;
    std::vector<Mat2> H, Hinv, Hhalf, Hmhalf, Phi;
    std::vector<double> tau;
    std::vector<std::uint8_t> far;
};

void refresh_node(Workspace& w, const std::vector<Eigen::Vector3d>& X, std::size_t k) {
    w.H[k] = exp_scaled(X[k], 1.0);
    w.Hinv[k] = exp_scaled(X[k], -1.0);
    w.Hhalf[k] = exp_scaled(X[k], 0.5);
    w.Hmhalf[k] = exp_scaled(X[k], -0.5);
}

Workspace make_workspace(const MetricField& h, const MatrixProblem* problem) {
    const Grid& g = *h.grid;
    Workspace w;
    w.grid = &g;
    const std::size_t N = g.size();
    w.H.resize(N);
    w.Hinv.resize(N);
    w.Hhalf.resize(N);
    w.Hmhalf.resize(N);
    w.Phi.assign(N, Mat2::Zero());
    w.tau.assign(N, 0.0);
    w.far.assign(N, 0);
    for (std::size_t k = 0; k < N; ++k) refresh_node(w, h.X, k);
    if (problem) {
        const HiggsFieldSpec spec = problem->spec();
        std::vector<double> s(N);
        for (std::size_t k = 0; k < N; ++k) {
            w.Phi[k] = higgs_eval(spec, g.z(k));
            s[k] = problem->model_exponent(g.z(k));
        }
        const double ih2 = 1.0 / (g.h() * g.h());
        const int n = g.n();
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                const std::size_t k = g.index(i, j);
                if (!problem->far(k)) continue;
                w.far[k] = 1;
                w.tau[k] = ih2 * (s[k - 1] + s[k + 1] + s[k - n] + s[k + n] - 4.0 * s[k]);
            }
        }
    }
    return w;
}

inline Mat2 curvature_at(const Workspace& w, std::size_t k) {
    const Grid& g = *w.grid;
    const std::size_t n = static_cast<std::size_t>(g.n());
    const double h = g.h();
    const Mat2& Hi = w.Hinv[k];
    const Mat2& E = w.H[k + 1];
    const Mat2& W = w.H[k - 1];
    const Mat2& N = w.H[k + n];
    const Mat2& S = w.H[k - n];
    Mat2 L = log_det1(E * Hi) + log_det1(W * Hi) + log_det1(N * Hi) + log_det1(S * Hi);
    L /= h * h;
    const Mat2 Bx = (E - W) * Hi / (2.0 * h);
    const Mat2 By = (N - S) * Hi / (2.0 * h);
    return 0.25 * (L - kI * (Bx * By - By * Bx));
}

inline Mat2 residual_at(const Workspace& w, std::size_t k) {
    Mat2 R = curvature_at(w, k);
    const Mat2& P = w.Phi[k];
    const Mat2 Ps = w.H[k] * P.adjoint() * w.Hinv[k];
    R += 0.25 * (P * Ps - Ps * P);
    if (w.far[k]) {
        Mat2 T = Mat2::Zero();
        T(0, 0) = w.tau[k];
        T(1, 1) = -w.tau[k];
        R -= 0.125 * (T + w.H[k] * T * w.Hinv[k]);
    }
    return R;
}

// Components (Re R~21, Im R~21, Re R~11) of R~ = h^{-1/2} R h^{1/2}.
inline Eigen::Vector3d reduced(const Workspace& w, std::size_t k, const Mat2& R) {
    const Mat2 Rt = w.Hmhalf[k] * R * w.Hhalf[k];
    const Complex lower = 0.5 * (Rt(1, 0) + std::conj(Rt(0, 1)));
    return {lower.real(), lower.imag(), 0.5 * (Rt(0, 0).real() - Rt(1, 1).real())};
}

inline double entry_sup(const Mat2& m) {
    return std::max(std::max(std::abs(m(0, 0)), std::abs(m(0, 1))), std::max(std::abs(m(1, 0)), std::abs(m(1, 1))));
}

bool interior(const Grid& g, std::size_t k) { return g.kind(k) != NodeKind::OuterBoundary; }

}  // namespace

std::vector<Mat2> curvature(const MetricField& h) {
    const Workspace w = make_workspace(h, nullptr);
    std::vector<Mat2> out(h.grid->size(), Mat2::Zero());
    for (std::size_t k = 0; k < out.size(); ++k)
        if (interior(*h.grid, k)) out[k] = curvature_at(w, k);
    return out;
}

HitchinResidual hitchin_residual(const MetricField& h, const MatrixProblem& problem) {
    if (h.grid->n() != problem.grid->n() || h.grid->R() != problem.grid->R()) {
        throw DomainError("hitchin_residual: metric and problem grids differ");
    }
    const Workspace w = make_workspace(h, &problem);
    HitchinResidual r;
    r.values.assign(h.grid->size(), Mat2::Zero());
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        if (!interior(*h.grid, k)) continue;
        r.values[k] = residual_at(w, k);
        r.sup = std::max(r.sup, entry_sup(r.values[k]));
    }
    return r;
}

MetricField far_field_model(const MatrixProblem& problem) {
    const Grid& g = *problem.grid;
    std::vector<Eigen::Vector3d> X(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) X[k] = {0.0, 0.0, problem.model_exponent(g.z(k))};
    return MetricField::from_log(problem.grid, std::move(X));
}

MetricField embed_scalar(const ScalarSolution& s, const GridPtr& grid) {
    const Grid& sg = *s.problem.grid;
    if (sg.n() != grid->n() || sg.R() != grid->R()) throw DomainError("embed_scalar: grids differ");
    std::vector<Eigen::Vector3d> X(grid->size());
    for (std::size_t k = 0; k < grid->size(); ++k) X[k] = {0.0, 0.0, s.log_f1[k]};
    return MetricField::from_log(grid, std::move(X));
}

namespace {

MetricField default_initial_metric(const MatrixProblem& problem) {
    MetricField m = far_field_model(problem);
    const Grid& g = *problem.grid;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (problem.far(k) || !interior(g, k)) continue;
        const Complex z = g.z(k);
        const Complex w = problem.omega;
        const double aP = std::abs(z * z + z * w + w * w);
        const double aQ = std::abs(z - w);
        m.X[k] = {0.0, 0.0, 0.25 * std::log((aP * aP + 1.0) / (aQ * aQ + 1.0))};
    }
    return m;
}

struct Evaluation {
    Eigen::VectorXd F;
    double sup = 0.0;
};

Evaluation evaluate(const Workspace& w, const std::vector<std::size_t>& nodes) {
    Evaluation e;
    e.F.resize(3 * static_cast<int>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Mat2 R = residual_at(w, nodes[i]);
        e.sup = std::max(e.sup, entry_sup(R));
        e.F.segment<3>(3 * static_cast<int>(i)) = reduced(w, nodes[i], R);
    }
    if (!std::isfinite(e.sup) || !e.F.allFinite()) e.sup = std::numeric_limits<double>::infinity();
    return e;
}

double det_error(const std::vector<Eigen::Vector3d>& X) {
    double worst = 0.0;
    for (const auto& x : X) {
        const Mat2 h = metric_from_log(x);
        const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
        worst = std::max(worst, std::abs(det - 1.0));
    }
    return worst;
}

// Central-difference Jacobian of the reduced residual, 5-coloured so that each
// sweep perturbs nodes whose stencils do not overlap.
Eigen::SparseMatrix<double> fd_jacobian(Workspace& w, std::vector<Eigen::Vector3d>& X,
                                        const std::vector<std::size_t>& nodes, const std::vector<int>& unknown) {
    const Grid& g = *w.grid;
    const int n = g.n();
    const double step = 1e-6;
    const int m = static_cast<int>(nodes.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 45);
    std::vector<std::vector<std::size_t>> colour(5);
    for (std::size_t k : nodes) colour[(g.col(k) + 3 * g.row(k)) % 5].push_back(k);
    std::vector<Eigen::Vector3d> plus(static_cast<std::size_t>(m)), minus(static_cast<std::size_t>(m));
    const std::ptrdiff_t offs[5] = {0, -1, 1, -n, n};

    for (int c = 0; c < 5; ++c) {
        for (int a = 0; a < 3; ++a) {
            for (int sign = 0; sign < 2; ++sign) {
                const double d = sign == 0 ? step : -step;
                for (std::size_t k : colour[c]) {
                    X[k][a] += d;
                    refresh_node(w, X, k);
                }
                auto& out = sign == 0 ? plus : minus;
                for (int i = 0; i < m; ++i) out[i] = reduced(w, nodes[i], residual_at(w, nodes[i]));
                for (std::size_t k : colour[c]) {
                    X[k][a] -= d;
                    refresh_node(w, X, k);
                }
            }
            for (int i = 0; i < m; ++i) {
                const std::size_t row_node = nodes[i];
                for (std::ptrdiff_t o : offs) {
                    const std::size_t k = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(row_node) + o);
                    if ((g.col(k) + 3 * g.row(k)) % 5 != c) continue;
                    const int col = unknown[k];
                    if (col < 0) continue;
                    const Eigen::Vector3d dr = (plus[i] - minus[i]) / (2.0 * step);
                    for (int r = 0; r < 3; ++r) trip.emplace_back(3 * i + r, 3 * col + a, dr[r]);
                }
            }
        }
    }
    Eigen::SparseMatrix<double> J(3 * m, 3 * m);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    return J;
}

}  // namespace

MatrixSolution flow_solve(const MatrixProblem& problem, const std::optional<MetricField>& initial) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid& g = *problem.grid;
    MetricField h = initial ? *initial : default_initial_metric(problem);
    if (h.grid->n() != g.n() || h.grid->R() != g.R()) throw DomainError("flow_solve: initial metric grid differs");
    h.grid = problem.grid;
    // Outer ring carries the far-field model.
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!interior(g, k)) h.X[k] = {0.0, 0.0, problem.model_exponent(g.z(k))};

    std::vector<int> unknown(g.size(), -1);
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!interior(g, k)) continue;
        unknown[k] = static_cast<int>(nodes.size());
        nodes.push_back(k);
    }

    Workspace w = make_workspace(h, &problem);
    Evaluation cur = evaluate(w, nodes);
    MatrixSolution sol;
    sol.problem = problem;
    sol.det_error = det_error(h.X);
    int iterations = 0;
    int flow_steps = 0;
    const int m = static_cast<int>(nodes.size());
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;

    while (!(cur.sup <= problem.tolerance)) {
        if (iterations >= problem.max_iterations) {
            throw ConvergenceError("flow_solve: no convergence after " + std::to_string(iterations) +
                                       " iterations, residual " + std::to_string(cur.sup),
                                   cur.sup, iterations);
        }
        ++iterations;
        const auto tj = std::chrono::steady_clock::now();
        Eigen::SparseMatrix<double> J = fd_jacobian(w, h.X, nodes, unknown);
        const auto tf = std::chrono::steady_clock::now();
        if (!analyzed) {
            lu.analyzePattern(J);
            analyzed = true;
        }
        lu.factorize(J);
        if (std::getenv("HML_TRACE")) {
            std::fprintf(stderr, "jac %.2fs lu %.2fs res %.3e\n", std::chrono::duration<double>(tf - tj).count(),
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - tf).count(), cur.sup);
        }
        bool accepted = false;
        if (lu.info() == Eigen::Success) {
            const Eigen::VectorXd rhs = -cur.F;
            const Eigen::VectorXd delta = lu.solve(rhs);
            double step = 1.0;
            for (int half = 0; half <= 30 && !accepted; ++half, step *= 0.5) {
                std::vector<Eigen::Vector3d> trial = h.X;
                for (int i = 0; i < m; ++i) trial[nodes[i]] += step * delta.segment<3>(3 * i);
                Workspace wt = w;
                for (std::size_t k : nodes) refresh_node(wt, trial, k);
                Evaluation et = evaluate(wt, nodes);
                if (et.sup < cur.sup) {
                    h.X.swap(trial);
                    w = std::move(wt);
                    cur = std::move(et);
                    accepted = true;
                }
            }
        }
        if (!accepted) {
            // Explicit flow step dX = 4 dt R~, dt halved on increase.
            double dt = 0.125 * g.h() * g.h();
            for (int attempt = 0; attempt < 30 && !accepted; ++attempt, dt *= 0.5) {
                std::vector<Eigen::Vector3d> trial = h.X;
                for (int i = 0; i < m; ++i) trial[nodes[i]] += 4.0 * dt * cur.F.segment<3>(3 * i);
                Workspace wt = w;
                for (std::size_t k : nodes) refresh_node(wt, trial, k);
                Evaluation et = evaluate(wt, nodes);
                if (et.sup < cur.sup) {
                    h.X.swap(trial);
                    w = std::move(wt);
                    cur = std::move(et);
                    accepted = true;
                    ++flow_steps;
                }
            }
        }
        sol.det_error = std::max(sol.det_error, det_error(h.X));
        if (!accepted) {
            throw ConvergenceError("flow_solve: Newton and flow steps both failed to reduce residual " +
                                       std::to_string(cur.sup),
                                   cur.sup, iterations);
        }
    }

    sol.h = std::move(h);
    sol.residual_sup = cur.sup;
    sol.iterations = iterations;
    sol.flow_steps = flow_steps;
    sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

double metric_distance(const MetricField& a, const MetricField& b, const Annulus& annulus) {
    const Grid& g = *a.grid;
    if (b.grid->n() != g.n() || b.grid->R() != g.R()) throw DomainError("metric_distance: grids differ");
    double sup = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!annulus.contains(g.z(k))) continue;
        sup = std::max(sup, entry_sup(a.h(k) - b.h(k)));
    }
    return sup;
}

double max_offdiagonal(const MetricField& h) {
    double sup = 0.0;
    for (std::size_t k = 0; k < h.X.size(); ++k) sup = std::max(sup, std::abs(h.g(k)));
    return sup;
}

std::vector<GammaPoint> gamma_convergence(const std::vector<MatrixSolution>& solutions, const MatrixSolution& reference,
                                          const Annulus& annulus) {
    std::vector<GammaPoint> out;
    for (const auto& s : solutions) out.push_back({s.problem.gamma, metric_distance(s.h, reference.h, annulus)});
    return out;
}

std::vector<GammaPoint> gamma_convergence(const std::vector<Complex>& gammas, Complex omega, const Annulus& annulus,
                                          const MatrixTemplate& t) {
    const MatrixSolution ref = flow_solve(build_matrix_problem(0.0, omega, t.R, t.n, t.tol, t.max_iterations));
    std::vector<MatrixSolution> sols;
    sols.reserve(gammas.size());
    for (Complex gm : gammas) {
        sols.push_back(flow_solve(build_matrix_problem(gm, omega, t.R, t.n, t.tol, t.max_iterations), ref.h));
    }
    return gamma_convergence(sols, ref, annulus);
}

}  // namespace hml
