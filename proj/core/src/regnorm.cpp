#include "hml/regnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "hml/error.hpp"

namespace hml {

namespace {

double pairwise(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise(v, half) + pairwise(v + half, n - half);
}

double sinh2(double x) {
    const double s = std::sinh(x);
    return s * s;
}

NormResult provenance(const ScalarSolution& s) {
    NormResult r;
    r.source = s.problem.label();
    r.n = s.problem.grid->n();
    r.R = s.problem.grid->R();
    r.eps = s.problem.eps;
    r.residual_sup = s.residual_sup;
    return r;
}

double fiber_constant(const ScalarProblem& p) {
    return p.kind == ScalarKind::Small ? std::abs(p.param) : std::pow(std::abs(p.param), 3);
}

// sup of the density over each disc and its staircase ring, times the disc area.
double excision_bound(const ScalarProblem& p, const std::vector<double>& density) {
    const Grid& g = *p.grid;
    double total = 0.0;
    for (const auto& e : g.excisions()) {
        double sup = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (std::abs(g.z(k) - e.center) > e.radius + g.h()) continue;
            if (std::isfinite(density[k])) sup = std::max(sup, std::abs(density[k]));
        }
        total += kMeasure * sup * std::numbers::pi * e.radius * e.radius;
    }
    return total;
}

constexpr int kBlock = 6;

// Cells around the zeros of q carry the cone |P||Q|; the trapezoid value there
// is replaced by a 16 x 16 midpoint rule with w interpolated.
double kink_correction(const ScalarSolution& s, const std::vector<double>& density) {
    const ScalarProblem& p = s.problem;
    if (p.treatment != BoundaryTreatment::Regularized) return 0.0;
    const Grid& g = *p.grid;
    const double h = g.h();
    std::set<std::size_t> cells;
    for (Complex r : p.roots()) {
        const int ci = static_cast<int>(std::lround((r.real() + g.R()) / h));
        const int cj = static_cast<int>(std::lround((r.imag() + g.R()) / h));
        for (int j = cj - kBlock; j <= cj + kBlock; ++j)
            for (int i = ci - kBlock; i <= ci + kBlock; ++i)
                if (i > 0 && j > 0 && i < g.n() - 1 && j < g.n() - 1) cells.insert(g.index(i, j));
    }
    constexpr int M = 16;
    const double sub = h / M;
    double total = 0.0;
    for (std::size_t k : cells) {
        if (p.far(k) || !std::isfinite(density[k])) continue;
        const Complex c = g.z(k);
        double acc = 0.0;
        bool ok = true;
        for (int b = 0; b < M && ok; ++b) {
            for (int a = 0; a < M; ++a) {
                const Complex z = c + Complex((a + 0.5) * sub - 0.5 * h, (b + 0.5) * sub - 0.5 * h);
                const double w = interpolate_bicubic(g, s.log_f1, z);
                if (!std::isfinite(w)) {
                    ok = false;
                    break;
                }
                const double aP = std::abs(p.P(z));
                const double aQ = std::abs(p.Q(z));
                acc += aQ * aQ * std::exp(2.0 * w) + aP * aP * std::exp(-2.0 * w) - 2.0 * aP * aQ;
            }
        }
        if (ok) total += acc * sub * sub - density[k] * h * h;
    }
    return kMeasure * total;
}

double interpolated_psi(const ScalarSolution& s, Complex z) {
    const Grid& g = *s.problem.grid;
    return interpolate_bicubic(g, s.log_f1, z) - s.problem.singular_part(z);
}

}  // namespace

double quadrature(const Grid& grid, const std::vector<double>& density) {
    std::vector<double> finite;
    finite.reserve(density.size());
    for (double d : density)
        if (std::isfinite(d)) finite.push_back(d);
    return kMeasure * grid.h() * grid.h() * pairwise(finite.data(), finite.size());
}

double trace_density_small(Complex u, double psi, Complex z) { return 4.0 * std::abs(z * z * z + u) * sinh2(psi); }

double trace_density(const Mat2& phi, const Mat2& h) { return (phi * adjoint(phi, h)).trace().real(); }

Mat2 small_metric(Complex u, double psi, Complex z) {
    const double aq = std::abs(z * z * z + u);
    Mat2 h = Mat2::Zero();
    h(0, 0) = std::sqrt(aq) * std::exp(psi);
    h(1, 1) = std::exp(-psi) / std::sqrt(aq);
    return h;
}

std::vector<double> small_density(const ScalarSolution& solution) {
    const ScalarProblem& p = solution.problem;
    const Grid& g = *p.grid;
    const bool dirichlet = p.treatment == BoundaryTreatment::AsymptoticDirichlet;
    std::vector<double> d(g.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kind(k) == NodeKind::OuterBoundary) continue;
        const Complex z = g.z(k);
        const double aP = std::abs(p.P(z));
        const double aQ = std::abs(p.Q(z));
        const double v = solution.state[k];
        if (dirichlet && g.excised(k)) {
            d[k] = kNaN;
        } else if (p.far(k)) {
            d[k] = 4.0 * aP * aQ * sinh2(v);
        } else if (dirichlet) {
            d[k] = 4.0 * aP * aQ * sinh2(v - p.singular_part(z));
        } else {
            d[k] = aQ * aQ * std::exp(2.0 * v) + aP * aP * std::exp(-2.0 * v) - 2.0 * aP * aQ;
        }
    }
    return d;
}

double tail_bound(const DecayFit& fit, double R, double q0) {
    if (!(fit.rate > 0.0) || !(fit.prefactor > 0.0)) return std::numeric_limits<double>::infinity();
    const double a = 2.0 * fit.rate;
    // int_R^inf r^m e^{-a r} dr = e^{-a R} sum_k m!/(m-k)! R^{m-k} / a^{k+1}
    auto moment = [&](int m) {
        double s = 0.0;
        double falling = 1.0;
        for (int k = 0; k <= m; ++k) {
            s += falling * std::pow(R, m - k) / std::pow(a, k + 1);
            falling *= (m - k);
        }
        return s;
    };
    const double log_scale = 2.0 * std::log(fit.prefactor) - a * R;
    return 16.0 * std::exp(log_scale) * (moment(4) + q0 * moment(1));
}

NormResult mu_small(const ScalarSolution& solution) {
    const ScalarProblem& p = solution.problem;
    if (!(solution.residual_sup <= p.tolerance)) throw DomainError("mu_small: solution is not converged");
    const std::vector<double> density = small_density(solution);
    NormResult r = provenance(solution);
    r.value = quadrature(*p.grid, density) + kink_correction(solution, density);
    r.excision_estimate = excision_bound(p, density);
    r.tail_estimate = solution.decay ? tail_bound(*solution.decay, p.grid->R(), fiber_constant(p))
                                     : std::numeric_limits<double>::infinity();
    return r;
}

SmoothnessProbe smoothness_probe(Complex u0, double delta, Complex direction, const double mu[5]) {
    SmoothnessProbe s;
    s.u0 = u0;
    s.direction = direction;
    s.delta = delta;
    std::copy(mu, mu + 5, s.mu);
    s.first_delta = (mu[3] - mu[1]) / (2.0 * delta);
    s.first_2delta = (mu[4] - mu[0]) / (4.0 * delta);
    s.second_delta = (mu[3] - 2.0 * mu[2] + mu[1]) / (delta * delta);
    return s;
}

SmoothnessProbe mu_smoothness_probe(Complex u0, double delta, Complex direction, const ScalarTemplate& t) {
    if (!(delta > 0.0)) throw DomainError("smoothness probe needs delta > 0");
    if (std::abs(direction) == 0.0) throw DomainError("smoothness probe needs a nonzero direction");
    const Complex d = direction / std::abs(direction);
    double mu[5];
    for (int k = -2; k <= 2; ++k) mu[k + 2] = mu_small(solve_small(u0 + static_cast<double>(k) * delta * d, t)).value;
    return smoothness_probe(u0, delta, d, mu);
}

double richardson_ratio(const SmoothnessProbe& at_delta, const SmoothnessProbe& at_half_delta) {
    return (at_delta.first_2delta - at_delta.first_delta) / (at_delta.first_delta - at_half_delta.first_delta);
}

Mat2 smooth_higgs_reconstruction(Complex u, double psi, Complex z) {
    if (!(psi < 0.0)) {
        throw UndefinedFormula("printed smooth field needs psi < 0: (e^{-2 psi} - 1)^{-1/2} has radicand " +
                               std::to_string(std::exp(-2.0 * psi) - 1.0));
    }
    const Complex q = z * z * z + u;
    const Complex up = std::sqrt(Complex(std::exp(2.0 * psi) - 1.0, 0.0));
    const Complex down = std::sqrt(Complex(std::exp(-2.0 * psi) - 1.0, 0.0));
    Mat2 m;
    m << 0.0, q * up * std::exp(psi), std::exp(-psi) / down, 0.0;
    return m;
}

PatchedHiggsField make_patched_field(std::shared_ptr<const ScalarSolution> solution, double inner, double outer) {
    const ScalarProblem& p = solution->problem;
    if (p.kind != ScalarKind::Small) throw DomainError("patched field is defined on the small stratum");
    if (!(outer > inner)) throw DomainError("bump outer radius must exceed the inner radius");
    PatchedHiggsField f;
    f.u = p.param;
    const auto& discs = p.grid->excisions();
    for (const auto& e : discs) {
        if (inner < e.radius) throw DomainError("bump inner radius must cover the excision disc");
        f.bumps.push_back({e.center, inner, outer});
    }
    for (std::size_t a = 0; a < discs.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (std::abs(discs[a].center - discs[b].center) <= outer + inner)
                throw DomainError("bumps around different roots overlap");
    f.solution = std::move(solution);
    return f;
}

double cutoff(double distance, double inner, double outer) {
    if (distance <= inner) return 1.0;
    if (distance >= outer) return 0.0;
    const double t = (distance - inner) / (outer - inner);
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

namespace {

double bump_weight(const PatchedHiggsField& f, Complex z) {
    double chi = 0.0;
    for (const auto& b : f.bumps) chi = std::max(chi, cutoff(std::abs(z - b.center), b.inner, b.outer));
    return chi;
}

}  // namespace

Mat2 patched_field(const PatchedHiggsField& patched, Complex z) {
    const Mat2 phi = higgs_eval(HiggsFieldSpec::small(patched.u), z);
    const double chi = bump_weight(patched, z);
    if (chi == 0.0) return phi;
    const Mat2 hat = smooth_higgs_reconstruction(patched.u, interpolated_psi(*patched.solution, z), z);
    return chi * hat + (1.0 - chi) * phi;
}

Mat2 moment_map(const PatchedHiggsField& patched, Complex z) {
    const Mat2 f = patched_field(patched, z);
    const Mat2 h = small_metric(patched.u, interpolated_psi(*patched.solution, z), z);
    const Mat2 fs = adjoint(f, h);
    return f * fs - fs * f;
}

NormResult patched_mu(const PatchedHiggsField& patched) {
    const ScalarSolution& s = *patched.solution;
    const Grid& g = *s.problem.grid;
    const Complex u = patched.u;
    std::vector<double> density(g.size(), 0.0);
    std::size_t bump_nodes = 0;
    std::size_t undefined = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const NodeKind kind = g.kind(k);
        if (kind == NodeKind::OuterBoundary) continue;
        if (kind == NodeKind::Excised) {
            density[k] = kNaN;
            continue;
        }
        const Complex z = g.z(k);
        const double psi = s.psi.values[k];
        const Mat2 h = small_metric(u, psi, z);
        const Mat2 phi = higgs_eval(HiggsFieldSpec::small(u), z);
        const double chi = bump_weight(patched, z);
        const double regulated = trace_density(phi, h) - 2.0 * std::abs(z * z * z + u);
        if (chi == 0.0) {
            density[k] = regulated;
            continue;
        }
        ++bump_nodes;
        try {
            density[k] = chi * trace_density(smooth_higgs_reconstruction(u, psi, z), h) + (1.0 - chi) * regulated;
        } catch (const UndefinedFormula&) {
            ++undefined;
        }
    }
    if (undefined > 0) {
        throw UndefinedFormula("printed smooth field undefined at " + std::to_string(undefined) + " of " +
                               std::to_string(bump_nodes) + " bump nodes (psi >= 0 there)");
    }
    NormResult r = provenance(s);
    r.value = quadrature(g, density);
    r.excision_estimate = excision_bound(s.problem, small_density(s));
    r.tail_estimate = s.decay ? tail_bound(*s.decay, g.R(), std::abs(u)) : std::numeric_limits<double>::infinity();
    return r;
}

double error_term(Complex gamma, Complex omega, double f1, double f2, Complex g, double psi0, Complex z) {
    const Complex P = z * z + z * omega + omega * omega;
    const Complex Q = z - omega;
    const double q = std::abs(z * z * z - omega * omega * omega);
    const double aP = std::abs(P);
    const double aQ = std::abs(Q);
    const Complex cross = gamma * std::conj(P) * f2 * g - gamma * std::conj(Q) * f1 * std::conj(g) -
                          std::conj(P) * Q * g * g;
    return 2.0 * std::norm(gamma) * f1 * f2 + aP * aP * f2 * f2 + aQ * aQ * f1 * f1 + 4.0 * cross.real() -
           2.0 * q * std::cosh(2.0 * psi0);
}

namespace {

std::vector<double> big_scalar_density(const ScalarSolution& s) {
    std::vector<double> d = small_density(s);
    for (double& x : d) x *= 0.5;
    return d;
}

NormResult big_result(const ScalarSolution& s, const std::vector<double>& density) {
    NormResult r = provenance(s);
    r.value = quadrature(*s.problem.grid, density) + 0.5 * kink_correction(s, small_density(s));
    r.excision_estimate = excision_bound(s.problem, density);
    r.tail_estimate = s.decay ? 0.5 * tail_bound(*s.decay, s.problem.grid->R(), fiber_constant(s.problem))
                              : std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace

NormResult mu_big_scalar_path(const ScalarSolution& gamma0_solution) {
    if (gamma0_solution.problem.kind != ScalarKind::BigGamma0) throw DomainError("mu_big needs a BigGamma0 solution");
    return big_result(gamma0_solution, big_scalar_density(gamma0_solution));
}

NormResult mu_big(const MatrixSolution& matrix_solution, const ScalarSolution& gamma0_solution) {
    const ScalarProblem& sp = gamma0_solution.problem;
    const MatrixProblem& mp = matrix_solution.problem;
    if (sp.kind != ScalarKind::BigGamma0) throw DomainError("mu_big needs a BigGamma0 solution");
    if (sp.param != mp.omega) throw DomainError("mu_big: omega differs between the solutions");
    if (sp.grid->n() != mp.grid->n() || sp.grid->R() != mp.grid->R()) throw DomainError("mu_big: grids differ");
    std::vector<double> density = big_scalar_density(gamma0_solution);
    const double g2 = 2.0 * std::norm(mp.gamma);
    for (std::size_t k = 0; k < density.size(); ++k) {
        if (sp.grid->kind(k) == NodeKind::OuterBoundary) continue;
        density[k] = g2 * std::norm(matrix_solution.h.g(k)) + density[k];
    }
    NormResult r = big_result(gamma0_solution, density);
    r.residual_sup = std::max(r.residual_sup, matrix_solution.residual_sup);
    return r;
}

double trivializing_gauge_vanishing(Complex u, const ScalarSolution& solution, Complex z) {
    const double psi = interpolated_psi(solution, z);
    if (!std::isfinite(psi)) throw DomainError("trivializing_gauge_vanishing: psi undefined at z");
    const Mat2 g = trivializing_gauge(u, z, 0);
    const Mat2 phi = apply_gauge(g, higgs_eval(HiggsFieldSpec::small(u), z));
    const Mat2 h = g * small_metric(u, psi, z) * g.adjoint();
    return std::abs(trace_density(phi, h) - (phi * phi.adjoint()).trace().real());
}

}  // namespace hml
