#include "hml/scalar_pde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/CholmodSupport>

#include "hml/error.hpp"

namespace hml {

Complex ScalarProblem::P(Complex z) const {
    if (kind == ScalarKind::Small) return z * z * z + param;
    return z * z + z * param + param * param;
}

Complex ScalarProblem::Q(Complex z) const {
    if (kind == ScalarKind::Small) return 1.0;
    return z - param;
}

double ScalarProblem::singular_part(Complex z) const {
    return 0.5 * (std::log(std::abs(P(z))) - std::log(std::abs(Q(z))));
}

std::vector<Complex> ScalarProblem::roots() const {
    std::vector<Complex> out;
    if (kind == ScalarKind::BigGamma0) {
        for (int k = 0; k < 3; ++k) out.push_back(param * std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0));
        return out;
    }
    const Complex c = -param;
    if (std::abs(c) == 0.0) {
        out.assign(3, Complex(0.0, 0.0));
        return out;
    }
    const double r = std::cbrt(std::abs(c));
    const double a = std::arg(c);
    for (int k = 0; k < 3; ++k) out.push_back(std::polar(r, (a + 2.0 * std::numbers::pi * k) / 3.0));
    return out;
}

bool ScalarProblem::far(std::size_t k) const { return std::abs(grid->z(k)) >= 0.5 * grid->R(); }

std::string ScalarProblem::label() const {
    std::ostringstream os;
    os.precision(17);
    os << (kind == ScalarKind::Small ? "small(u=" : "big0(omega=") << param.real() << (param.imag() < 0 ? "" : "+")
       << param.imag() << "i)";
    return os.str();
}

namespace {

std::vector<Excision> cluster_roots(const std::vector<Complex>& roots, double eps, double h) {
    // Single-linkage: roots closer than 2 eps + 2 h share a disc.
    const std::size_t m = roots.size();
    std::vector<int> label(m);
    for (std::size_t i = 0; i < m; ++i) label[i] = static_cast<int>(i);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (std::abs(roots[i] - roots[j]) < 2.0 * eps + 2.0 * h && label[i] != label[j]) {
                    const int lo = std::min(label[i], label[j]);
                    label[i] = label[j] = lo;
                    changed = true;
                }
    }
    std::vector<Excision> out;
    for (std::size_t i = 0; i < m; ++i) {
        if (label[i] != static_cast<int>(i)) continue;
        Excision e;
        for (std::size_t j = 0; j < m; ++j)
            if (label[j] == static_cast<int>(i)) e.roots.push_back(roots[j]);
        Complex c(0.0, 0.0);
        for (auto r : e.roots) c += r;
        c /= static_cast<double>(e.roots.size());
        double spread = 0.0;
        for (auto r : e.roots) spread = std::max(spread, std::abs(r - c));
        e.center = c;
        e.radius = spread + eps;
        out.push_back(e);
    }
    return out;
}

enum class Role : std::uint8_t { Unknown, Fixed, Removed };

struct Context {
    const ScalarProblem* problem;
    const Grid* grid;
    std::vector<double> s, P2, Q2, aq;
    std::vector<std::uint8_t> far;
    std::vector<Role> role;
    std::vector<int> unknown;
    std::vector<std::size_t> nodes;
};

Context make_context(const ScalarProblem& p) {
    Context c;
    c.problem = &p;
    c.grid = p.grid.get();
    const Grid& g = *c.grid;
    const std::size_t N = g.size();
    c.s.resize(N);
    c.P2.resize(N);
    c.Q2.resize(N);
    c.aq.resize(N);
    c.far.resize(N);
    c.role.resize(N);
    c.unknown.assign(N, -1);
    const bool dirichlet = p.treatment == BoundaryTreatment::AsymptoticDirichlet;
    for (std::size_t k = 0; k < N; ++k) {
        const Complex z = g.z(k);
        const double aP = std::abs(p.P(z));
        const double aQ = std::abs(p.Q(z));
        c.P2[k] = aP * aP;
        c.Q2[k] = aQ * aQ;
        c.aq[k] = aP * aQ;
        c.s[k] = 0.5 * (std::log(aP) - std::log(aQ));
        c.far[k] = p.far(k) ? 1 : 0;
        const NodeKind kind = g.kind(k);
        if (kind == NodeKind::OuterBoundary) {
            c.role[k] = Role::Fixed;
        } else if (dirichlet && kind == NodeKind::Excised) {
            c.role[k] = Role::Removed;
        } else if (dirichlet && kind == NodeKind::ExcisionBoundary) {
            c.role[k] = Role::Fixed;
        } else {
            c.role[k] = Role::Unknown;
            c.unknown[k] = static_cast<int>(c.nodes.size());
            c.nodes.push_back(k);
        }
    }
    return c;
}

// Neighbour value expressed in the representation of node k.
inline double nbr_value(const Context& c, const ScalarState& v, std::size_t k, std::size_t m) {
    if (c.far[k] == c.far[m]) return v[m];
    return c.far[k] ? v[m] - c.s[m] : v[m] + c.s[m];
}

inline std::size_t nbr(const Grid& g, std::size_t k, int d) {
    const int n = g.n();
    switch (d) {
        case 0: return k - 1;
        case 1: return k + 1;
        case 2: return k - static_cast<std::size_t>(n);
        default: return k + static_cast<std::size_t>(n);
    }
}

// Residual and Jacobian diagonal term at an unknown node.
inline double node_residual(const Context& c, const ScalarState& v, std::size_t k, double* dterm) {
    const Grid& g = *c.grid;
    const double ih2 = 1.0 / (g.h() * g.h());
    double lap = -4.0 * v[k];
    for (int d = 0; d < 4; ++d) lap += nbr_value(c, v, k, nbr(g, k, d));
    lap *= ih2;
    const double x = v[k];
    if (c.far[k]) {
        if (dterm) *dterm = 4.0 * c.aq[k] * std::cosh(2.0 * x);
        return lap - 2.0 * c.aq[k] * std::sinh(2.0 * x);
    }
    const double ep = std::exp(2.0 * x);
    const double em = std::exp(-2.0 * x);
    if (dterm) *dterm = 2.0 * c.Q2[k] * ep + 2.0 * c.P2[k] * em;
    return lap - (c.Q2[k] * ep - c.P2[k] * em);
}

double sup_residual(const Context& c, const ScalarState& v) {
    double sup = 0.0;
    for (std::size_t k : c.nodes) {
        const double r = std::abs(node_residual(c, v, k, nullptr));
        if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
        sup = std::max(sup, r);
    }
    return sup;
}

void apply_fixed_values(const Context& c, ScalarState& v) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (c.role[k] == Role::Removed) {
            v[k] = kNaN;
        } else if (c.role[k] == Role::Fixed) {
            // Outer boundary: psi = 0 (far zone). Dirichlet ring: w = 0 (near zone).
            v[k] = 0.0;
        }
    }
}

struct LaplaceSystem {
    Eigen::SparseMatrix<double> A;
    std::vector<double*> diag;
};

// A = -Lap_h restricted to unknowns (SPD M-matrix); diag[i] points at A(i, i).
LaplaceSystem assemble_laplace(const Grid& g, const std::vector<std::size_t>& nodes, const std::vector<int>& unknown) {
    const double ih2 = 1.0 / (g.h() * g.h());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nodes.size() * 5);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::size_t k = nodes[i];
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 4.0 * ih2);
        for (int d = 0; d < 4; ++d) {
            const int j = unknown[nbr(g, k, d)];
            if (j >= 0) trip.emplace_back(static_cast<int>(i), j, -ih2);
        }
    }
    LaplaceSystem sys;
    const int m = static_cast<int>(nodes.size());
    sys.A.resize(m, m);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
    sys.diag.resize(m);
    for (int col = 0; col < m; ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, col); it; ++it) {
            if (it.row() == col) sys.diag[col] = &it.valueRef();
        }
    }
    return sys;
}

void check_linear_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double bn = b.norm();
    if (bn == 0.0) return;
    const double rel = (A * x - b).norm() / bn;
    if (!(rel <= 1e-10)) {
        throw ConvergenceError("linear solve relative residual " + std::to_string(rel) + " exceeds 1e-10", rel, 0);
    }
}

}  // namespace

ScalarProblem build_problem(ScalarKind kind, Complex param, double R, int n, double eps, double tol,
                            int max_iterations, BoundaryTreatment treatment) {
    if (!(tol > 0.0)) throw GeometryError("tolerance must be positive", tol);
    if (max_iterations < 1) throw GeometryError("max_iterations must be >= 1", max_iterations);
    if (!(R > 0.0)) throw GeometryError("grid half-width must be positive", R);
    if (n < 5 || n % 2 == 0) throw GeometryError("nodes per axis must be odd and >= 5", n);
    if (!(eps > 0.0)) throw GeometryError("excision radius must be positive", eps);
    const double h = 2.0 * R / (n - 1);
    if (treatment == BoundaryTreatment::AsymptoticDirichlet && eps < 3.0 * h) {
        throw GeometryError("excision radius below 3 grid spacings (3h = " + std::to_string(3.0 * h) + ")", eps);
    }
    if (kind == ScalarKind::BigGamma0 && std::abs(param) == 0.0) {
        throw GeometryError("BigGamma0 needs omega != 0", 0.0);
    }

    ScalarProblem p;
    p.kind = kind;
    p.param = param;
    p.eps = eps;
    p.tolerance = tol;
    p.max_iterations = max_iterations;
    p.treatment = treatment;

    for (Complex r : p.roots()) {
        const double reach = std::abs(r) + std::max(eps, 2.0 * h);
        if (reach >= 0.5 * R) throw GeometryError("root too close to |z| = R/2, reach", reach);
    }
    auto discs = cluster_roots(p.roots(), eps, h);
    p.grid = std::make_shared<const Grid>(R, n, std::move(discs));
    return p;
}

double boundary_value(const ScalarProblem& problem, Complex z) {
    const Grid& g = *problem.grid;
    const double R = g.R();
    const double tol = 1e-12 * R;
    if (std::abs(std::abs(z.real()) - R) <= tol || std::abs(std::abs(z.imag()) - R) <= tol) {
        if (std::abs(z.real()) <= R + tol && std::abs(z.imag()) <= R + tol) return 0.0;
    }
    for (const auto& e : g.excisions()) {
        const double d = std::abs(z - e.center);
        if (d >= e.radius - tol && d <= e.radius + g.h()) return -problem.singular_part(z);
    }
    throw DomainError("boundary_value: z is neither on the outer boundary nor on an excision circle");
}

ScalarState default_initial_state(const ScalarProblem& problem) {
    const Context c = make_context(problem);
    ScalarState v(c.grid->size(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = c.far[k] ? 0.0 : 0.25 * std::log((c.P2[k] + 1.0) / (c.Q2[k] + 1.0));
    }
    apply_fixed_values(c, v);
    return v;
}

ScalarState state_from_psi(const ScalarProblem& problem, const ScalarField& psi) {
    const Context c = make_context(problem);
    if (psi.values.size() != c.grid->size()) throw DomainError("initial field does not match the grid");
    ScalarState v = default_initial_state(problem);
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double p = psi.values[k];
        if (!std::isfinite(p) || c.role[k] != Role::Unknown) continue;
        const double x = c.far[k] ? p : p + c.s[k];
        if (std::isfinite(x)) v[k] = x;
    }
    return v;
}

ScalarField psi_from_state(const ScalarProblem& problem, const ScalarState& state) {
    const Grid& g = *problem.grid;
    ScalarField f{problem.grid, std::vector<double>(g.size(), kNaN)};
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.excised(k)) continue;
        const double v = state[k];
        if (problem.far(k)) {
            f.values[k] = v;
        } else {
            f.values[k] = v - problem.singular_part(g.z(k));
        }
        if (!std::isfinite(f.values[k])) f.values[k] = kNaN;
    }
    return f;
}

std::vector<double> log_f1_from_state(const ScalarProblem& problem, const ScalarState& state) {
    const Grid& g = *problem.grid;
    std::vector<double> w(g.size(), kNaN);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double v = state[k];
        w[k] = problem.far(k) ? v + problem.singular_part(g.z(k)) : v;
        if (!std::isfinite(w[k])) w[k] = kNaN;
    }
    return w;
}

ScalarField residual(const ScalarProblem& problem, const ScalarState& state) {
    const Context c = make_context(problem);
    ScalarField f{problem.grid, std::vector<double>(c.grid->size(), 0.0)};
    for (std::size_t k = 0; k < f.values.size(); ++k)
        if (c.role[k] == Role::Removed) f.values[k] = kNaN;
    for (std::size_t k : c.nodes) f.values[k] = node_residual(c, state, k, nullptr);
    return f;
}

ScalarField residual(const ScalarField& psi, const ScalarProblem& problem) {
    return residual(problem, state_from_psi(problem, psi));
}

ScalarField harmonic_extension(const ScalarProblem& problem) {
    const Grid& g = *problem.grid;
    std::vector<int> unknown(g.size(), -1);
    std::vector<std::size_t> nodes;
    std::vector<double> fixed(g.size(), kNaN);
    for (std::size_t k = 0; k < g.size(); ++k) {
        switch (g.kind(k)) {
            case NodeKind::Interior:
                unknown[k] = static_cast<int>(nodes.size());
                nodes.push_back(k);
                break;
            case NodeKind::OuterBoundary: fixed[k] = 0.0; break;
            case NodeKind::ExcisionBoundary: fixed[k] = -problem.singular_part(g.z(k)); break;
            case NodeKind::Excised: break;
        }
    }
    LaplaceSystem sys = assemble_laplace(g, nodes, unknown);
    const double ih2 = 1.0 / (g.h() * g.h());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<int>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int d = 0; d < 4; ++d) {
            const std::size_t m = nbr(g, nodes[i], d);
            if (unknown[m] < 0) b[static_cast<int>(i)] += ih2 * fixed[m];
        }
    }
    Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>> ldlt(sys.A);
    if (ldlt.info() != Eigen::Success) throw Error("harmonic extension: factorization failed");
    Eigen::VectorXd x = ldlt.solve(b);
    check_linear_solve(sys.A, x, b);
    ScalarField f{problem.grid, fixed};
    for (std::size_t i = 0; i < nodes.size(); ++i) f.values[nodes[i]] = x[static_cast<int>(i)];
    return f;
}

ScalarSolution newton_solve(const ScalarProblem& problem, const std::optional<ScalarField>& initial) {
    return newton_solve_state(problem, initial ? state_from_psi(problem, *initial) : default_initial_state(problem));
}

ScalarSolution newton_solve_state(const ScalarProblem& problem, ScalarState v) {
    const auto t0 = std::chrono::steady_clock::now();
    const Context c = make_context(problem);
    if (v.size() != c.grid->size()) throw DomainError("initial state does not match the grid");
    apply_fixed_values(c, v);
    for (std::size_t k : c.nodes)
        if (!std::isfinite(v[k])) v[k] = c.far[k] ? 0.0 : 0.25 * std::log((c.P2[k] + 1.0) / (c.Q2[k] + 1.0));

    LaplaceSystem sys = assemble_laplace(*c.grid, c.nodes, c.unknown);
    const double ih2 = 1.0 / (c.grid->h() * c.grid->h());
    Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.analyzePattern(sys.A);

    const int m = static_cast<int>(c.nodes.size());
    Eigen::VectorXd F(m);
    Eigen::VectorXd delta(m);
    ScalarState trial;
    int iterations = 0;
    int halvings = 0;
    double sup = sup_residual(c, v);

    while (!(sup <= problem.tolerance)) {
        if (iterations >= problem.max_iterations) {
            throw ConvergenceError("newton_solve " + problem.label() + ": no convergence after " +
                                       std::to_string(iterations) + " iterations, residual " + std::to_string(sup),
                                   sup, iterations);
        }
        for (int i = 0; i < m; ++i) {
            double d = 0.0;
            F[i] = node_residual(c, v, c.nodes[i], &d);
            *sys.diag[i] = 4.0 * ih2 + d;
        }
        ldlt.factorize(sys.A);
        if (ldlt.info() != Eigen::Success) {
            throw ConvergenceError("newton_solve: Jacobian factorization failed", sup, iterations);
        }
        delta = ldlt.solve(F);
        check_linear_solve(sys.A, delta, F);
        ++iterations;

        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half <= 30; ++half) {
            trial = v;
            for (int i = 0; i < m; ++i) trial[c.nodes[i]] += step * delta[i];
            const double s_trial = sup_residual(c, trial);
            if (s_trial < sup) {
                v.swap(trial);
                sup = s_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
            ++halvings;
        }
        if (!accepted) {
            throw ConvergenceError("newton_solve " + problem.label() + ": step halving exhausted at residual " +
                                       std::to_string(sup),
                                   sup, iterations);
        }
    }

    ScalarSolution sol;
    sol.problem = problem;
    sol.state = std::move(v);
    sol.psi = psi_from_state(problem, sol.state);
    sol.log_f1 = log_f1_from_state(problem, sol.state);
    sol.residual_sup = sup;
    sol.newton_iterations = iterations;
    sol.halvings = halvings;
    try {
        sol.decay = decay_fit(sol.psi, c.grid->R());
    } catch (const Error&) {
        sol.decay.reset();
    }
    sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

DecayFit decay_fit(const ScalarField& psi, double R) {
    const Grid& g = *psi.grid;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kind(k) != NodeKind::Interior) continue;
        const double r = std::abs(g.z(k));
        if (r < 0.6 * R || r > 0.9 * R) continue;
        const double p = std::abs(psi.values[k]);
        if (!std::isfinite(p) || !(p > 0.0)) continue;
        const double y = std::log(p);
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
        ++count;
    }
    if (count < 2) throw DomainError("decay_fit: psi vanishes on the annulus 0.6R <= |z| <= 0.9R");
    const double nn = static_cast<double>(count);
    const double denom = nn * sxx - sx * sx;
    if (!(denom > 0.0)) throw DomainError("decay_fit: degenerate annulus");
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;
    return {-slope, std::exp(intercept)};
}

DecayFit decay_fit(const ScalarSolution& solution) { return decay_fit(solution.psi, solution.problem.grid->R()); }

ScalarSolution solve_small(Complex u, const ScalarTemplate& t) {
    return newton_solve(build_problem(ScalarKind::Small, u, t.R, t.n, t.eps, t.tol, t.max_iterations, t.treatment));
}

ScalarSolution solve_big_gamma0(Complex omega, const ScalarTemplate& t) {
    return newton_solve(
        build_problem(ScalarKind::BigGamma0, omega, t.R, t.n, t.eps, t.tol, t.max_iterations, t.treatment));
}

double annulus_distance(const ScalarField& a, const ScalarField& b, const Annulus& annulus) {
    const Grid& g = *a.grid;
    if (b.grid->n() != g.n() || b.grid->R() != g.R()) throw DomainError("annulus_distance: grids differ");
    double sup = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!annulus.contains(g.z(k))) continue;
        const double x = a.values[k];
        const double y = b.values[k];
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        sup = std::max(sup, std::abs(x - y));
    }
    return sup;
}

ScalarField inject(const ScalarField& fine, const GridPtr& coarse) {
    const Grid& f = *fine.grid;
    const Grid& c = *coarse;
    if (f.n() != 2 * c.n() - 1 || f.R() != c.R()) throw DomainError("inject: grids are not one refinement apart");
    ScalarField out{coarse, std::vector<double>(c.size(), kNaN)};
    for (int j = 0; j < c.n(); ++j)
        for (int i = 0; i < c.n(); ++i) out.values[c.index(i, j)] = fine.values[f.index(2 * i, 2 * j)];
    return out;
}

double refinement_ratio(const ScalarSolution& coarse, const ScalarSolution& mid, const ScalarSolution& fine,
                        const Annulus& annulus) {
    const GridPtr& gc = coarse.psi.grid;
    const double d1 = annulus_distance(coarse.psi, inject(mid.psi, gc), annulus);
    const ScalarField fine_on_mid = inject(fine.psi, mid.psi.grid);
    const double d2 = annulus_distance(inject(mid.psi, gc), inject(fine_on_mid, gc), annulus);
    return d1 / d2;
}

std::vector<ConvergencePoint> convergence_study(const std::vector<ScalarSolution>& solutions,
                                                const ScalarSolution& reference, const Annulus& annulus) {
    std::vector<ConvergencePoint> out;
    for (const auto& s : solutions) out.push_back({s.problem.param, annulus_distance(s.psi, reference.psi, annulus)});
    return out;
}

std::vector<ConvergencePoint> convergence_study(const std::vector<Complex>& u_sequence, const Annulus& annulus,
                                                const ScalarTemplate& t) {
    const ScalarSolution ref = solve_small(0.0, t);
    std::vector<ScalarSolution> sols;
    sols.reserve(u_sequence.size());
    for (Complex u : u_sequence) sols.push_back(solve_small(u, t));
    return convergence_study(sols, ref, annulus);
}

double observed_order(const std::vector<ConvergencePoint>& points) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const auto& p : points) {
        if (!(p.distance > 0.0) || std::abs(p.u) == 0.0) continue;
        const double x = std::log(std::abs(p.u));
        const double y = std::log(p.distance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return kNaN;
    const double nn = static_cast<double>(count);
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

namespace {

double interpolated_psi(const ScalarSolution& s, Complex z) {
    const Grid& g = *s.problem.grid;
    if (g.disc_of(z) >= 0) return kNaN;
    const double w = interpolate_bicubic(g, s.log_f1, z);
    return w - s.problem.singular_part(z);
}

}  // namespace

double rotation_defect(const ScalarSolution& solution) {
    const Grid& g = *solution.problem.grid;
    const Complex rot = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    double sup = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const NodeKind kind = g.kind(k);
        if (kind == NodeKind::OuterBoundary || kind == NodeKind::Excised) continue;
        const double p = solution.psi.values[k];
        if (!std::isfinite(p)) continue;
        const double pr = interpolated_psi(solution, rot * g.z(k));
        if (!std::isfinite(pr)) continue;
        sup = std::max(sup, std::abs(pr - p));
    }
    return sup;
}

double conjugation_defect(const ScalarSolution& solution) {
    const Grid& g = *solution.problem.grid;
    const int n = g.n();
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double a = solution.psi.at(i, j);
            const double b = solution.psi.at(i, n - 1 - j);
            if (!std::isfinite(a) || !std::isfinite(b)) continue;
            sup = std::max(sup, std::abs(a - b));
        }
    }
    return sup;
}

double radial_variance(const ScalarSolution& solution, double r_min, double r_max) {
    const Grid& g = *solution.problem.grid;
    const int samples = 360;
    double worst = 0.0;
    for (double r = r_min; r <= r_max + 1e-12; r += g.h()) {
        double sum = 0.0, sum2 = 0.0;
        int count = 0;
        for (int a = 0; a < samples; ++a) {
            const double p = interpolated_psi(solution, std::polar(r, 2.0 * std::numbers::pi * a / samples));
            if (!std::isfinite(p)) continue;
            sum += p;
            sum2 += p * p;
            ++count;
        }
        if (count < 2) continue;
        const double mean = sum / count;
        worst = std::max(worst, std::max(0.0, sum2 / count - mean * mean));
    }
    return worst;
}

std::pair<double, double> maximum_principle_sups(const ScalarSolution& solution) {
    const Grid& g = *solution.problem.grid;
    double inner = 0.0, ring = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double p = std::abs(solution.psi.values[k]);
        if (!std::isfinite(p)) continue;
        if (g.kind(k) == NodeKind::Interior) inner = std::max(inner, p);
        if (g.kind(k) == NodeKind::ExcisionBoundary) ring = std::max(ring, p);
    }
    return {inner, ring};
}

}  // namespace hml
