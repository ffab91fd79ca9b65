#include "hml/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "hml/error.hpp"

namespace hml {

namespace {

void compositions(int remaining, int slots, std::vector<int>& cur,
                  std::set<std::vector<int>, std::greater<>>& out) {
    if (slots == 1) {
        cur.push_back(remaining);
        out.insert(CyclicPartition::canonical(cur).parts);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        cur.push_back(v);
        compositions(remaining - v, slots - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

CyclicPartition CyclicPartition::canonical(std::vector<int> parts) {
    CyclicPartition out;
    int total = 0;
    for (int p : parts) total += p;
    out.n_total = total;
    out.parts = parts;
    const std::size_t k = parts.size();
    for (std::size_t s = 1; s < k; ++s) {
        std::rotate(parts.begin(), parts.begin() + 1, parts.end());
        if (parts > out.parts) out.parts = parts;
    }
    return out;
}

std::string CyclicPartition::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
    os << ')';
    return os.str();
}

std::string WeightVector::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < alphas.size(); ++i) os << (i ? "," : "") << alphas[i];
    os << ')';
    return os.str();
}

HiggsFieldSpec HiggsFieldSpec::small(Complex u) {
    HiggsFieldSpec s;
    s.stratum = Stratum::Small;
    s.u = u;
    return s;
}

HiggsFieldSpec HiggsFieldSpec::big(Complex gamma, Complex omega) {
    HiggsFieldSpec s;
    s.stratum = Stratum::Big;
    s.gamma = gamma;
    s.omega = omega;
    s.u = gamma * gamma - omega * omega * omega;
    return s;
}

Complex HiggsFieldSpec::fiber_invariant() const {
    if (stratum == Stratum::Small) return u;
    return gamma * gamma - omega * omega * omega;
}

std::vector<CyclicPartition> enumerate_cyclic_partitions(int K, int N) {
    if (K <= 0) throw DomainError("K must be positive, got " + std::to_string(K));
    if (N < 0) throw DomainError("N must be nonnegative, got " + std::to_string(N));
    std::set<std::vector<int>, std::greater<>> reps;
    std::vector<int> cur;
    cur.reserve(K);
    compositions(N, K, cur, reps);
    std::vector<CyclicPartition> out;
    out.reserve(reps.size());
    for (const auto& r : reps) out.push_back({r, N});
    return out;
}

WeightVector partition_to_weights(const CyclicPartition& b) {
    const int K = b.k();
    if (K <= 0) throw DomainError("empty partition");
    int sum = 0;
    for (int p : b.parts) {
        if (p < 0) throw DomainError("negative part in partition " + b.str());
        sum += p;
    }
    if (sum != b.n_total) throw DomainError("parts of " + b.str() + " do not sum to N");
    const Rational shift(b.n_total, K);
    std::vector<Rational> d(K);
    for (int i = 0; i < K; ++i) d[i] = Rational(b.parts[i]) - shift;

    // alpha_{j+1} = alpha_j - d_j with alpha_1 = t fixed by sum(alpha) = 0.
    Rational acc = 0;
    Rational partial = 0;
    for (int j = 0; j < K; ++j) {
        acc += partial;
        partial += d[j];
    }
    const Rational t = acc / Rational(K);
    WeightVector w;
    w.K = K;
    w.N = b.n_total;
    w.alphas.resize(K);
    w.alphas[0] = t;
    for (int j = 1; j < K; ++j) w.alphas[j] = w.alphas[j - 1] - d[j - 1];
    return w;
}

CyclicPartition weights_to_partition(const WeightVector& w) {
    const int K = w.K;
    if (K <= 0 || static_cast<int>(w.alphas.size()) != K) throw DomainError("malformed weight vector");
    const Rational shift(w.N, K);
    CyclicPartition b;
    b.n_total = w.N;
    for (int i = 0; i < K; ++i) {
        Rational bi = w.alphas[i] - w.alphas[(i + 1) % K] + shift;
        if (!bi.is_integer() || bi.num() < 0) {
            throw DomainError("weight gap " + bi.str() + " is not a nonnegative integer");
        }
        b.parts.push_back(static_cast<int>(bi.num()));
    }
    return b;
}

Rational parabolic_degree(const WeightVector& w) {
    Rational s = 0;
    for (const auto& a : w.alphas) s += a;
    return s;
}

HitchinBase hitchin_base_dimension(int K, int N) {
    if (K < 2) throw DomainError("Hitchin base needs K >= 2, got " + std::to_string(K));
    HitchinBase hb;
    for (int i = 2; i <= K; ++i) {
        Rational bound = Rational(static_cast<std::int64_t>(N) * (i - 1), K) - Rational(1);
        int d = static_cast<int>(bound.floor());
        hb.max_degree.push_back(d);
        if (d >= 0) hb.dimension += d + 1;
    }
    return hb;
}

void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == Complex(0.0, 0.0)) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

Complex poly_eval(const Poly& p, Complex z) {
    Complex acc(0.0, 0.0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

HiggsPolynomials higgs_polynomials(const HiggsFieldSpec& spec) {
    HiggsPolynomials hp;
    if (spec.stratum == HiggsFieldSpec::Stratum::Small) {
        hp.a = {};
        hp.b = {spec.u, 0.0, 0.0, 1.0};
        hp.c = {1.0};
    } else {
        const Complex w = spec.omega;
        hp.a = {spec.gamma};
        hp.b = {w * w, w, 1.0};
        hp.c = {-w, 1.0};
    }
    poly_trim(hp.a);
    poly_trim(hp.b);
    poly_trim(hp.c);
    return hp;
}

Mat2 higgs_eval(const HiggsFieldSpec& spec, Complex z) {
    Mat2 m;
    if (spec.stratum == HiggsFieldSpec::Stratum::Small) {
        m << 0.0, z * z * z + spec.u, 1.0, 0.0;
    } else {
        const Complex w = spec.omega;
        m << spec.gamma, z * z + z * w + w * w, z - w, -spec.gamma;
    }
    return m;
}

CharPolynomial char_poly(const HiggsFieldSpec& spec) {
    const HiggsPolynomials hp = higgs_polynomials(spec);
    // det(lambda - phi) = lambda^2 - tr(phi) lambda + det(phi), tr(phi) = 0.
    Poly det = poly_add(poly_mul(poly_mul(hp.a, hp.a), {-1.0}), poly_mul(poly_mul(hp.b, hp.c), {-1.0}));
    CharPolynomial cp;
    cp.K = 2;
    cp.coefficients = {{1.0}, {}, det};
    return cp;
}

Poly CharPolynomial::base_part(int i, int N) const {
    Poly p = coefficients.at(i);
    if (i == K) {
        if (static_cast<int>(p.size()) <= N) p.resize(N + 1, Complex(0.0, 0.0));
        p[N] += 1.0;
        poly_trim(p);
    }
    return p;
}

std::string CharPolynomial::str() const {
    std::ostringstream os;
    os << "lambda^" << K;
    for (int i = 1; i <= K; ++i) {
        const Poly& p = coefficients[i];
        if (p.empty()) continue;
        os << " + (";
        bool first = true;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] == Complex(0.0, 0.0)) continue;
            if (!first) os << " + ";
            first = false;
            os << p[k];
            if (k > 0) os << "*z^" << k;
        }
        os << ")";
        if (K - i > 0) os << "*lambda^" << (K - i);
        os << " dz^" << i;
    }
    return os.str();
}

Mat2 apply_gauge(const Mat2& g, const Mat2& phi) {
    const Complex det = g.determinant();
    const double scale = g.squaredNorm();
    if (!std::isfinite(std::abs(det)) || std::abs(det) <= 1e-14 * scale) {
        throw SingularGauge("gauge matrix is not invertible");
    }
    return g * phi * g.inverse();
}

Mat2 apply_gauge(const std::function<Mat2(Complex)>& g, const HiggsFieldSpec& spec, Complex z) {
    return apply_gauge(g(z), higgs_eval(spec, z));
}

Complex branch_sqrt(Complex w, int branch) {
    Complex r = std::sqrt(w);
    return (branch % 2 != 0) ? -r : r;
}

Eigen::MatrixXcd model_higgs_field(int K, int N, Complex z, int branch) {
    if (K <= 0) throw DomainError("K must be positive");
    if (z == Complex(0.0, 0.0)) throw DomainError("model field is not defined at z = 0");
    const double pi = std::numbers::pi;
    const double mag = std::pow(std::abs(z), static_cast<double>(N) / K);
    const double ang = (N * std::arg(z) + 2.0 * pi * branch) / K;
    const Complex root = std::polar(mag, ang);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(K, K);
    for (int k = 1; k <= K; ++k) m(k - 1, k - 1) = std::polar(1.0, 2.0 * pi * k / K) * root;
    return m;
}

Mat2 trivializing_gauge(Complex u, Complex z, int branch) {
    const Complex q = z * z * z + u;
    if (q == Complex(0.0, 0.0)) throw DomainError("trivializing gauge undefined at a root of z^3 + u");
    const Complex r = branch_sqrt(q, branch);
    Mat2 g;
    g << 1.0 / r, -1.0, -1.0, -r;
    return -0.5 * g;
}

Mat2 big_to_small_gauge(Complex gamma, Complex omega, Complex z) {
    if (omega == Complex(0.0, 0.0)) throw DomainError("gauge needs omega != 0");
    const Complex i(0.0, 1.0);
    Mat2 g;
    g << gamma / omega, omega + z, 0.0, -gamma / omega;
    return i * g;
}

Mat2 big_to_small_gauge_rescaled(Complex gamma, Complex omega, Complex z) {
    const Complex s = std::sqrt(omega);
    Mat2 d;
    d << s, 0.0, 0.0, 1.0 / s;
    return d * big_to_small_gauge(gamma, omega, z);
}

}  // namespace hml
