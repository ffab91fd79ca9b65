#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hml/rational.hpp"

namespace hml {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
// Ascending coefficients: p[k] multiplies z^k.
using Poly = std::vector<Complex>;

struct CyclicPartition {
    std::vector<int> parts;
    int n_total = 0;

    int k() const { return static_cast<int>(parts.size()); }
    std::string str() const;
    friend bool operator==(const CyclicPartition&, const CyclicPartition&) = default;

    // Lexicographically greatest rotation of `parts`.
    static CyclicPartition canonical(std::vector<int> parts);
};

struct WeightVector {
    std::vector<Rational> alphas;
    int K = 0;
    int N = 0;
    std::string str() const;
};

struct HiggsFieldSpec {
    enum class Stratum { Small, Big };

    Stratum stratum = Stratum::Small;
    Complex u{};
    Complex gamma{};
    Complex omega{};

    static HiggsFieldSpec small(Complex u);
    static HiggsFieldSpec big(Complex gamma, Complex omega);

    // u for Small, gamma^2 - omega^3 for Big.
    Complex fiber_invariant() const;
};

// Coefficients of lambda^{K-i} dz^i for i = 0..K; coefficients[0] == {1}.
struct CharPolynomial {
    int K = 0;
    std::vector<Poly> coefficients;

    // P_i with the model term of lambda^K - z^N removed (only P_K carries one).
    Poly base_part(int i, int N) const;
    std::string str() const;
};

struct HitchinBase {
    // Index 0 is i = 2. Negative means the coefficient is absent.
    std::vector<int> max_degree;
    int dimension = 0;
};

std::vector<CyclicPartition> enumerate_cyclic_partitions(int K, int N);
WeightVector partition_to_weights(const CyclicPartition& b);
CyclicPartition weights_to_partition(const WeightVector& w);
Rational parabolic_degree(const WeightVector& w);
HitchinBase hitchin_base_dimension(int K, int N);

Mat2 higgs_eval(const HiggsFieldSpec& spec, Complex z);
CharPolynomial char_poly(const HiggsFieldSpec& spec);

// Polynomial entries of the Higgs field: [[a, b], [c, -a]].
struct HiggsPolynomials {
    Poly a, b, c;
};
HiggsPolynomials higgs_polynomials(const HiggsFieldSpec& spec);

Mat2 apply_gauge(const Mat2& g, const Mat2& phi);
Mat2 apply_gauge(const std::function<Mat2(Complex)>& g, const HiggsFieldSpec& spec, Complex z);

// Principal square root; odd branch flips the sign.
Complex branch_sqrt(Complex w, int branch);

Eigen::MatrixXcd model_higgs_field(int K, int N, Complex z, int branch);
Mat2 trivializing_gauge(Complex u, Complex z, int branch);

// i [[gamma/omega, omega + z], [0, -gamma/omega]] exactly as printed.
Mat2 big_to_small_gauge(Complex gamma, Complex omega, Complex z);
// The same gauge followed by diag(omega^{1/2}, omega^{-1/2}).
Mat2 big_to_small_gauge_rescaled(Complex gamma, Complex omega, Complex z);

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Complex poly_eval(const Poly& p, Complex z);
void poly_trim(Poly& p);

}  // namespace hml
