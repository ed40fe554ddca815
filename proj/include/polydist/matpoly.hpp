#pragma once

#include <vector>

#include "polydist/types.hpp"

namespace polydist {

/// Square matrix polynomial P(λ) = Σ_j A_j λ^j of degree m ≥ 1.
///
/// The default constructor path rejects a numerically singular leading
/// coefficient: s_n(A_m) must exceed n·eps·s_1(A_m). Perturbed polynomials
/// whose leading coefficient may have become singular are built through
/// `allow_singular_leading` and can be queried with `leading_nonsingular()`.
class MatrixPolynomial {
public:
    explicit MatrixPolynomial(std::vector<ComplexMatrix> coeffs);

    static MatrixPolynomial allow_singular_leading(std::vector<ComplexMatrix> coeffs);

    // A(1) λ + A(0) with A(1) = identity: the pencil Iλ − a.
    static MatrixPolynomial identity_pencil(const ComplexMatrix& a);

    Eigen::Index size() const { return coeffs_.front().rows(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const ComplexMatrix& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }
    const std::vector<ComplexMatrix>& coeffs() const { return coeffs_; }
    bool leading_nonsingular() const { return leading_nonsingular_; }

private:
    MatrixPolynomial(std::vector<ComplexMatrix> coeffs, bool strict);

    std::vector<ComplexMatrix> coeffs_;
    bool leading_nonsingular_ = false;
};

/// Nonnegative weights ω_0..ω_m with ω_0 > 0.
class WeightSet {
public:
    explicit WeightSet(std::vector<double> weights);

    // ω_j = ‖A_j‖₂.
    static WeightSet coefficient_norms(const MatrixPolynomial& p);
    static WeightSet ones(int degree);
    // {ω_0, 0, ..., 0}.
    static WeightSet constant(double omega0, int degree);

    int degree() const { return static_cast<int>(weights_.size()) - 1; }
    double operator[](int j) const { return weights_.at(static_cast<std::size_t>(j)); }
    const std::vector<double>& values() const { return weights_; }

private:
    std::vector<double> weights_;
};

// Throws ShapeMismatch unless w has one weight per coefficient of p.
void check_compatible(const MatrixPolynomial& p, const WeightSet& w);

// |mu1 - mu2| > 1e-8 * max(1, |mu1|, |mu2|).
bool targets_separated(Complex mu1, Complex mu2);
void require_separated(Complex mu1, Complex mu2);

/// Σ_j A_j μ^j by Horner's rule.
ComplexMatrix eval_poly(const MatrixPolynomial& p, Complex mu);

/// P[μ1, μ2] = (P(μ1) − P(μ2)) / (μ1 − μ2), evaluated without the
/// subtraction as Σ_j A_j Σ_{a+b=j−1} μ1^a μ2^b. The arguments are put in a
/// canonical order first, so swapping them gives bit-identical output.
ComplexMatrix divided_difference(const MatrixPolynomial& p, Complex mu1, Complex mu2);

// Complete homogeneous sums h_k = Σ_{a+b=k} x^a y^b for k = 0..count-1.
std::vector<Complex> homogeneous_sums(Complex x, Complex y, int count);

/// w(r) = Σ_j ω_j r^j for r ≥ 0.
double weight_poly(const WeightSet& w, double r);

/// |w[μ1, μ2]| := Σ_{j≥1} ω_j |μ1^j − μ2^j| / |μ1 − μ2|.
double weight_divided_difference_abs(const WeightSet& w, Complex mu1, Complex mu2);

/// The mn finite eigenvalues, from the first companion form of the monic
/// polynomial A_m^{-1} P(λ). Unordered.
std::vector<Complex> eigenvalues(const MatrixPolynomial& p);

// First companion matrix of A_m^{-1} P(λ) (mn × mn).
ComplexMatrix companion_matrix(const MatrixPolynomial& p);

// Distance from mu to the nearest element of `values` (infinity if empty).
double nearest_distance(const std::vector<Complex>& values, Complex mu);

}  // namespace polydist
