#include "polydist/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polydist/numeric.hpp"

namespace polydist {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool leading_is_nonsingular(const ComplexMatrix& lead) {
    RealVector s = numeric::singular_values(lead);
    const double n = static_cast<double>(lead.rows());
    return s(s.size() - 1) > n * kEps * s(0);
}

void validate_coeffs(const std::vector<ComplexMatrix>& coeffs) {
    if (coeffs.size() < 2) {
        throw InvalidInput("matrix polynomial needs degree >= 1 (at least two coefficients)");
    }
    const Eigen::Index n = coeffs.front().rows();
    if (n == 0) {
        throw InvalidInput("matrix polynomial coefficients must be non-empty");
    }
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j].rows() != n || coeffs[j].cols() != n) {
            throw ShapeMismatch("coefficient A_" + std::to_string(j) + " is not " + std::to_string(n) + "x" +
                                std::to_string(n));
        }
        if (!coeffs[j].allFinite()) {
            throw InvalidInput("coefficient A_" + std::to_string(j) + " has non-finite entries");
        }
    }
}

bool canonical_before(Complex a, Complex b) {
    if (a.real() != b.real()) {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(std::vector<ComplexMatrix> coeffs) : MatrixPolynomial(std::move(coeffs), true) {}

MatrixPolynomial::MatrixPolynomial(std::vector<ComplexMatrix> coeffs, bool strict) : coeffs_(std::move(coeffs)) {
    validate_coeffs(coeffs_);
    leading_nonsingular_ = leading_is_nonsingular(coeffs_.back());
    if (strict && !leading_nonsingular_) {
        throw SingularLeadingCoefficient("leading coefficient A_m is numerically singular");
    }
}

MatrixPolynomial MatrixPolynomial::allow_singular_leading(std::vector<ComplexMatrix> coeffs) {
    return MatrixPolynomial(std::move(coeffs), false);
}

MatrixPolynomial MatrixPolynomial::identity_pencil(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw ShapeMismatch("identity_pencil needs a square matrix");
    }
    return MatrixPolynomial({-a, ComplexMatrix::Identity(a.rows(), a.cols())});
}

WeightSet::WeightSet(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw InvalidInput("weight set is empty");
    }
    for (double wj : weights_) {
        if (!std::isfinite(wj) || wj < 0.0) {
            throw InvalidInput("weights must be finite and nonnegative");
        }
    }
    if (!(weights_.front() > 0.0)) {
        throw InvalidInput("weight omega_0 must be positive");
    }
}

WeightSet WeightSet::coefficient_norms(const MatrixPolynomial& p) {
    std::vector<double> w;
    for (const auto& a : p.coeffs()) {
        w.push_back(numeric::spectral_norm(a));
    }
    return WeightSet(std::move(w));
}

WeightSet WeightSet::ones(int degree) {
    return WeightSet(std::vector<double>(static_cast<std::size_t>(degree) + 1, 1.0));
}

WeightSet WeightSet::constant(double omega0, int degree) {
    std::vector<double> w(static_cast<std::size_t>(degree) + 1, 0.0);
    w[0] = omega0;
    return WeightSet(std::move(w));
}

void check_compatible(const MatrixPolynomial& p, const WeightSet& w) {
    if (w.degree() != p.degree()) {
        throw ShapeMismatch("weight set has " + std::to_string(w.degree() + 1) + " entries, polynomial has " +
                            std::to_string(p.degree() + 1) + " coefficients");
    }
}

bool targets_separated(Complex mu1, Complex mu2) {
    const double scale = std::max({1.0, std::abs(mu1), std::abs(mu2)});
    return std::abs(mu1 - mu2) > 1e-8 * scale;
}

void require_separated(Complex mu1, Complex mu2) {
    require_finite(mu1, "mu1");
    require_finite(mu2, "mu2");
    if (!targets_separated(mu1, mu2)) {
        throw DegenerateTargets("target eigenvalues mu1 and mu2 coincide within tolerance");
    }
}

ComplexMatrix eval_poly(const MatrixPolynomial& p, Complex mu) {
    require_finite(mu, "evaluation point");
    ComplexMatrix acc = p.coeff(p.degree());
    for (int j = p.degree() - 1; j >= 0; --j) {
        acc = acc * mu + p.coeff(j);
    }
    return acc;
}

std::vector<Complex> homogeneous_sums(Complex x, Complex y, int count) {
    std::vector<Complex> h;
    if (count <= 0) {
        return h;
    }
    h.reserve(static_cast<std::size_t>(count));
    h.push_back(1.0);
    Complex xk = 1.0;
    for (int k = 1; k < count; ++k) {
        xk *= x;
        h.push_back(xk + y * h.back());
    }
    return h;
}

ComplexMatrix divided_difference(const MatrixPolynomial& p, Complex mu1, Complex mu2) {
    require_separated(mu1, mu2);
    if (canonical_before(mu2, mu1)) {
        std::swap(mu1, mu2);
    }
    const auto h = homogeneous_sums(mu1, mu2, p.degree());
    ComplexMatrix out = ComplexMatrix::Zero(p.size(), p.size());
    for (int j = 1; j <= p.degree(); ++j) {
        out += p.coeff(j) * h[static_cast<std::size_t>(j - 1)];
    }
    return out;
}

double weight_poly(const WeightSet& w, double r) {
    if (!(r >= 0.0)) {
        throw InvalidInput("weight_poly: argument must be nonnegative");
    }
    double acc = w[w.degree()];
    for (int j = w.degree() - 1; j >= 0; --j) {
        acc = acc * r + w[j];
    }
    return acc;
}

double weight_divided_difference_abs(const WeightSet& w, Complex mu1, Complex mu2) {
    require_separated(mu1, mu2);
    if (canonical_before(mu2, mu1)) {
        std::swap(mu1, mu2);
    }
    const auto h = homogeneous_sums(mu1, mu2, w.degree());
    double out = 0.0;
    for (int j = 1; j <= w.degree(); ++j) {
        out += w[j] * std::abs(h[static_cast<std::size_t>(j - 1)]);
    }
    return out;
}

ComplexMatrix companion_matrix(const MatrixPolynomial& p) {
    if (!p.leading_nonsingular()) {
        throw SingularLeadingCoefficient("companion linearization needs a nonsingular leading coefficient");
    }
    const Eigen::Index n = p.size();
    const int m = p.degree();
    Eigen::PartialPivLU<ComplexMatrix> lead(p.coeff(m));
    ComplexMatrix c = ComplexMatrix::Zero(n * m, n * m);
    // First block row: -A_m^{-1} [A_{m-1} ... A_0]; identities below the diagonal.
    for (int k = 0; k < m; ++k) {
        c.block(0, k * n, n, n) = -lead.solve(p.coeff(m - 1 - k));
    }
    for (int k = 1; k < m; ++k) {
        c.block(k * n, (k - 1) * n, n, n).setIdentity();
    }
    return c;
}

std::vector<Complex> eigenvalues(const MatrixPolynomial& p) {
    ComplexMatrix c = companion_matrix(p);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(c, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("companion eigenvalue iteration did not converge");
    }
    const ComplexVector& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double nearest_distance(const std::vector<Complex>& values, Complex mu) {
    double best = std::numeric_limits<double>::infinity();
    for (Complex z : values) {
        best = std::min(best, std::abs(z - mu));
    }
    return best;
}

}  // namespace polydist
