#pragma once

#include <algorithm>
#include <initializer_list>
#include <random>
#include <vector>

#include "polydist/perturbation.hpp"

namespace testing_support {

using polydist::Complex;
using polydist::ComplexMatrix;
using polydist::ComplexVector;
using polydist::MatrixPolynomial;

inline ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    ComplexMatrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) {
            m(i, j++) = x;
        }
        ++i;
    }
    return m;
}

inline MatrixPolynomial example1() {
    return MatrixPolynomial({real_matrix({{-1, -3}, {0, 0}}), real_matrix({{-2, -4}, {1, -1}}),
                             real_matrix({{-5, 10}, {-4, 5}})});
}

inline MatrixPolynomial example2() {
    return MatrixPolynomial({real_matrix({{9, 7, 6}, {2, 7, -4}, {-2, 6, 5}}),
                             real_matrix({{6, -4, 0}, {1, -5, 5}, {1, -1, 10}}),
                             real_matrix({{3, 0, 1}, {8, -1, 0}, {4, 2, 3}})});
}

inline const Complex kEx1Mu1{1.0, 0.0};
inline const Complex kEx1Mu2{2.0, 1.0};
inline const Complex kEx2Mu1{5.0, 0.0};
inline const Complex kEx2Mu2{-1.0, 0.0};

// Complex entries with real and imaginary parts uniform in [lo, hi].
inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double lo = -5.0,
                                   double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = Complex(u(rng), u(rng));
        }
    }
    return m;
}

inline ComplexMatrix random_real_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                        double lo = -5.0, double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

inline MatrixPolynomial random_poly(std::mt19937_64& rng, int n, int m, double lo = -5.0, double hi = 5.0) {
    std::vector<ComplexMatrix> c;
    for (int j = 0; j <= m; ++j) {
        c.push_back(random_matrix(rng, n, n, lo, hi));
    }
    return MatrixPolynomial(std::move(c));
}

inline Complex random_target(std::mt19937_64& rng, double radius = 3.0) {
    std::uniform_real_distribution<double> u(-radius, radius);
    Complex z;
    do {
        z = Complex(u(rng), u(rng));
    } while (std::abs(z) < 0.1);
    return z;
}

// Two well separated nonzero targets.
inline std::pair<Complex, Complex> random_targets(std::mt19937_64& rng, double radius = 3.0) {
    Complex a = random_target(rng, radius);
    Complex b;
    do {
        b = random_target(rng, radius);
    } while (std::abs(a - b) < 0.5);
    return {a, b};
}

inline ComplexVector random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = Complex(g(rng), g(rng));
    }
    return v.normalized();
}

// Power sum Σ A_j μ^j, independent of Horner.
inline ComplexMatrix eval_naive(const MatrixPolynomial& p, Complex mu) {
    ComplexMatrix out = ComplexMatrix::Zero(p.size(), p.size());
    Complex power = 1.0;
    for (int j = 0; j <= p.degree(); ++j) {
        out += p.coeff(j) * power;
        power *= mu;
    }
    return out;
}

inline double spectral(const ComplexMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
