#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace polydist {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Base class for every failure raised by the library. The CLI maps the
// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid input data (non-finite entries, wrong shapes, bad weights).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// mu1 and mu2 coincide within the separation tolerance.
class DegenerateTargets : public Error {
public:
    using Error::Error;
};

class SingularLeadingCoefficient : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

// Construction failures: the requested perturbation cannot be built.
class ConstructionFailure : public Error {
public:
    using Error::Error;
};

class PairSelectionFailure : public ConstructionFailure {
public:
    PairSelectionFailure(const std::string& what, double achieved)
        : ConstructionFailure(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class RankDeficientVhat : public ConstructionFailure {
public:
    using ConstructionFailure::ConstructionFailure;
};

class AlphaSingularity : public ConstructionFailure {
public:
    using ConstructionFailure::ConstructionFailure;
};

class DependentEigenvectors : public ConstructionFailure {
public:
    using ConstructionFailure::ConstructionFailure;
};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline Complex require_finite(Complex z, const char* what) {
    if (!is_finite(z)) {
        throw InvalidInput(std::string(what) + " must be finite");
    }
    return z;
}

}  // namespace polydist
