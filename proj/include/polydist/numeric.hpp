#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "polydist/types.hpp"

namespace polydist::numeric {

/// Full singular value decomposition A = U diag(s) V^*.
///
/// Singular values are descending. Column i of `left` and `right` is the
/// singular pair belonging to `values[i]`. Both bases are complete (full U
/// and V), so trailing columns span the null spaces.
struct SvdResult {
    RealVector values;
    ComplexMatrix left;
    ComplexMatrix right;

    double largest() const { return values.size() ? values(0) : 0.0; }
    double smallest() const { return values.size() ? values(values.size() - 1) : 0.0; }
};

SvdResult svd(const ComplexMatrix& a);

// Singular values only, descending.
RealVector singular_values(const ComplexMatrix& a);

double spectral_norm(const ComplexMatrix& a);

/// Moore-Penrose pseudoinverse by SVD truncation. Singular values at or
/// below `rank_tol * s_1` are dropped; the default tolerance is
/// max(rows, cols) * machine epsilon.
ComplexMatrix pseudoinverse(const ComplexMatrix& a, std::optional<double> rank_tol = std::nullopt);

/// Number of singular values strictly above `rel_tol * s_1`. Zero for the
/// zero matrix.
int numerical_rank(const ComplexMatrix& a, double rel_tol);

struct Sample {
    double x;
    double value;
};

struct MaximizeOptions {
    // Right end of the search interval; must be positive.
    double upper = 10.0;
    // Double `upper` while the grid maximum sits on it (at most 40 times).
    bool expand = false;
    // Log-spaced points in [upper * log_span, upper]; x = 0 is always added.
    int grid_points = 200;
    double log_span = 1e-6;
    // Golden-section stop: |interval| <= rel_tol * max(1, x).
    double rel_tol = 1e-10;
};

struct BracketedMax {
    double argmax = 0.0;
    double value = 0.0;
    bool at_boundary = false;
    // Upper end actually used after any expansion.
    double upper = 0.0;
    // Grid samples in ascending x, followed by nothing else.
    std::vector<Sample> samples;
};

/// Maximizes f over [0, upper]: dense grid, then golden-section refinement
/// inside the bracket around the best sample. Ties go to the smaller x.
BracketedMax maximize_scalar(const std::function<double(double)>& f, const MaximizeOptions& options);

/// Golden-section search for a maximum of f on [lo, hi].
Sample golden_section_max(const std::function<double(double)>& f, double lo, double hi, double rel_tol);

/// Grid used by maximize_scalar: 0 followed by `points` log-spaced values.
std::vector<double> log_grid(double upper, int points, double log_span);

}  // namespace polydist::numeric
