#include "polydist/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polydist::numeric {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxDoublings = 40;

bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

}  // namespace

SvdResult svd(const ComplexMatrix& a) {
    if (!all_finite(a)) {
        throw InvalidInput("svd: matrix has non-finite entries");
    }
    if (a.size() == 0) {
        return SvdResult{RealVector(0), ComplexMatrix::Identity(a.rows(), a.rows()),
                         ComplexMatrix::Identity(a.cols(), a.cols())};
    }
    Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out{solver.singularValues(), solver.matrixU(), solver.matrixV()};
    if (!out.values.allFinite() || !out.left.allFinite() || !out.right.allFinite()) {
        throw ConvergenceFailure("svd: backend returned non-finite factors");
    }
    return out;
}

RealVector singular_values(const ComplexMatrix& a) {
    if (!all_finite(a)) {
        throw InvalidInput("svd: matrix has non-finite entries");
    }
    if (a.size() == 0) {
        return RealVector(0);
    }
    Eigen::JacobiSVD<ComplexMatrix> solver(a);
    RealVector s = solver.singularValues();
    if (!s.allFinite()) {
        throw ConvergenceFailure("svd: backend returned non-finite singular values");
    }
    return s;
}

double spectral_norm(const ComplexMatrix& a) {
    RealVector s = singular_values(a);
    return s.size() ? s(0) : 0.0;
}

ComplexMatrix pseudoinverse(const ComplexMatrix& a, std::optional<double> rank_tol) {
    const double tol = rank_tol.value_or(static_cast<double>(std::max(a.rows(), a.cols())) * kEps);
    SvdResult f = svd(a);
    ComplexMatrix out = ComplexMatrix::Zero(a.cols(), a.rows());
    const double cutoff = tol * f.largest();
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        const double s = f.values(i);
        if (s > cutoff && s > 0.0) {
            out.noalias() += (f.right.col(i) / s) * f.left.col(i).adjoint();
        }
    }
    return out;
}

int numerical_rank(const ComplexMatrix& a, double rel_tol) {
    RealVector s = singular_values(a);
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    const double cutoff = rel_tol * s(0);
    return static_cast<int>(std::count_if(s.begin(), s.end(), [cutoff](double v) { return v > cutoff; }));
}

std::vector<double> log_grid(double upper, int points, double log_span) {
    if (!(upper > 0.0) || points < 1 || !(log_span > 0.0) || log_span >= 1.0) {
        throw InvalidInput("log_grid: need upper > 0, points >= 1, 0 < log_span < 1");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points) + 1);
    grid.push_back(0.0);
    if (points == 1) {
        grid.push_back(upper);
        return grid;
    }
    const double lo = std::log(upper * log_span);
    const double hi = std::log(upper);
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        grid.push_back(i == points - 1 ? upper : std::exp(lo + t * (hi - lo)));
    }
    return grid;
}

Sample golden_section_max(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    // 200 iterations shrink any double interval below one ulp.
    for (int iter = 0; iter < 200; ++iter) {
        if (b - a <= rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) {
            break;
        }
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? Sample{c, fc} : Sample{d, fd};
}

BracketedMax maximize_scalar(const std::function<double(double)>& f, const MaximizeOptions& options) {
    if (!(options.upper > 0.0) || !std::isfinite(options.upper)) {
        throw InvalidInput("maximize_scalar: upper end must be positive and finite");
    }
    BracketedMax out;
    double upper = options.upper;
    std::vector<double> grid;
    std::vector<double> values;
    std::size_t best = 0;
    for (int doublings = 0;; ++doublings) {
        grid = log_grid(upper, options.grid_points, options.log_span);
        values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            values[i] = f(grid[i]);
        }
        best = 0;
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i] > values[best]) {
                best = i;
            }
        }
        if (options.expand && best + 1 == grid.size() && doublings < kMaxDoublings) {
            upper *= 2.0;
            continue;
        }
        break;
    }
    out.upper = upper;
    out.samples.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.samples.push_back({grid[i], values[i]});
    }

    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    Sample refined = golden_section_max(f, lo, hi, options.rel_tol);
    if (refined.value > values[best] || (refined.value == values[best] && refined.x < grid[best])) {
        out.argmax = refined.x;
        out.value = refined.value;
    } else {
        out.argmax = grid[best];
        out.value = values[best];
    }

    const double f0 = values.front();
    if (out.argmax <= 1e-12 || f0 >= out.value - 1e-12 * std::abs(f0)) {
        out.argmax = 0.0;
        out.value = f0;
        out.at_boundary = true;
    }
    return out;
}

}  // namespace polydist::numeric
