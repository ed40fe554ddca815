#include "polydist/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace polydist {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kClusterGap = 1e-8;
constexpr double kPairTolerance = 1e-6;

// Indices [first, last] of singular values clustered with index `target`.
std::pair<Eigen::Index, Eigen::Index> cluster_around(const RealVector& s, Eigen::Index target) {
    const double gap = kClusterGap * s(0);
    Eigen::Index first = target;
    Eigen::Index last = target;
    while (first > 0 && s(first - 1) - s(first) <= gap) {
        --first;
    }
    while (last + 1 < s.size() && s(last) - s(last + 1) <= gap) {
        ++last;
    }
    return {first, last};
}

// |c^* M c| for c = x / ‖x‖, x packed as (re_0, im_0, re_1, im_1, ...).
double quadratic_magnitude(const ComplexMatrix& m, const std::vector<double>& x) {
    const Eigen::Index k = m.rows();
    ComplexVector c(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c(i) = Complex(x[2 * i], x[2 * i + 1]);
    }
    const double norm = c.norm();
    if (norm == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    c /= norm;
    return std::abs(c.dot(m * c));
}

// Unit vector c minimizing |c^* M c|: seeded dense sampling on the complex
// unit sphere, then compass search from the best few samples.
ComplexVector minimize_numerical_range(const ComplexMatrix& m, double& achieved) {
    const Eigen::Index k = m.rows();
    const std::size_t dim = static_cast<std::size_t>(2 * k);
    std::mt19937_64 rng(0x5eed1234ULL);
    std::normal_distribution<double> normal(0.0, 1.0);

    constexpr int kSamples = 4096;
    constexpr std::size_t kStarts = 6;
    std::vector<std::pair<double, std::vector<double>>> pool;
    pool.reserve(kSamples + dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> e(dim, 0.0);
        e[i] = 1.0;
        pool.emplace_back(quadratic_magnitude(m, e), std::move(e));
    }
    for (int s = 0; s < kSamples; ++s) {
        std::vector<double> x(dim);
        for (double& xi : x) {
            xi = normal(rng);
        }
        pool.emplace_back(quadratic_magnitude(m, x), std::move(x));
    }
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(kStarts, pool.size())),
                      pool.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    for (std::size_t start = 0; start < std::min(kStarts, pool.size()); ++start) {
        std::vector<double> x = pool[start].second;
        double norm = 0.0;
        for (double xi : x) {
            norm += xi * xi;
        }
        norm = std::sqrt(norm);
        for (double& xi : x) {
            xi /= norm;
        }
        double value = quadratic_magnitude(m, x);
        double step = 0.25;
        while (step > 1e-15) {
            bool improved = false;
            for (std::size_t i = 0; i < dim; ++i) {
                for (double sign : {1.0, -1.0}) {
                    std::vector<double> trial = x;
                    trial[i] += sign * step;
                    const double v = quadratic_magnitude(m, trial);
                    if (v < value) {
                        value = v;
                        x = std::move(trial);
                        improved = true;
                    }
                }
            }
            if (!improved) {
                step *= 0.5;
            }
        }
        if (value < best_value) {
            best_value = value;
            best_x = x;
        }
    }
    ComplexVector c(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c(i) = Complex(best_x[static_cast<std::size_t>(2 * i)], best_x[static_cast<std::size_t>(2 * i + 1)]);
    }
    c.normalize();
    achieved = best_value;
    return c;
}

// ds/dγ of a simple s_{2n−1}: Re(u^* ∂F/∂γ v) = Re(u2^* P[μ1, μ2] v1).
double slope(const TargetBlocks& blocks, double gamma) {
    const Eigen::Index n = blocks.size();
    const PenultimateSingular s = s_penultimate(build_f(blocks, gamma));
    return std::real(s.left.tail(n).dot(blocks.divided * s.right.head(n)));
}

// Value comparisons pin a smooth maximum only to about sqrt(eps). The
// identities used downstream hold at the exact maximizer, so the golden
// section result is sharpened by bisection on the slope. Kept only if s
// does not drop.
void polish_maximizer(const TargetBlocks& blocks, double& gamma, double& value, double upper) {
    double lo = gamma;
    double hi = gamma;
    double h = 1e-7 * std::max(1.0, gamma);
    bool bracketed = false;
    for (int k = 0; k < 30 && !bracketed; ++k, h *= 4.0) {
        lo = std::max(0.0, gamma - h);
        hi = std::min(upper, gamma + h);
        bracketed = lo < hi && slope(blocks, lo) > 0.0 && slope(blocks, hi) < 0.0;
    }
    if (!bracketed) {
        return;
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * kEps * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(blocks, mid) > 0.0 ? lo : hi) = mid;
    }
    const double g = 0.5 * (lo + hi);
    const double v = s_penultimate_value(blocks, g);
    if (v >= value - 1e-12 * std::max(1.0, value)) {
        gamma = g;
        value = v;
    }
}

}  // namespace

TargetBlocks TargetBlocks::from(const MatrixPolynomial& p, Complex mu1, Complex mu2) {
    require_separated(mu1, mu2);
    return TargetBlocks{mu1, mu2, eval_poly(p, mu1), eval_poly(p, mu2), divided_difference(p, mu1, mu2)};
}

FPencil build_f(const TargetBlocks& blocks, double gamma) {
    if (!std::isfinite(gamma)) {
        throw InvalidInput("build_f: gamma must be finite");
    }
    const Eigen::Index n = blocks.size();
    FPencil f;
    f.matrix = ComplexMatrix::Zero(2 * n, 2 * n);
    f.matrix.topLeftCorner(n, n) = blocks.at_mu1;
    f.matrix.bottomLeftCorner(n, n) = gamma * blocks.divided;
    f.matrix.bottomRightCorner(n, n) = blocks.at_mu2;
    f.gamma = gamma;
    f.mu1 = blocks.mu1;
    f.mu2 = blocks.mu2;
    return f;
}

FPencil build_f(const MatrixPolynomial& p, Complex mu1, Complex mu2, double gamma) {
    return build_f(TargetBlocks::from(p, mu1, mu2), gamma);
}

PenultimateSingular s_penultimate(const FPencil& f) {
    const Eigen::Index dim = f.matrix.rows();
    if (dim < 2) {
        throw InvalidInput("s_penultimate: matrix must be at least 2x2");
    }
    numeric::SvdResult d = numeric::svd(f.matrix);
    const Eigen::Index idx = d.values.size() - 2;
    return {d.values(idx), d.left.col(idx), d.right.col(idx)};
}

double s_penultimate_value(const TargetBlocks& blocks, double gamma) {
    RealVector s = numeric::singular_values(build_f(blocks, gamma).matrix);
    return s(s.size() - 2);
}

double default_gamma_upper(const TargetBlocks& blocks) {
    const double sep = std::abs(blocks.mu1 - blocks.mu2);
    const double norms = 1.0 + numeric::spectral_norm(blocks.at_mu1) + numeric::spectral_norm(blocks.at_mu2);
    return 10.0 * (1.0 + sep) * norms / std::max(1.0, numeric::spectral_norm(blocks.divided));
}

GammaProfile profile_gamma(const TargetBlocks& blocks, const ProfileOptions& options) {
    numeric::MaximizeOptions opts;
    if (options.gamma_max) {
        if (!(*options.gamma_max > 0.0)) {
            throw InvalidInput("gamma_max must be positive");
        }
        opts.upper = *options.gamma_max;
        opts.expand = false;
    } else {
        opts.upper = default_gamma_upper(blocks);
        opts.expand = true;
    }
    opts.grid_points = options.grid_points;

    GammaProfile out;
    const double rank_tol = 2.0 * static_cast<double>(blocks.size()) * kEps;
    out.divided_rank_deficient = numeric::numerical_rank(blocks.divided, rank_tol) < 2;
    if (out.divided_rank_deficient) {
        out.warnings.emplace_back(
            "rank(P[mu1,mu2]) < 2: s_{2n-1} need not decay, maximizer bounded by the search interval");
    }

    auto best = numeric::maximize_scalar([&](double g) { return s_penultimate_value(blocks, g); }, opts);
    out.samples = std::move(best.samples);
    out.gamma_star = best.argmax;
    out.s_star = best.value;
    if (!best.at_boundary) {
        polish_maximizer(blocks, out.gamma_star, out.s_star, best.upper);
    }
    out.at_boundary = best.at_boundary;
    out.gamma_hi = best.upper;
    if (!out.at_boundary && out.gamma_star >= 0.5 * out.gamma_hi) {
        out.warnings.emplace_back("maximizer lies in the upper half of the search interval");
    }
    return out;
}

GammaProfile profile_gamma(const MatrixPolynomial& p, Complex mu1, Complex mu2, const ProfileOptions& options) {
    return profile_gamma(TargetBlocks::from(p, mu1, mu2), options);
}

ComplexMatrix StructuredPair::U() const {
    ComplexMatrix m(u1.size(), 2);
    m << u1, u2;
    return m;
}

ComplexMatrix StructuredPair::V() const {
    ComplexMatrix m(v1.size(), 2);
    m << v1, v2;
    return m;
}

ComplexMatrix StructuredPair::U_hat() const {
    ComplexMatrix m(u1.size(), 2);
    m << u1, u_hat;
    return m;
}

ComplexMatrix StructuredPair::V_hat() const {
    ComplexMatrix m(v1.size(), 2);
    m << v1, v_hat;
    return m;
}

StructuredPair StructuredPair::from_stacked(const ComplexVector& left, const ComplexVector& right, double gamma,
                                            double singular_value, Complex mu1, Complex mu2) {
    const Eigen::Index n = left.size() / 2;
    StructuredPair p;
    p.gamma = gamma;
    p.singular_value = singular_value;
    p.theta = gamma / (mu1 - mu2);
    p.u1 = left.head(n);
    p.u2 = left.tail(n);
    p.v1 = right.head(n);
    p.v2 = right.tail(n);
    p.u_hat = p.u2 - p.theta * p.u1;
    p.v_hat = p.v2 - p.theta * p.v1;
    return p;
}

double PairResiduals::worst() const {
    return std::max({singular, orthogonality, cross_gram, gram, hat_gram});
}

PairResiduals pair_residuals(const StructuredPair& pair, const TargetBlocks& blocks) {
    const FPencil f = build_f(blocks, pair.gamma);
    ComplexVector left(2 * blocks.size());
    ComplexVector right(2 * blocks.size());
    left << pair.u1, pair.u2;
    right << pair.v1, pair.v2;
    PairResiduals r;
    const double s = pair.singular_value;
    r.singular = std::max((f.matrix * right - s * left).norm(), (f.matrix.adjoint() * left - s * right).norm());
    r.orthogonality = std::abs(pair.u2.dot(blocks.divided * pair.v1));
    r.cross_gram = std::abs(pair.u1.dot(pair.u2) - pair.v1.dot(pair.v2));
    const ComplexMatrix U = pair.U(), V = pair.V();
    r.gram = numeric::spectral_norm(U.adjoint() * U - V.adjoint() * V);
    const ComplexMatrix Uh = pair.U_hat(), Vh = pair.V_hat();
    r.hat_gram = numeric::spectral_norm(Uh.adjoint() * Uh - Vh.adjoint() * Vh);
    r.scale = numeric::spectral_norm(f.matrix);
    return r;
}

StructuredPair singular_pair_at(const TargetBlocks& blocks, double gamma) {
    const PenultimateSingular s = s_penultimate(build_f(blocks, gamma));
    return StructuredPair::from_stacked(s.left, s.right, gamma, s.value, blocks.mu1, blocks.mu2);
}

StructuredPair select_singular_pair(const TargetBlocks& blocks, double gamma_star) {
    if (!(gamma_star > 0.0)) {
        throw InvalidInput("select_singular_pair: gamma* must be positive");
    }
    const Eigen::Index n = blocks.size();
    const FPencil f = build_f(blocks, gamma_star);
    const numeric::SvdResult d = numeric::svd(f.matrix);
    const Eigen::Index target = d.values.size() - 2;
    const double s_star = d.values(target);
    if (!(s_star > 0.0)) {
        throw InvalidInput("select_singular_pair: s* must be positive");
    }
    const auto [first, last] = cluster_around(d.values, target);
    const Eigen::Index k = last - first + 1;
    if (k == 1) {
        return StructuredPair::from_stacked(d.left.col(target), d.right.col(target), gamma_star, s_star, blocks.mu1,
                                            blocks.mu2);
    }

    // Pairs of the cluster are (U_k c, V_k c) with ‖c‖ = 1; the target
    // functional is then the quadratic form c^* M c.
    const ComplexMatrix uk = d.left.middleCols(first, k);
    const ComplexMatrix vk = d.right.middleCols(first, k);
    const ComplexMatrix m = uk.bottomRows(n).adjoint() * blocks.divided * vk.topRows(n);
    double achieved = 0.0;
    const ComplexVector c = minimize_numerical_range(m, achieved);
    const double scale = d.values(0);
    if (achieved > kPairTolerance * scale) {
        throw PairSelectionFailure("no singular pair in the clustered subspace satisfies u2^* P[mu1,mu2] v1 = 0 "
                                   "(achieved " +
                                       std::to_string(achieved) + ")",
                                   achieved);
    }
    StructuredPair pair =
        StructuredPair::from_stacked(uk * c, vk * c, gamma_star, s_star, blocks.mu1, blocks.mu2);
    pair.multiplicity = static_cast<int>(k);
    return pair;
}

StructuredPair select_singular_pair(const MatrixPolynomial& p, Complex mu1, Complex mu2, double gamma_star,
                                    double s_star) {
    if (!(s_star > 0.0)) {
        throw InvalidInput("select_singular_pair: s* must be positive");
    }
    return select_singular_pair(TargetBlocks::from(p, mu1, mu2), gamma_star);
}

int rank_vhat(const StructuredPair& pair) {
    const ComplexMatrix vh = pair.V_hat();
    return numeric::numerical_rank(vh, 2.0 * static_cast<double>(vh.rows()) * kEps);
}

}  // namespace polydist
