#include "polydist/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polydist {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAlphaTolerance = 1e-12;
constexpr double kIndependenceTolerance = 1e-8;

struct Construction {
    double s_value = 0.0;
    double beta_low = 0.0;
    double beta_up = 0.0;
    ComplexMatrix delta;
    std::vector<ComplexMatrix> coeffs;
    ComplexVector x1, x2;
};

// Δ, its coefficients and both bounds from a singular pair at γ = pair.gamma.
Construction construct_positive(const TargetBlocks& blocks, const WeightSet& w, const StructuredPair& pair) {
    Construction c;
    c.s_value = pair.singular_value;
    c.beta_low = c.s_value / lower_bound_denominator(w, blocks.mu1, blocks.mu2, pair.gamma);
    const AlphaPair alpha = alpha_coeffs(w, blocks.mu1, blocks.mu2);
    c.delta = build_delta_star(pair, c.s_value, alpha);
    c.coeffs = delta_coefficients(c.delta, w, blocks.mu1, blocks.mu2);
    c.beta_up = beta_up(c.delta, w, blocks.mu1, blocks.mu2);
    c.x1 = pair.v1.normalized();
    c.x2 = pair.v_hat.normalized();
    return c;
}

Construction construct_zero(const TargetBlocks& blocks, const WeightSet& w, double s_at_zero) {
    const ZeroBranchDelta z = build_delta_zero(blocks);
    Construction c;
    c.s_value = s_at_zero;
    c.beta_low = s_at_zero / lower_bound_denominator(w, blocks.mu1, blocks.mu2, 0.0);
    c.delta = z.delta;
    c.coeffs.assign(static_cast<std::size_t>(w.degree()) + 1, ComplexMatrix::Zero(blocks.size(), blocks.size()));
    c.coeffs[0] = z.delta;
    c.beta_up = upper_bound_zero(z.delta, w);
    c.x1 = z.v1.normalized();
    c.x2 = z.v2.normalized();
    return c;
}

// Smallest right singular vector, unit norm.
ComplexVector null_direction(const ComplexMatrix& a) {
    const numeric::SvdResult d = numeric::svd(a);
    return d.right.col(d.right.cols() - 1);
}

Complex int_power(Complex z, int j) {
    Complex out = 1.0;
    for (int k = 0; k < j; ++k) {
        out *= z;
    }
    return out;
}

void adopt(PerturbationResult& r, const MatrixPolynomial& p, Construction c) {
    r.beta_up = c.beta_up;
    r.q = build_q(p, c.coeffs);
    r.delta_coeffs = std::move(c.coeffs);
    r.x1 = std::move(c.x1);
    r.x2 = std::move(c.x2);
}

}  // namespace

Complex phase_power(Complex mu, int j) {
    if (j == 0) {
        return 1.0;
    }
    if (mu == Complex(0.0)) {
        return 0.0;
    }
    return int_power(std::conj(mu) / std::abs(mu), j);
}

double lower_bound_denominator(const WeightSet& w, Complex mu1, Complex mu2, double gamma) {
    if (!(gamma >= 0.0)) {
        throw InvalidInput("lower bound needs gamma >= 0");
    }
    const double a = weight_poly(w, std::abs(mu1));
    const double b = weight_poly(w, std::abs(mu2));
    const double c = gamma * weight_divided_difference_abs(w, mu1, mu2);
    // Largest singular value of the real 2x2 lower-triangular [[a, 0], [c, b]].
    const double fro2 = a * a + b * b + c * c;
    const double det = a * b;
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    return std::sqrt(0.5 * (fro2 + disc));
}

double beta_low(const TargetBlocks& blocks, const WeightSet& w, double gamma) {
    return s_penultimate_value(blocks, gamma) / lower_bound_denominator(w, blocks.mu1, blocks.mu2, gamma);
}

double beta_low(const MatrixPolynomial& p, const WeightSet& w, Complex mu1, Complex mu2, double gamma) {
    check_compatible(p, w);
    return beta_low(TargetBlocks::from(p, mu1, mu2), w, gamma);
}

AlphaPair alpha_coeffs(const WeightSet& w, Complex mu1, Complex mu2) {
    Complex sum1 = 0.0;
    Complex sum2 = 0.0;
    for (int j = 0; j <= w.degree(); ++j) {
        sum1 += phase_power(mu2, j) * int_power(mu1, j) * w[j];
        sum2 += phase_power(mu1, j) * int_power(mu2, j) * w[j];
    }
    return {sum1 / weight_poly(w, std::abs(mu2)), sum2 / weight_poly(w, std::abs(mu1))};
}

ComplexMatrix build_delta_star(const StructuredPair& pair, double s, const AlphaPair& alpha) {
    const Eigen::Index n = pair.u1.size();
    if (s == 0.0) {
        return ComplexMatrix::Zero(n, n);
    }
    if (std::abs(1.0 + alpha.alpha1) < kAlphaTolerance || std::abs(1.0 + alpha.alpha2) < kAlphaTolerance) {
        throw AlphaSingularity("1 + alpha_i vanishes; the gamma* > 0 construction is undefined");
    }
    if (rank_vhat(pair) < 2) {
        throw RankDeficientVhat("V-hat is rank deficient at the chosen gamma");
    }
    ComplexMatrix scaled = pair.U_hat();
    scaled.col(0) *= 2.0 / (1.0 + alpha.alpha1);
    scaled.col(1) *= 2.0 / (1.0 + alpha.alpha2);
    return -s * scaled * numeric::pseudoinverse(pair.V_hat());
}

std::vector<ComplexMatrix> delta_coefficients(const ComplexMatrix& delta, const WeightSet& w, Complex mu1,
                                              Complex mu2) {
    const double inv1 = 1.0 / weight_poly(w, std::abs(mu1));
    const double inv2 = 1.0 / weight_poly(w, std::abs(mu2));
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(w.degree()) + 1);
    for (int j = 0; j <= w.degree(); ++j) {
        const Complex factor = 0.5 * (inv1 * phase_power(mu1, j) + inv2 * phase_power(mu2, j)) * w[j];
        out.push_back(factor * delta);
    }
    return out;
}

double beta_up(const ComplexMatrix& delta, const WeightSet& w, Complex mu1, Complex mu2) {
    const double inv1 = 1.0 / weight_poly(w, std::abs(mu1));
    const double inv2 = 1.0 / weight_poly(w, std::abs(mu2));
    return 0.5 * (inv1 + inv2) * numeric::spectral_norm(delta);
}

MatrixPolynomial build_q(const MatrixPolynomial& p, const std::vector<ComplexMatrix>& delta_coeffs) {
    if (static_cast<int>(delta_coeffs.size()) != p.degree() + 1) {
        throw ShapeMismatch("perturbation has a different number of coefficients than P");
    }
    std::vector<ComplexMatrix> q;
    q.reserve(delta_coeffs.size());
    for (int j = 0; j <= p.degree(); ++j) {
        const auto& d = delta_coeffs[static_cast<std::size_t>(j)];
        if (d.rows() != p.size() || d.cols() != p.size()) {
            throw ShapeMismatch("perturbation coefficient has the wrong size");
        }
        q.push_back(p.coeff(j) + d);
    }
    return MatrixPolynomial::allow_singular_leading(std::move(q));
}

ZeroBranchDelta build_delta_zero(const TargetBlocks& blocks) {
    const numeric::SvdResult d1 = numeric::svd(blocks.at_mu1);
    const numeric::SvdResult d2 = numeric::svd(blocks.at_mu2);
    const Eigen::Index last = blocks.size() - 1;
    ZeroBranchDelta z;
    z.u1 = d1.left.col(last);
    z.v1 = d1.right.col(last);
    z.u2 = d2.left.col(last);
    z.v2 = d2.right.col(last);
    z.sigma1 = d1.values(last);
    z.sigma2 = d2.values(last);
    const Eigen::Index n = blocks.size();
    if (z.sigma1 == 0.0 && z.sigma2 == 0.0) {
        z.delta = ComplexMatrix::Zero(n, n);
        return z;
    }
    const double overlap = std::min(1.0, std::abs(z.v1.dot(z.v2)));
    if (std::sqrt(1.0 - overlap * overlap) <= kIndependenceTolerance) {
        throw DependentEigenvectors("right singular vectors of P(mu1) and P(mu2) are linearly dependent");
    }
    ComplexMatrix u(n, 2), v(n, 2);
    u << z.u1 * z.sigma1, z.u2 * z.sigma2;
    v << z.v1, z.v2;
    z.delta = -u * numeric::pseudoinverse(v);
    return z;
}

ZeroBranchDelta build_delta_zero(const MatrixPolynomial& p, Complex mu1, Complex mu2) {
    return build_delta_zero(TargetBlocks::from(p, mu1, mu2));
}

double upper_bound_zero(const ComplexMatrix& delta0, const WeightSet& w) {
    return numeric::spectral_norm(delta0) / w[0];
}

const char* to_string(Branch b) {
    return b == Branch::GammaPositive ? "gamma_positive" : "gamma_zero";
}

Verification verify(const MatrixPolynomial& q, const std::vector<ComplexMatrix>& delta_coeffs, const WeightSet& w,
                    Complex mu1, Complex mu2, const ComplexVector& x1, const ComplexVector& x2) {
    Verification v;
    const ComplexMatrix q1 = eval_poly(q, mu1);
    const ComplexMatrix q2 = eval_poly(q, mu2);
    v.residual_mu1 = (q1 * x1).norm();
    v.residual_mu2 = (q2 * x2).norm();
    v.scale_mu1 = numeric::spectral_norm(q1);
    v.scale_mu2 = numeric::spectral_norm(q2);
    if (q.leading_nonsingular()) {
        const auto ev = eigenvalues(q);
        v.eigen_distance_mu1 = nearest_distance(ev, mu1);
        v.eigen_distance_mu2 = nearest_distance(ev, mu2);
    } else {
        v.eigen_distance_mu1 = std::numeric_limits<double>::quiet_NaN();
        v.eigen_distance_mu2 = std::numeric_limits<double>::quiet_NaN();
    }
    v.membership_level = 0.0;
    v.attaining_index = 0;
    for (int j = 0; j < static_cast<int>(delta_coeffs.size()); ++j) {
        const double norm = numeric::spectral_norm(delta_coeffs[static_cast<std::size_t>(j)]);
        if (w[j] > 0.0) {
            const double level = norm / w[j];
            if (level > v.membership_level) {
                v.membership_level = level;
                v.attaining_index = j;
            }
        } else {
            v.zero_weight_violation = std::max(v.zero_weight_violation, norm);
        }
    }
    return v;
}

Verification verify(const PerturbationResult& result, const WeightSet& w, Complex mu1, Complex mu2) {
    if (!result.q) {
        throw InvalidInput("verify: result carries no perturbed polynomial");
    }
    return verify(*result.q, result.delta_coeffs, w, mu1, mu2, result.x1, result.x2);
}

BoundPoint bounds_at(const TargetBlocks& blocks, const WeightSet& w, double gamma) {
    const StructuredPair pair = singular_pair_at(blocks, gamma);
    BoundPoint bp;
    bp.gamma = gamma;
    bp.s_value = pair.singular_value;
    bp.beta_low = pair.singular_value / lower_bound_denominator(w, blocks.mu1, blocks.mu2, gamma);
    if (gamma > 0.0) {
        try {
            bp.beta_up = construct_positive(blocks, w, pair).beta_up;
        } catch (const ConstructionFailure&) {
            bp.beta_up.reset();
        }
    }
    return bp;
}

BoundOptimization optimize_bounds(const TargetBlocks& blocks, const WeightSet& w, const ProfileOptions& options) {
    const GammaProfile profile = profile_gamma(blocks, options);
    std::vector<double> grid = numeric::log_grid(profile.gamma_hi, options.grid_points, 1e-6);
    grid.erase(grid.begin());  // γ > 0 only
    // The polished maximizer is a candidate too; golden section alone
    // cannot resolve it to full precision.
    if (profile.gamma_star > 0.0) {
        grid.insert(std::upper_bound(grid.begin(), grid.end(), profile.gamma_star), profile.gamma_star);
    }

    BoundOptimization out;
    std::vector<BoundPoint> points;
    for (double g : grid) {
        BoundPoint bp = bounds_at(blocks, w, g);
        if (bp.beta_up) {
            points.push_back(bp);
        } else {
            out.skipped.push_back(g);
        }
    }
    if (points.empty()) {
        throw RankDeficientVhat("optimize_bounds: no admissible gamma on the search grid");
    }

    // Each objective is maximized; inadmissible γ score -inf.
    auto optimize = [&](auto score) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (score(points[i]) > score(points[best])) {
                best = i;
            }
        }
        const auto it = std::find(grid.begin(), grid.end(), points[best].gamma);
        const auto idx = static_cast<std::size_t>(it - grid.begin());
        const double lo = grid[idx == 0 ? 0 : idx - 1];
        const double hi = grid[std::min(idx + 1, grid.size() - 1)];
        auto f = [&](double g) {
            BoundPoint bp = bounds_at(blocks, w, g);
            return bp.beta_up ? score(bp) : -std::numeric_limits<double>::infinity();
        };
        const numeric::Sample refined = numeric::golden_section_max(f, lo, hi, 1e-10);
        // Ties within rounding keep the grid point, which may be the exact γ*.
        const double incumbent = score(points[best]);
        if (refined.value > incumbent + 1e-13 * std::max(1.0, std::abs(incumbent))) {
            BoundPoint bp = bounds_at(blocks, w, refined.x);
            if (bp.beta_up) {
                return bp;
            }
        }
        return points[best];
    };
    out.min_gap = optimize([](const BoundPoint& bp) { return -(*bp.beta_up - bp.beta_low); });
    out.max_low = optimize([](const BoundPoint& bp) { return bp.beta_low; });
    out.min_up = optimize([](const BoundPoint& bp) { return -*bp.beta_up; });
    return out;
}

BoundOptimization optimize_bounds(const MatrixPolynomial& p, const WeightSet& w, Complex mu1, Complex mu2,
                                  const ProfileOptions& options) {
    check_compatible(p, w);
    return optimize_bounds(TargetBlocks::from(p, mu1, mu2), w, options);
}

PerturbationResult compute_distance(const MatrixPolynomial& p, const WeightSet& w, Complex mu1, Complex mu2,
                                    const DistanceOptions& options) {
    check_compatible(p, w);
    const TargetBlocks blocks = TargetBlocks::from(p, mu1, mu2);
    PerturbationResult r;
    r.profile = profile_gamma(blocks, options.profile);
    r.warnings = r.profile.warnings;
    r.gamma_star = r.profile.gamma_star;
    r.branch = r.profile.at_boundary ? Branch::GammaZero : Branch::GammaPositive;

    const double scale = numeric::spectral_norm(build_f(blocks, r.gamma_star).matrix);
    if (r.profile.s_star <= 64.0 * kEps * std::max(1.0, scale)) {
        // Both targets are already eigenvalues of P.
        r.s_star = r.profile.s_star;
        r.beta_low = 0.0;
        r.beta_up = 0.0;
        r.delta_coeffs.assign(static_cast<std::size_t>(p.degree()) + 1, ComplexMatrix::Zero(p.size(), p.size()));
        r.q = build_q(p, r.delta_coeffs);
        r.x1 = null_direction(blocks.at_mu1);
        r.x2 = null_direction(blocks.at_mu2);
        r.zero_branch_bound = 0.0;
        r.verification = verify(r, w, mu1, mu2);
        return r;
    }

    std::optional<Construction> positive;
    std::optional<Construction> zero;
    if (r.branch == Branch::GammaPositive) {
        double gamma = r.gamma_star;
        try {
            StructuredPair pair;
            if (options.optimize_gamma) {
                ProfileOptions po = options.profile;
                po.gamma_max = r.profile.gamma_hi;
                gamma = optimize_bounds(blocks, w, po).min_gap.gamma;
                pair = singular_pair_at(blocks, gamma);
            } else {
                pair = select_singular_pair(blocks, gamma);
            }
            r.pair_diagnostics = pair_residuals(pair, blocks);
            r.gamma_star = gamma;
            // β_low at the construction γ is reported even if Δ fails.
            r.s_star = pair.singular_value;
            r.beta_low = pair.singular_value / lower_bound_denominator(w, mu1, mu2, gamma);
            positive = construct_positive(blocks, w, pair);
        } catch (const ConstructionFailure& e) {
            r.warnings.emplace_back(std::string("gamma* > 0 construction failed: ") + e.what());
            r.construction_error = e.what();
            if (r.s_star == 0.0) {
                r.s_star = r.profile.s_star;
                r.beta_low = beta_low(blocks, w, r.gamma_star);
            }
        }
    }
    if (r.branch == Branch::GammaZero || !positive || r.gamma_star < options.tiny_gamma) {
        try {
            zero = construct_zero(blocks, w, s_penultimate_value(blocks, 0.0));
            r.zero_branch_bound = zero->beta_up;
        } catch (const ConstructionFailure& e) {
            r.warnings.emplace_back(std::string("gamma* = 0 construction failed: ") + e.what());
            if (!positive) {
                r.construction_error = e.what();
            }
        }
    }

    if (positive && (!zero || positive->beta_up <= zero->beta_up)) {
        r.branch = Branch::GammaPositive;
        r.s_star = positive->s_value;
        r.beta_low = positive->beta_low;
        adopt(r, p, std::move(*positive));
    } else if (zero) {
        if (r.branch == Branch::GammaZero) {
            r.gamma_star = 0.0;
            r.s_star = zero->s_value;
            r.beta_low = zero->beta_low;
        } else {
            // β_low(γ*) stays valid; only the upper bound comes from Δ0.
            r.warnings.emplace_back("upper bound taken from the gamma = 0 construction");
            r.beta_low = std::max(r.beta_low, zero->beta_low);
            r.branch = Branch::GammaZero;
        }
        adopt(r, p, std::move(*zero));
    } else {
        if (r.branch == Branch::GammaZero) {
            r.s_star = r.profile.s_star;
            r.beta_low = beta_low(blocks, w, 0.0);
        }
        return r;
    }
    r.construction_error.reset();
    if (r.q && !r.q->leading_nonsingular()) {
        r.warnings.emplace_back("leading coefficient of Q is numerically singular");
    }
    r.verification = verify(r, w, mu1, mu2);
    return r;
}

}  // namespace polydist
