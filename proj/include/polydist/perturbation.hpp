#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polydist/distance.hpp"

namespace polydist {

struct AlphaPair {
    Complex alpha1;
    Complex alpha2;
};

/// (conj(μ)/|μ|)^j, with the convention 1 for j = 0 and 0 for j ≥ 1 when
/// μ = 0 (the limit of the full terms as μ → 0).
Complex phase_power(Complex mu, int j);

/// Denominator of the lower bound: spectral norm of
/// [[w(|μ1|), 0], [γ |w[μ1, μ2]|, w(|μ2|)]].
double lower_bound_denominator(const WeightSet& w, Complex mu1, Complex mu2, double gamma);

/// β_low(γ) = s_{2n−1}(F[P; γ]) / lower_bound_denominator. γ = 0 is the
/// continuous limit.
double beta_low(const MatrixPolynomial& p, const WeightSet& w, Complex mu1, Complex mu2, double gamma);
double beta_low(const TargetBlocks& blocks, const WeightSet& w, double gamma);

AlphaPair alpha_coeffs(const WeightSet& w, Complex mu1, Complex mu2);

/// Δ = −s Û diag(2/(1+α1), 2/(1+α2)) V̂^†. Zero when s = 0.
ComplexMatrix build_delta_star(const StructuredPair& pair, double s, const AlphaPair& alpha);

/// Δ_j = ½ (phase(μ1)^j / w(|μ1|) + phase(μ2)^j / w(|μ2|)) ω_j Δ.
std::vector<ComplexMatrix> delta_coefficients(const ComplexMatrix& delta, const WeightSet& w, Complex mu1,
                                              Complex mu2);

/// β_up = ½ (1/w(|μ1|) + 1/w(|μ2|)) ‖Δ‖.
double beta_up(const ComplexMatrix& delta, const WeightSet& w, Complex mu1, Complex mu2);

/// Q = P + Δ coefficient-wise. The leading coefficient of Q may be singular
/// (check `leading_nonsingular()` on the result).
MatrixPolynomial build_q(const MatrixPolynomial& p, const std::vector<ComplexMatrix>& delta_coeffs);

struct ZeroBranchDelta {
    ComplexMatrix delta;
    ComplexVector u1, u2, v1, v2;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

/// Δ0 = −[u1 u2] diag(σ1, σ2) [v1 v2]^† from the smallest singular triplets
/// of P(μ1) and P(μ2). Throws DependentEigenvectors when v1 and v2 are
/// parallel (sine of their angle ≤ 1e−8) unless both σ vanish.
ZeroBranchDelta build_delta_zero(const MatrixPolynomial& p, Complex mu1, Complex mu2);
ZeroBranchDelta build_delta_zero(const TargetBlocks& blocks);

double upper_bound_zero(const ComplexMatrix& delta0, const WeightSet& w);

enum class Branch { GammaPositive, GammaZero };

const char* to_string(Branch b);

struct Verification {
    double residual_mu1 = 0.0;
    double residual_mu2 = 0.0;
    double scale_mu1 = 0.0;  // ‖Q(μ1)‖
    double scale_mu2 = 0.0;  // ‖Q(μ2)‖
    // Distance from μi to the nearest companion eigenvalue of Q; NaN when
    // the leading coefficient of Q is singular.
    double eigen_distance_mu1 = 0.0;
    double eigen_distance_mu2 = 0.0;
    // max_j ‖Δ_j‖/ω_j over ω_j > 0 and the index attaining it.
    double membership_level = 0.0;
    int attaining_index = 0;
    // max ‖Δ_j‖ over ω_j = 0 (must be 0).
    double zero_weight_violation = 0.0;
};

struct PerturbationResult {
    Branch branch = Branch::GammaPositive;
    double gamma_star = 0.0;  // γ used for the bounds and the construction
    double s_star = 0.0;      // s_{2n−1}(F) at gamma_star
    double beta_low = 0.0;
    std::optional<double> beta_up;
    std::vector<ComplexMatrix> delta_coeffs;
    std::optional<MatrixPolynomial> q;
    // Unit eigenvectors of Q at μ1 and μ2 (v1 and v̂, or v1 and v2).
    ComplexVector x1, x2;
    Verification verification;
    std::optional<PairResiduals> pair_diagnostics;
    std::optional<double> zero_branch_bound;  // ‖Δ0‖/ω0 when computed
    GammaProfile profile;
    std::vector<std::string> warnings;
    // Set when the construction could not be completed; β_low stays valid.
    std::optional<std::string> construction_error;
};

/// Residuals, eigenvalue insertion and ∂B membership of a constructed Q.
Verification verify(const MatrixPolynomial& q, const std::vector<ComplexMatrix>& delta_coeffs,
                    const WeightSet& w, Complex mu1, Complex mu2, const ComplexVector& x1,
                    const ComplexVector& x2);
Verification verify(const PerturbationResult& result, const WeightSet& w, Complex mu1, Complex mu2);

struct DistanceOptions {
    ProfileOptions profile;
    // Build Q at the γ minimizing β_up − β_low instead of γ*.
    bool optimize_gamma = false;
    // γ* below this is treated as "tiny": both constructions are attempted.
    double tiny_gamma = 1e-6;
};

/// Bounds [β_low, β_up] on the distance from P to polynomials having μ1 and
/// μ2 as eigenvalues, and the perturbation attaining β_up.
PerturbationResult compute_distance(const MatrixPolynomial& p, const WeightSet& w, Complex mu1, Complex mu2,
                                    const DistanceOptions& options = {});

/// Bounds and construction at one fixed γ > 0 using the backend pair.
struct BoundPoint {
    double gamma = 0.0;
    double s_value = 0.0;
    double beta_low = 0.0;
    std::optional<double> beta_up;  // empty when V̂ is rank deficient or 1+α_i ≈ 0
};

BoundPoint bounds_at(const TargetBlocks& blocks, const WeightSet& w, double gamma);

struct BoundOptimization {
    BoundPoint min_gap;
    BoundPoint max_low;
    BoundPoint min_up;
    std::vector<double> skipped;  // grid γ without an admissible construction
};

/// Minimizes β_up − β_low, maximizes β_low and minimizes β_up over γ > 0.
BoundOptimization optimize_bounds(const MatrixPolynomial& p, const WeightSet& w, Complex mu1, Complex mu2,
                                  const ProfileOptions& options = {});
BoundOptimization optimize_bounds(const TargetBlocks& blocks, const WeightSet& w, const ProfileOptions& options = {});

}  // namespace polydist
