#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polydist/matpoly.hpp"
#include "polydist/numeric.hpp"

namespace polydist {

/// P(μ1), P(μ2) and P[μ1, μ2] for a fixed target pair. Every F-pencil for
/// these targets is assembled from these three blocks.
struct TargetBlocks {
    Complex mu1;
    Complex mu2;
    ComplexMatrix at_mu1;
    ComplexMatrix at_mu2;
    ComplexMatrix divided;

    static TargetBlocks from(const MatrixPolynomial& p, Complex mu1, Complex mu2);

    Eigen::Index size() const { return at_mu1.rows(); }
};

/// F[P(μ1, μ2); γ] = [[P(μ1), 0], [γ P[μ1, μ2], P(μ2)]] (2n × 2n).
struct FPencil {
    ComplexMatrix matrix;
    double gamma = 0.0;
    Complex mu1;
    Complex mu2;

    Eigen::Index block_size() const { return matrix.rows() / 2; }
};

FPencil build_f(const MatrixPolynomial& p, Complex mu1, Complex mu2, double gamma);
FPencil build_f(const TargetBlocks& blocks, double gamma);

struct PenultimateSingular {
    double value = 0.0;
    ComplexVector left;
    ComplexVector right;
};

/// s_{2n−1}(F) with one associated singular pair.
PenultimateSingular s_penultimate(const FPencil& f);

// Value only; the hot path of the γ profile.
double s_penultimate_value(const TargetBlocks& blocks, double gamma);

struct ProfileOptions {
    // Search interval [0, gamma_max]; when absent, the default heuristic is
    // used and expanded while the maximum sits on the right end.
    std::optional<double> gamma_max;
    int grid_points = 200;
};

struct GammaProfile {
    std::vector<numeric::Sample> samples;
    double gamma_star = 0.0;
    double s_star = 0.0;
    bool at_boundary = false;
    double gamma_hi = 0.0;
    // rank(P[μ1, μ2]) < 2: a finite maximizer is no longer guaranteed.
    bool divided_rank_deficient = false;
    std::vector<std::string> warnings;
};

/// Default right end of the γ search interval:
/// 10 (1 + |μ1 − μ2|)(1 + ‖P(μ1)‖ + ‖P(μ2)‖) / max(1, ‖P[μ1, μ2]‖).
double default_gamma_upper(const TargetBlocks& blocks);

GammaProfile profile_gamma(const MatrixPolynomial& p, Complex mu1, Complex mu2, const ProfileOptions& options = {});
GammaProfile profile_gamma(const TargetBlocks& blocks, const ProfileOptions& options = {});

/// Left/right singular vectors of s_{2n−1} at γ, split into n-blocks, plus
/// the hatted vectors û = u2 − θ u1, v̂ = v2 − θ v1 with θ = γ / (μ1 − μ2).
struct StructuredPair {
    double gamma = 0.0;
    double singular_value = 0.0;
    Complex theta;
    ComplexVector u1, u2, v1, v2;
    ComplexVector u_hat, v_hat;
    // Size of the numerical singular-value cluster the pair was picked from.
    int multiplicity = 1;

    ComplexMatrix U() const;
    ComplexMatrix V() const;
    ComplexMatrix U_hat() const;
    ComplexMatrix V_hat() const;

    static StructuredPair from_stacked(const ComplexVector& left, const ComplexVector& right, double gamma,
                                       double singular_value, Complex mu1, Complex mu2);
};

/// Residuals of the structural identities a pair at the maximizer satisfies.
struct PairResiduals {
    double singular = 0.0;       // max(‖F v − s u‖, ‖F^* u − s v‖)
    double orthogonality = 0.0;  // |u2^* P[μ1,μ2] v1|
    double cross_gram = 0.0;     // |u2^* u1 − v2^* v1|
    double gram = 0.0;           // ‖U^*U − V^*V‖
    double hat_gram = 0.0;       // ‖Û^*Û − V̂^*V̂‖
    double scale = 0.0;          // s_1(F)

    double worst() const;
};

PairResiduals pair_residuals(const StructuredPair& pair, const TargetBlocks& blocks);

/// Picks the singular pair of s* at γ* > 0 that satisfies
/// u2^* P[μ1, μ2] v1 = 0. A numerically simple s* has one pair (up to
/// phase). For a cluster of k ≥ 2 singular values within 1e−8·s_1 the
/// pair is sought in the k-dimensional singular subspace; failure to reach
/// 1e−6·s_1 raises PairSelectionFailure with the achieved value.
StructuredPair select_singular_pair(const MatrixPolynomial& p, Complex mu1, Complex mu2, double gamma_star,
                                    double s_star);
StructuredPair select_singular_pair(const TargetBlocks& blocks, double gamma_star);

/// The backend's singular pair of s_{2n−1} at an arbitrary γ, no search.
StructuredPair singular_pair_at(const TargetBlocks& blocks, double gamma);

/// Numerical rank of V̂ (singular values above 2·n·eps·s_1(V̂)).
int rank_vhat(const StructuredPair& pair);

}  // namespace polydist
