#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crsegre/reflection.hpp"

namespace crsegre {

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Three-valued verdicts with explicit bounds; inconclusive never collapses
/// to a boolean.
struct Verdict {
    enum Kind { True, False, FalseUpTo, Inconclusive } kind = Inconclusive;
    int bound = 0;  // for FalseUpTo / Inconclusive

    static Verdict yes() { return {True, 0}; }
    static Verdict no() { return {False, 0}; }
    static Verdict false_up_to(int b) { return {FalseUpTo, b}; }
    static Verdict inconclusive(int b) { return {Inconclusive, b}; }
    bool definite_true() const { return kind == True; }
    bool definite_false() const { return kind == False; }
    std::string str() const;
};

struct SolvableResult {
    Verdict verdict;
    int kappa0 = -1;
    /// Witness rows (gamma, l') achieving full rank, in search order.
    std::vector<std::pair<Expo, int>> rows;
};

struct EssentialVariety {
    std::vector<Series> generators;  // polynomials over the t' frame
    std::vector<std::pair<Expo, int>> tags;
    /// The defining identities restricted to the conjugate Segre leaf with the
    /// tangential parameters kept free (frame zeta + t'): vanishing here
    /// encodes the whole derivation family at once, independent of the
    /// derivation bound.
    SeriesVector on_segre_leaf;
    int n_prime = 0;
    std::string dim_at_origin = "unknown";  // "0", ">=1", or "unknown"
};

struct FiniteResult {
    Verdict verdict;
    /// Positive certificate: one nonzero univariate polynomial per coordinate.
    std::vector<Series> univariates;
    /// Negative certificate: a rational direction spanning a line inside the
    /// variety through 0.
    std::vector<GRat> curve_direction;
};

struct NondegResult {
    Verdict verdict;
    std::vector<std::pair<Expo, int>> witness;  // (gamma_j, l'_j) rows
    std::string det_leading;                    // leading term of the witness determinant
};

struct ClassificationReport {
    SolvableResult solvable;
    FiniteResult finite;
    NondegResult nondeg;
    int order_used = 0;
    bool is_manifold = false;  // identity-map report: manifold-level implications apply
    bool audit_ok = false;
};

/// Least kappa for which the stacked origin gradients reach full rank n'.
SolvableResult s_solvable(ReflectionSystem& R, int kappa_max);

EssentialVariety essential_variety(ReflectionSystem& R, int gamma_bound);

/// Zero-dimensionality of the essential variety: iterated-resultant
/// elimination for n' <= 3 (positive certificate), line search through the
/// origin (negative certificate), inconclusive otherwise.
FiniteResult s_finite(const EssentialVariety& V, std::uint64_t seed);

/// Search for n' rows whose t'-Jacobian determinant along the Segre variety
/// is not identically zero. Requires normal source coordinates.
NondegResult s_nondegenerate_map(ReflectionSystem& R, int gamma_bound);

/// Manifold-level variant: det of dTheta_{zeta^beta}/dw on the Segre variety.
NondegResult s_nondegenerate_manifold(const GenericManifold& M, int beta_bound);

struct Bounds {
    int kappa_max = 6;
    int gamma_bound = 4;
    int beta_bound = 4;
    std::uint64_t seed = 1;
};

ClassificationReport classify_map(const FormalMap& h, const Bounds& b);
/// Runs the identity map of M through classify_map and labels the result as
/// a manifold report (finitely nondegenerate / essentially finite /
/// S-nondegenerate at 0).
ClassificationReport manifold_classify(const GenericManifold& M, const Bounds& b);

/// One-way implication audit; inconclusive flags never fail.
bool implication_audit(const ClassificationReport& r);

struct SolvabilityCertificate {
    int kappa0 = 0;
    SeriesVector A;  // over the z-chart frame of the source
};

/// Solve the witness rows for t' and verify the result reproduces h on the
/// source complexification.
SolvabilityCertificate solvability_certificate(ReflectionSystem& R, const SolvableResult& s);

struct WeierstrassCertificate {
    /// P_j(t') = t'_j^N + sum A_{j,k} t'_j^(N-k); polys[j] holds the
    /// coefficient list starting from the leading 1.
    std::vector<std::vector<Series>> polys;  // coefficients over rframe (t' absent)
    std::vector<int> degrees;
};

/// Derive monic polynomials by eliminating the other t' coordinates from the
/// derived-identity system, then verify P_j(t, tau, h_j(t)) == 0 on M.
WeierstrassCertificate weierstrass_certificate(ReflectionSystem& R, int gamma_bound);
/// Verify a user-supplied certificate; throws on a nonzero residual.
void verify_weierstrass(ReflectionSystem& R, const WeierstrassCertificate& cert);

}  // namespace crsegre
