#pragma once

#include <map>
#include <optional>
#include <tuple>

#include "crsegre/classify.hpp"
#include "crsegre/segre.hpp"

namespace crsegre {

/// A finite family of identities X'_lambda(t, tau, t', jets) that vanish on
/// the complexification with t' := h(t), together with witness rows whose
/// Segre-variety determinant survives. Series live over the owning
/// ReflectionSystem's rframe.
struct FundamentalSystem {
    SeriesVector X;
    std::vector<std::pair<Expo, int>> witness_rows;  // provenance tags
    int kappa0 = 0;
};

/// Package the S-nondegeneracy witness rows and re-verify both the vanishing
/// identity and the determinant condition.
FundamentalSystem default_fundamental_system(ReflectionSystem& R, const NondegResult& witness);

/// Substitute the length-k chain (and its transversal-flow prefix) into each
/// identity; the returned residuals must all be zero for a consistent map.
SeriesVector verify_on_chain(const FundamentalSystem& sys, ReflectionSystem& R, int k);

/// Frame jets of the complexified map along a chain:
/// (d_w^gamma d_xi^delta h_j) o Gamma for the unbarred half and
/// (d_zeta^gamma d_z^delta hbar_j) o Gamma for the barred half.
struct ChainJetTable {
    int k = 0;
    int kappa = 0;
    // key: (barred?, component, gamma|delta concatenated)
    std::map<std::tuple<bool, int, Expo>, Series> entries;
};

/// Direct route: differentiate in the chart, then compose with the chain.
ChainJetTable chain_jet_table_direct(const FormalMap& h, int k, int kappa);

/// One solve step of the jet pipeline: assembles the coefficient matrix from
/// the fundamental system on the chain, checks its Segre specialisation is
/// nonzero, solves (det X) H = -adj(X) A by exact division, and returns the
/// solved top jets. Throws if the division is inexact or the determinant
/// check fails. `gamma` spans the tangential multiindex, `delta` the
/// transversal one; |gamma|+|delta| >= 1.
SeriesVector step1_solve_jets(const FundamentalSystem& sys, ReflectionSystem& R, int k,
                              const Expo& gamma, const Expo& delta);

/// Transfer step: verifies the conjugate identities on the (k+1)-chain and
/// their determinant condition, then certifies the zero-jet entries of the
/// extended table against direct composition.
ChainJetTable step2_transfer(const FundamentalSystem& sys, ReflectionSystem& R, int k, int kappa);

/// Jet table produced by iterating the solvability certificate along the
/// chain instead of composing h directly.
ChainJetTable iterate_solvable(const SolvabilityCertificate& cert, const FormalMap& h, int k,
                               int kappa);

/// Monic polynomial relation P(X, w) = X^N + sum a_k(w) X^(N-k).
struct MonicPolynomial {
    std::vector<Series> coeffs;  // a_1 .. a_N over the parameter frame
};

/// Extend a jet satisfying P(h) == 0 to the requested order, degree by
/// degree. Unit separants give plain Newton lifting; a separant vanishing at
/// 0 but not identically is handled by exact homogeneous division, and a
/// coefficient that cannot be determined raises an error. An identically
/// zero separant is replaced by the derivative polynomial, repeatedly.
Series monic_lift(const MonicPolynomial& P, const Series& h_jet, int target_order);

struct ArtinCheck {
    bool holds = false;
    std::vector<int> witness_rows;
};

/// Jacobian-in-y hypothesis behind the approximation-based convergence step:
/// find m rows of R whose Jacobian along the formal solution has nonzero
/// determinant. The solution residual must vanish.
ArtinCheck artin_hypothesis_check(const SeriesVector& R, const std::vector<std::string>& y_vars,
                                  const SeriesVector& g_hat);

struct DeterminationBound {
    std::string context;
    int nu = -1;
    std::vector<std::string> trials;
};

/// Least jet order whose agreement separates every distinct pair in the
/// family of polynomial-equation solutions. Empirical bound, not a proof.
DeterminationBound determination_polynomial(const MonicPolynomial& P, const SeriesVector& solutions,
                                            int nu_max);

/// Map-pair variant: jets at 0 to order nu must force agreement of the
/// composed chain tables up to 2*mu.
DeterminationBound determination_maps(const std::vector<FormalMap>& family, int nu_max);

}  // namespace crsegre
