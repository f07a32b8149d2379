#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crsegre/linalg.hpp"
#include "crsegre/manifold.hpp"

namespace crsegre {

/// A point of the complexified manifold with coordinates given as series in
/// some parameter frame. Blocks are (w, z, zeta, xi), sizes (m, d, m, d).
struct PointOnM {
    SeriesVector w, z, zeta, xi;

    SeriesVector all() const;
    static PointOnM origin(const GenericManifold& M, const std::vector<std::string>& params,
                           int order);
};

enum class FieldKind { L, Lbar, Upsilon, UpsilonBar };

/// Flow actions on points of the complexification. L shifts w and re-solves
/// z; Lbar shifts zeta and re-solves xi; the transversal flows shift (z, xi)
/// jointly along the complementary fields.
PointOnM flow(const GenericManifold& M, FieldKind field, const PointOnM& p, const SeriesVector& param);

/// Residual of the manifold equation xi - z + i Theta(w,zeta,z) on a point;
/// all-zero certifies the point lies on the complexification.
SeriesVector m_residual(const GenericManifold& M, const PointOnM& p);

/// Alternating word of flows. l_first: L, Lbar, L, ... ; otherwise Lbar
/// first. Parameter blocks are named p1w*/p1zeta* etc. in application order.
struct ChainWord {
    bool l_first = true;
    int length = 0;
};

struct ChainMap {
    ChainWord word;
    std::vector<std::string> params;
    PointOnM gamma;
    int order = 0;
};

ChainMap chain_map(const GenericManifold& M, const ChainWord& word);

/// Complexified tangential and transversal vector fields as explicit
/// coefficient series over the ambient frame, for derivation-style use.
struct VectorFieldSystem {
    // L_r = d/dw_r + sum_j Lz[j][r] d/dz_j, with Lz[j][r] = i dThetaBar_j/dw_r
    SeriesMatrix Lz;
    // Lbar_r = d/dzeta_r + sum_j Lbarxi[j][r] d/dxi_j
    SeriesMatrix Lbarxi;
    // Upsilon_s = d/dz_s + sum_j Uxi[j][s] d/dxi_j
    SeriesMatrix Uxi;
    // UpsilonBar_s = d/dxi_s + sum_j Ubarz[j][s] d/dz_j
    SeriesMatrix Ubarz;
};

VectorFieldSystem build_fields(const GenericManifold& M);

/// Apply one field component (first-order derivation) to an ambient-frame
/// series; output order drops by one.
Series apply_field(const GenericManifold& M, const VectorFieldSystem& V, FieldKind kind,
                   int component, const Series& F);

/// Largest r with a surviving r x r Jacobian minor of the map given by the
/// series vector, at the entries' order.
int generic_rank_of_map(const SeriesVector& F, std::uint64_t seed);

struct SegreTypeReport {
    int mu = 0;                 // stabilisation length
    int kappa = 0;              // mu - 2
    std::vector<int> e;         // rank increments past length 2
    std::vector<int> ranks;     // ranks[k-1] = genrk(Gamma^k)
    int order_used = 0;
    bool minimal = false;
    bool conclusive = false;    // false when ranks did not stabilise by k_max
};

SegreTypeReport segre_multitype(const GenericManifold& M, int k_max, std::uint64_t seed);

struct MinimalityWitness {
    std::vector<GRat> tuple;     // chain parameters, in application order
    int rank_t = 0, rank_tau = 0;
    bool returned = false;       // whether Gamma^(2mu)(tuple) evaluates to 0
    bool conjugate_checked = false;
    int chain_length = 0;
};

/// Random rational search for a full-rank tuple on the length-2mu chain.
/// The return-to-origin condition is reported but not required; the
/// conjugate tuple is validated on the opposite word.
std::optional<MinimalityWitness> minimality_witness(const GenericManifold& M, std::uint64_t seed,
                                                    int trials = 64);

/// sigma on a 2n-component point: swap the t and tau blocks and conjugate
/// coefficients. Parameter renaming is the caller's business.
PointOnM sigma_point(const PointOnM& p);

}  // namespace crsegre
