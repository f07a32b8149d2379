#pragma once

#include <map>
#include <optional>
#include <vector>

#include "crsegre/linalg.hpp"
#include "crsegre/manifold.hpp"

namespace crsegre {

/// Jet of the conjugate map: entries (component j, multiindex alpha) hold
/// d^alpha hbar_j over the tau frame.
struct JetVector {
    int kappa = 0;
    std::map<std::pair<int, Expo>, Series> entries;
};

JetVector build_jet_vector(const FormalMap& h, int kappa);

/// Derived identities of a map, computed in the chart (w, z, zeta) on the
/// source complexification, where the conjugated tangential derivation acts
/// as d/dzeta. Series live over rframe = (w, z, zeta, wp, zp); the primed
/// block is the free target slot, and the jets of hbar are substituted as
/// functions of (zeta, xi(w,z,zeta)).
class ReflectionSystem {
public:
    explicit ReflectionSystem(FormalMap h);

    const FormalMap& map() const { return h_; }
    const std::vector<std::string>& rframe() const { return rframe_; }
    const std::vector<std::string>& tprime_vars() const { return tprime_; }
    int base_order() const { return base_[0].order(); }

    /// R_gamma as a d'-vector; gamma is a multiindex over the source zeta
    /// block. Cached; each derivation costs one truncation degree and the
    /// computation refuses to drop below order 2.
    const SeriesVector& R(const Expo& gamma);

    /// R_gamma(0, 0, t') over the t'-only frame (wp, zp).
    SeriesVector R_at_origin(const Expo& gamma);

    /// The base identities restricted to the conjugate Segre leaf through 0:
    /// w = z = 0 with zeta kept free, over the frame (zeta, wp, zp). The
    /// zeta-Taylor coefficients of these series span every R_gamma(0,0,t').
    SeriesVector base_on_segre_leaf();

    /// Substitute t' := h(t); the result must vanish identically when h maps
    /// source into target (checked by the caller against zero).
    SeriesVector R_on_map(const Expo& gamma);

    /// Row of the Segre-variety determinant: d/dt'_k of R^{l'}_gamma composed
    /// at z = 0, zeta = 0, t' := h(w, 0); entries are series in w.
    std::vector<Series> segre_row(const Expo& gamma, int lprime);

    /// Constant gradient at the origin of R_gamma(0,0,t'): rows over t'.
    std::vector<std::vector<GRat>> origin_gradient(const Expo& gamma);

    /// j-th map component (g first, then f) lifted to the z chart, over
    /// rframe.
    const Series& map_component_on_m(int j) const;

private:
    FormalMap h_;
    std::vector<std::string> rframe_, tprime_;
    SeriesVector gz_, fz_, gbz_, fbz_;  // map components lifted to the z chart
    SeriesVector base_;                 // R_0 over rframe
    std::map<Expo, SeriesVector> cache_;
};

/// ThetaBar'_{zeta'^beta} composed with (g, gbar, f) and restricted to the
/// source manifold, presented in the (w, zeta, xi) chart.
SeriesVector theta_beta_direct(const FormalMap& h, const Expo& beta);

/// det of the matrix (Lbar_j gbar_k) on the source manifold, (w, zeta, xi)
/// chart. Square case only; use the selected variant for rectangular maps.
Series delta_det(const FormalMap& h);
Series delta_det_selected(const FormalMap& h, const std::vector<int>& rows,
                          const std::vector<int>& cols);

/// Cramer-rule recursion for thetaBar'_beta in the invertible case
/// (m = m', det (Lbar gbar)(0) != 0); must reproduce theta_beta_direct.
SeriesVector theta_beta_recursive(const FormalMap& h, const Expo& beta);

/// Denominator-cleared recursion: N_beta = Delta^(2|beta|-1) thetaBar'_beta
/// computed without any division, valid for a selected square minor even
/// when Delta vanishes at 0. Rows/cols select derivations and components;
/// omitted components must satisfy Lbar_j gbar_k == 0 identically.
SeriesVector theta_beta_numerator(const FormalMap& h, const Expo& beta,
                                  const std::vector<int>& rows, const std::vector<int>& cols);

struct MinorVariantResult {
    SeriesVector lhs;   // Delta^(2|beta|-1) * thetaBar'_beta (direct route)
    SeriesVector rhs;   // the recursion numerator
    Expo gamma_sharp;   // minimal lex multiindex with d^gamma Delta(0,zeta,0) != 0
};

MinorVariantResult minor_variant(const FormalMap& h, const Expo& beta,
                                 const std::vector<int>& rows, const std::vector<int>& cols);

/// Residual of the conjugate-side identity: theta'_beta computed through the
/// unbarred derivation minus the sigma-conjugate of thetaBar'_beta; zero on
/// real data. z-chart series.
SeriesVector conjugate_reflection_check(const FormalMap& h, const Expo& beta);

}  // namespace crsegre
