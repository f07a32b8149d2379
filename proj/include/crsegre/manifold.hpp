#pragma once

#include <string>
#include <vector>

#include "crsegre/series.hpp"

namespace crsegre {

/// Canonical variable frames for a generic submanifold of CR dimension m and
/// codimension d. Source blocks are w (tangential), z (normal) and their
/// complexified conjugates zeta, xi. Target blocks carry a p suffix.
struct Frame {
    Frame() = default;
    Frame(int m, int d, bool primed);

    int m = 0, d = 0;
    std::vector<std::string> w, z, zeta, xi;
    std::vector<std::string> t;        // w + z
    std::vector<std::string> tau;      // zeta + xi
    std::vector<std::string> ambient;  // w + z + zeta + xi
    std::vector<std::string> zchart;   // w + z + zeta   (xi eliminated on M)
    std::vector<std::string> xichart;  // w + zeta + xi  (z eliminated on M)
};

/// sigma-conjugation of an ambient-frame series: conjugate coefficients and
/// swap the t and tau blocks (w <-> zeta, z <-> xi).
Series sigma_conjugate(const Series& s, const Frame& fr);

/// A generic submanifold through 0 in graph form. theta is Theta(w,zeta,z),
/// theta_bar is ThetaBar(zeta,w,xi); both stored over the ambient frame and
/// tied together by the reality identities.
class GenericManifold {
public:
    GenericManifold() = default;

    /// Ingest from ThetaBar; Theta is its sigma-conjugate. Reality is
    /// verified separately, not assumed.
    static GenericManifold from_theta_bar(int m, int d, int order, SeriesVector theta_bar,
                                          bool primed = false);

    /// Same manifold over the primed (or unprimed) frame.
    GenericManifold reframed(bool primed) const;
    bool primed() const { return primed_; }

    int m() const { return m_; }
    int d() const { return d_; }
    int n() const { return m_ + d_; }
    int order() const { return order_; }
    const Frame& frame() const { return frame_; }
    const SeriesVector& theta() const { return theta_; }
    const SeriesVector& theta_bar() const { return theta_bar_; }

    /// xi = z - i*Theta(w,zeta,z) as z-chart series (one per codim).
    SeriesVector xi_on_m() const;
    /// z = xi + i*ThetaBar(zeta,w,xi) as xi-chart series.
    SeriesVector z_on_m() const;

    /// Restrict an ambient-frame series to M in the named chart.
    Series to_zchart(const Series& ambient) const;
    Series to_xichart(const Series& ambient) const;
    /// Chart transitions for on-M series.
    Series zchart_to_xichart(const Series& s) const;
    Series xichart_to_zchart(const Series& s) const;
    /// Lift a series in the t (resp. tau) variables onto M in a chart.
    Series t_series_to_xichart(const Series& s) const;
    Series tau_series_to_zchart(const Series& s) const;

    bool verify_normal() const;

    /// Reinterpret a series using only (w, zeta, z) names over the z chart.
    Series to_plain_zchart(const Series& s) const;

private:
    int m_ = 0, d_ = 0, order_ = 0;
    bool primed_ = false;
    Frame frame_;
    SeriesVector theta_, theta_bar_;
};

/// Both residuals of the reality identities, in the z-chart and xi-chart
/// respectively; all components zero means the pair (Theta, ThetaBar) is a
/// consistent real manifold at this order.
std::pair<SeriesVector, SeriesVector> verify_reality(const GenericManifold& M);

/// Build a manifold from real graph data y = h(w, wbar, x). The graph series
/// uses the zeta names for wbar and the z names for x. Requires h(0)=0,
/// dh(0)=0 and the reality pairing of coefficients.
GenericManifold theta_from_graph(int m, int d, const SeriesVector& hgraph, int order,
                                 bool primed = false);

/// The fixed-point companion of a given Theta: solves the graph inversion
/// for ThetaBar degree by degree. Involutive as pure algebra.
SeriesVector conjugate_theta(int m, int d, const SeriesVector& theta, int order);

/// Truncated holomorphic map h = (g, f) between two manifolds; components
/// over the source t frame.
class FormalMap {
public:
    FormalMap() = default;
    FormalMap(GenericManifold source, GenericManifold target, SeriesVector g, SeriesVector f);

    static FormalMap identity(const GenericManifold& M);

    const GenericManifold& source() const { return source_; }
    const GenericManifold& target() const { return target_; }
    const SeriesVector& g() const { return g_; }
    const SeriesVector& f() const { return f_; }
    int order() const { return g_.empty() ? f_[0].order() : g_[0].order(); }

    /// j-th component of h (g first, then f).
    const Series& component(int j) const;
    int n_target() const { return static_cast<int>(g_.size() + f_.size()); }

    /// Conjugate map hbar over the source tau frame.
    SeriesVector conj_components() const;

private:
    GenericManifold source_, target_;
    SeriesVector g_, f_;
};

/// Residual of the complexified graph identity certifying h(M) c M' at this
/// order: f(w,z) - [fbar + i*ThetaBar'(gbar, g, fbar)] restricted to M, as
/// z-chart series. All-zero components certify the inclusion.
SeriesVector verify_maps_into(const FormalMap& h);

/// The companion identity fbar - [f - i*Theta'(g, gbar, f)] in the xi chart;
/// passes or fails together with verify_maps_into on consistent data.
SeriesVector verify_maps_into_conjugate(const FormalMap& h);

}  // namespace crsegre
