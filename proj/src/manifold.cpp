#include "crsegre/manifold.hpp"

#include <algorithm>

namespace crsegre {

namespace {

std::vector<std::string> names(const std::string& stem, int count) {
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

std::vector<std::string> cat(std::initializer_list<std::vector<std::string>> lists) {
    std::vector<std::string> out;
    for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
    return out;
}

}  // namespace

Frame::Frame(int m_, int d_, bool primed) : m(m_), d(d_) {
    const std::string p = primed ? "p" : "";
    w = names("w" + p, m);
    z = names("z" + p, d);
    zeta = names("zeta" + p, m);
    xi = names("xi" + p, d);
    t = cat({w, z});
    tau = cat({zeta, xi});
    ambient = cat({w, z, zeta, xi});
    zchart = cat({w, z, zeta});
    xichart = cat({w, zeta, xi});
}

Series sigma_conjugate(const Series& s, const Frame& fr) {
    std::vector<std::string> swapped;
    swapped.reserve(s.vars().size());
    auto swap_name = [&](const std::string& v) -> std::string {
        for (int i = 0; i < fr.m; ++i) {
            if (v == fr.w[static_cast<size_t>(i)]) return fr.zeta[static_cast<size_t>(i)];
            if (v == fr.zeta[static_cast<size_t>(i)]) return fr.w[static_cast<size_t>(i)];
        }
        for (int j = 0; j < fr.d; ++j) {
            if (v == fr.z[static_cast<size_t>(j)]) return fr.xi[static_cast<size_t>(j)];
            if (v == fr.xi[static_cast<size_t>(j)]) return fr.z[static_cast<size_t>(j)];
        }
        return v;
    };
    for (const auto& v : s.vars()) swapped.push_back(swap_name(v));
    return s.conjugated().renamed(swapped).embedded(s.vars());
}

GenericManifold GenericManifold::from_theta_bar(int m, int d, int order, SeriesVector theta_bar,
                                                bool primed) {
    GenericManifold M;
    M.m_ = m;
    M.d_ = d;
    M.order_ = order;
    M.primed_ = primed;
    M.frame_ = Frame(m, d, primed);
    if (static_cast<int>(theta_bar.size()) != d)
        throw SeriesError("manifold: need d theta_bar components");
    M.theta_bar_.reserve(theta_bar.size());
    for (auto& s : theta_bar) {
        Series amb = s.embedded(M.frame_.ambient).truncated(std::min(order, s.order()));
        if (amb.order() < order) amb = amb.extended_exactly(order);
        if (!amb.constant_term().is_zero())
            throw SeriesError("manifold: ThetaBar(0) != 0");
        for (const auto& v : M.frame_.ambient) {
            if (!amb.derive(v).constant_term().is_zero())
                throw SeriesError("manifold: dThetaBar(0) != 0");
        }
        M.theta_bar_.push_back(amb);
    }
    M.theta_.reserve(M.theta_bar_.size());
    for (const auto& s : M.theta_bar_) M.theta_.push_back(sigma_conjugate(s, M.frame_));
    return M;
}

SeriesVector GenericManifold::xi_on_m() const {
    SeriesVector out;
    out.reserve(static_cast<size_t>(d_));
    for (int j = 0; j < d_; ++j) {
        Series zj = Series::variable(frame_.zchart, order_, frame_.z[static_cast<size_t>(j)]);
        out.push_back(zj - to_plain_zchart(theta_[static_cast<size_t>(j)]).scaled(GRat::i()));
    }
    return out;
}

SeriesVector GenericManifold::z_on_m() const {
    SeriesVector out;
    out.reserve(static_cast<size_t>(d_));
    for (int j = 0; j < d_; ++j) {
        Series xij = Series::variable(frame_.xichart, order_, frame_.xi[static_cast<size_t>(j)]);
        Series tb = theta_bar_[static_cast<size_t>(j)];
        // ThetaBar involves only (zeta, w, xi): project onto the xi chart
        std::vector<Series> subs;
        for (const auto& v : frame_.ambient) {
            if (std::find(frame_.z.begin(), frame_.z.end(), v) != frame_.z.end())
                subs.push_back(Series::zero(frame_.xichart, order_));
            else
                subs.push_back(Series::variable(frame_.xichart, order_, v));
        }
        out.push_back(xij + tb.composed(subs).scaled(GRat::i()));
    }
    return out;
}

// Theta involves only (w, zeta, z); reinterpret it over the z-chart frame.
Series GenericManifold::to_plain_zchart(const Series& s) const {
    std::vector<Series> subs;
    for (const auto& v : frame_.ambient) {
        if (std::find(frame_.xi.begin(), frame_.xi.end(), v) != frame_.xi.end())
            subs.push_back(Series::zero(frame_.zchart, order_));
        else
            subs.push_back(Series::variable(frame_.zchart, order_, v));
    }
    return s.composed(subs);
}

Series GenericManifold::to_zchart(const Series& ambient) const {
    SeriesVector xi = xi_on_m();
    std::vector<Series> subs;
    for (const auto& v : frame_.ambient) {
        auto it = std::find(frame_.xi.begin(), frame_.xi.end(), v);
        if (it != frame_.xi.end())
            subs.push_back(xi[static_cast<size_t>(it - frame_.xi.begin())]);
        else
            subs.push_back(Series::variable(frame_.zchart, ambient.order(), v));
    }
    return ambient.composed(subs);
}

Series GenericManifold::to_xichart(const Series& ambient) const {
    SeriesVector z = z_on_m();
    std::vector<Series> subs;
    for (const auto& v : frame_.ambient) {
        auto it = std::find(frame_.z.begin(), frame_.z.end(), v);
        if (it != frame_.z.end())
            subs.push_back(z[static_cast<size_t>(it - frame_.z.begin())]);
        else
            subs.push_back(Series::variable(frame_.xichart, ambient.order(), v));
    }
    return ambient.composed(subs);
}

Series GenericManifold::zchart_to_xichart(const Series& s) const {
    SeriesVector z = z_on_m();
    std::vector<Series> subs;
    for (const auto& v : s.vars()) {
        auto it = std::find(frame_.z.begin(), frame_.z.end(), v);
        if (it != frame_.z.end())
            subs.push_back(z[static_cast<size_t>(it - frame_.z.begin())]);
        else
            subs.push_back(Series::variable(frame_.xichart, s.order(), v));
    }
    return s.composed(subs);
}

Series GenericManifold::xichart_to_zchart(const Series& s) const {
    SeriesVector xi = xi_on_m();
    std::vector<Series> subs;
    for (const auto& v : s.vars()) {
        auto it = std::find(frame_.xi.begin(), frame_.xi.end(), v);
        if (it != frame_.xi.end())
            subs.push_back(xi[static_cast<size_t>(it - frame_.xi.begin())]);
        else
            subs.push_back(Series::variable(frame_.zchart, s.order(), v));
    }
    return s.composed(subs);
}

Series GenericManifold::t_series_to_xichart(const Series& s) const {
    SeriesVector z = z_on_m();
    std::vector<Series> subs;
    for (const auto& v : s.vars()) {
        auto it = std::find(frame_.z.begin(), frame_.z.end(), v);
        if (it != frame_.z.end())
            subs.push_back(z[static_cast<size_t>(it - frame_.z.begin())]);
        else
            subs.push_back(Series::variable(frame_.xichart, s.order(), v));
    }
    return s.composed(subs);
}

Series GenericManifold::tau_series_to_zchart(const Series& s) const {
    SeriesVector xi = xi_on_m();
    std::vector<Series> subs;
    for (const auto& v : s.vars()) {
        auto it = std::find(frame_.xi.begin(), frame_.xi.end(), v);
        if (it != frame_.xi.end())
            subs.push_back(xi[static_cast<size_t>(it - frame_.xi.begin())]);
        else
            subs.push_back(Series::variable(frame_.zchart, s.order(), v));
    }
    return s.composed(subs);
}

bool GenericManifold::verify_normal() const {
    for (const auto& th : theta_) {
        Series at_w0 = th, at_zeta0 = th;
        for (const auto& v : frame_.w) {
            std::vector<Series> subs;
            for (const auto& u : frame_.ambient)
                subs.push_back(u == v ? Series::zero(frame_.ambient, order_)
                                      : Series::variable(frame_.ambient, order_, u));
            at_w0 = at_w0.composed(subs);
        }
        for (const auto& v : frame_.zeta) {
            std::vector<Series> subs;
            for (const auto& u : frame_.ambient)
                subs.push_back(u == v ? Series::zero(frame_.ambient, order_)
                                      : Series::variable(frame_.ambient, order_, u));
            at_zeta0 = at_zeta0.composed(subs);
        }
        if (!at_w0.is_zero() || !at_zeta0.is_zero()) return false;
    }
    return true;
}

std::pair<SeriesVector, SeriesVector> verify_reality(const GenericManifold& M) {
    const Frame& fr = M.frame();
    SeriesVector xi = M.xi_on_m();
    SeriesVector z = M.z_on_m();
    SeriesVector r1, r2;
    for (int j = 0; j < M.d(); ++j) {
        // Theta(w,zeta,z) - ThetaBar(zeta,w, z - i Theta(w,zeta,z)) in the z chart
        std::vector<Series> subs1;
        for (const auto& v : fr.ambient) {
            auto it = std::find(fr.xi.begin(), fr.xi.end(), v);
            if (it != fr.xi.end())
                subs1.push_back(xi[static_cast<size_t>(it - fr.xi.begin())]);
            else
                subs1.push_back(Series::variable(fr.zchart, M.order(), v));
        }
        Series lhs1 = M.to_zchart(M.theta()[static_cast<size_t>(j)]);
        Series rhs1 = M.theta_bar()[static_cast<size_t>(j)].composed(subs1);
        r1.push_back(lhs1 - rhs1);

        // ThetaBar(zeta,w,xi) - Theta(w,zeta, xi + i ThetaBar) in the xi chart
        std::vector<Series> subs2;
        for (const auto& v : fr.ambient) {
            auto it = std::find(fr.z.begin(), fr.z.end(), v);
            if (it != fr.z.end())
                subs2.push_back(z[static_cast<size_t>(it - fr.z.begin())]);
            else
                subs2.push_back(Series::variable(fr.xichart, M.order(), v));
        }
        Series lhs2 = M.to_xichart(M.theta_bar()[static_cast<size_t>(j)]);
        Series rhs2 = M.theta()[static_cast<size_t>(j)].composed(subs2);
        r2.push_back(lhs2 - rhs2);
    }
    return {r1, r2};
}

GenericManifold theta_from_graph(int m, int d, const SeriesVector& hgraph, int order, bool primed) {
    if (static_cast<int>(hgraph.size()) != d)
        throw SeriesError("theta_from_graph: need d graph components");
    Frame fr(m, d, primed);
    // graph frame: w, zeta (as wbar), z (as x)
    const auto& gv = hgraph[0].vars();
    for (const auto& h : hgraph) {
        if (!h.constant_term().is_zero()) throw SeriesError("theta_from_graph: h(0) != 0");
        for (const auto& v : h.vars())
            if (!h.derive(v).constant_term().is_zero())
                throw SeriesError("theta_from_graph: dh(0) != 0");
        // reality: conj coeff of w^b zeta^a x^k must equal coeff of w^a zeta^b x^k
        Series swapped = h.conjugated();
        std::vector<std::string> sw;
        for (const auto& v : h.vars()) {
            auto iw = std::find(fr.w.begin(), fr.w.end(), v);
            auto iz = std::find(fr.zeta.begin(), fr.zeta.end(), v);
            if (iw != fr.w.end())
                sw.push_back(fr.zeta[static_cast<size_t>(iw - fr.w.begin())]);
            else if (iz != fr.zeta.end())
                sw.push_back(fr.w[static_cast<size_t>(iz - fr.zeta.begin())]);
            else
                sw.push_back(v);
        }
        if (swapped.renamed(sw).embedded(gv) != h)
            throw SeriesError("theta_from_graph: reality violation in graph data");
    }

    // solve z - xi - 2i h(w, zeta, (z+xi)/2) = 0 for z over (w, zeta, xi)
    std::vector<std::string> solve_vars = fr.xichart;
    solve_vars.insert(solve_vars.end(), fr.z.begin(), fr.z.end());
    SeriesVector F;
    GRat half(1, 2);
    for (int j = 0; j < d; ++j) {
        std::vector<Series> subs;
        for (const auto& v : gv) {
            auto ix = std::find(fr.z.begin(), fr.z.end(), v);
            if (ix != fr.z.end()) {
                size_t k = static_cast<size_t>(ix - fr.z.begin());
                Series mid = (Series::variable(solve_vars, order, fr.z[k]) +
                              Series::variable(solve_vars, order, fr.xi[k]))
                                 .scaled(half);
                subs.push_back(mid);
            } else {
                subs.push_back(Series::variable(solve_vars, order, v));
            }
        }
        Series zj = Series::variable(solve_vars, order, fr.z[static_cast<size_t>(j)]);
        Series xij = Series::variable(solve_vars, order, fr.xi[static_cast<size_t>(j)]);
        Series two_i = Series::constant(solve_vars, order, GRat(2) * GRat::i());
        F.push_back(zj - xij - two_i * hgraph[static_cast<size_t>(j)].composed(subs));
    }
    SeriesVector zsol = implicit_solve(F, fr.z);
    SeriesVector theta_bar;
    for (int j = 0; j < d; ++j) {
        Series xij = Series::variable(fr.xichart, order, fr.xi[static_cast<size_t>(j)]);
        theta_bar.push_back((zsol[static_cast<size_t>(j)] - xij).scaled(-GRat::i()));
    }
    return GenericManifold::from_theta_bar(m, d, order, theta_bar, primed);
}

SeriesVector conjugate_theta(int m, int d, const SeriesVector& theta, int order) {
    Frame fr(m, d, false);
    // solve xi - z + i Theta(w,zeta,z) = 0 for z over (w, zeta, xi)
    std::vector<std::string> solve_vars = fr.xichart;
    solve_vars.insert(solve_vars.end(), fr.z.begin(), fr.z.end());
    SeriesVector F;
    for (int j = 0; j < d; ++j) {
        Series th = theta[static_cast<size_t>(j)].embedded(fr.ambient);
        std::vector<Series> subs;
        for (const auto& v : fr.ambient) {
            if (std::find(fr.xi.begin(), fr.xi.end(), v) != fr.xi.end())
                subs.push_back(Series::zero(solve_vars, order));
            else
                subs.push_back(Series::variable(solve_vars, order, v));
        }
        Series xij = Series::variable(solve_vars, order, fr.xi[static_cast<size_t>(j)]);
        Series zj = Series::variable(solve_vars, order, fr.z[static_cast<size_t>(j)]);
        F.push_back(xij - zj + th.composed(subs).scaled(GRat::i()));
    }
    SeriesVector zsol = implicit_solve(F, fr.z);
    SeriesVector theta_bar;
    for (int j = 0; j < d; ++j) {
        Series xij = Series::variable(fr.xichart, order, fr.xi[static_cast<size_t>(j)]);
        theta_bar.push_back((zsol[static_cast<size_t>(j)] - xij).scaled(-GRat::i()));
    }
    return theta_bar;
}

GenericManifold GenericManifold::reframed(bool primed) const {
    if (primed == primed_) return *this;
    Frame nf(m_, d_, primed);
    SeriesVector tb;
    for (const auto& s : theta_bar_) tb.push_back(s.renamed(nf.ambient));
    return from_theta_bar(m_, d_, order_, tb, primed);
}

FormalMap::FormalMap(GenericManifold source, GenericManifold target, SeriesVector g, SeriesVector f)
    : source_(source.reframed(false)),
      target_(target.reframed(true)),
      g_(std::move(g)),
      f_(std::move(f)) {
    if (static_cast<int>(g_.size()) != target_.m() || static_cast<int>(f_.size()) != target_.d())
        throw SeriesError("FormalMap: component count does not match target dimensions");
    for (const auto& c : g_)
        if (!c.constant_term().is_zero()) throw SeriesError("FormalMap: g(0) != 0");
    for (const auto& c : f_)
        if (!c.constant_term().is_zero()) throw SeriesError("FormalMap: f(0) != 0");
}

FormalMap FormalMap::identity(const GenericManifold& M) {
    GenericManifold src = M.reframed(false);
    SeriesVector g, f;
    const Frame& fr = src.frame();
    for (const auto& v : fr.w) g.push_back(Series::variable(fr.t, src.order(), v));
    for (const auto& v : fr.z) f.push_back(Series::variable(fr.t, src.order(), v));
    return FormalMap(src, M, std::move(g), std::move(f));
}

const Series& FormalMap::component(int j) const {
    if (j < static_cast<int>(g_.size())) return g_[static_cast<size_t>(j)];
    return f_[static_cast<size_t>(j) - g_.size()];
}

SeriesVector FormalMap::conj_components() const {
    const Frame& fr = source_.frame();
    SeriesVector out;
    auto conj_one = [&](const Series& s) {
        std::vector<std::string> sw;
        for (const auto& v : s.vars()) {
            auto iw = std::find(fr.w.begin(), fr.w.end(), v);
            auto iz = std::find(fr.z.begin(), fr.z.end(), v);
            if (iw != fr.w.end())
                sw.push_back(fr.zeta[static_cast<size_t>(iw - fr.w.begin())]);
            else if (iz != fr.z.end())
                sw.push_back(fr.xi[static_cast<size_t>(iz - fr.z.begin())]);
            else
                throw SeriesError("conj_components: unexpected variable " + v);
        }
        return s.conjugated().renamed(sw).embedded(fr.tau);
    };
    for (const auto& c : g_) out.push_back(conj_one(c));
    for (const auto& c : f_) out.push_back(conj_one(c));
    return out;
}

SeriesVector verify_maps_into(const FormalMap& h) {
    const GenericManifold& M = h.source();
    const GenericManifold& Mp = h.target();
    const Frame& fr = M.frame();
    const Frame& frp = Mp.frame();
    const int order = h.order();
    const int out_order = std::min(order, std::min(M.order(), Mp.order()));

    // everything in the source z-chart
    SeriesVector hbar = h.conj_components();
    SeriesVector gz, fz, gbz, fbz;
    for (const auto& c : h.g()) gz.push_back(c.embedded(fr.zchart).truncated(out_order));
    for (const auto& c : h.f()) fz.push_back(c.embedded(fr.zchart).truncated(out_order));
    for (int j = 0; j < h.n_target(); ++j) {
        Series comp = M.tau_series_to_zchart(hbar[static_cast<size_t>(j)]).truncated(out_order);
        if (j < Mp.m())
            gbz.push_back(comp);
        else
            fbz.push_back(comp);
    }

    SeriesVector resid;
    for (int l = 0; l < Mp.d(); ++l) {
        // ThetaBar'(zeta',w',xi') at zeta' := gbar, w' := g, xi' := fbar
        std::vector<Series> subs;
        for (const auto& v : frp.ambient) {
            auto iw = std::find(frp.w.begin(), frp.w.end(), v);
            auto iz = std::find(frp.z.begin(), frp.z.end(), v);
            auto izt = std::find(frp.zeta.begin(), frp.zeta.end(), v);
            auto ixi = std::find(frp.xi.begin(), frp.xi.end(), v);
            if (iw != frp.w.end())
                subs.push_back(gz[static_cast<size_t>(iw - frp.w.begin())]);
            else if (izt != frp.zeta.end())
                subs.push_back(gbz[static_cast<size_t>(izt - frp.zeta.begin())]);
            else if (ixi != frp.xi.end())
                subs.push_back(fbz[static_cast<size_t>(ixi - frp.xi.begin())]);
            else if (iz != frp.z.end())
                subs.push_back(Series::zero(fr.zchart, out_order));
            else
                throw SeriesError("verify_maps_into: unexpected target variable " + v);
        }
        Series tb = Mp.theta_bar()[static_cast<size_t>(l)].composed(subs);
        resid.push_back(fz[static_cast<size_t>(l)] - fbz[static_cast<size_t>(l)] -
                        tb.scaled(GRat::i()));
    }
    return resid;
}

}  // namespace crsegre

namespace crsegre {

SeriesVector verify_maps_into_conjugate(const FormalMap& h) {
    const GenericManifold& M = h.source();
    const GenericManifold& Mp = h.target();
    const Frame& fr = M.frame();
    const Frame& frp = Mp.frame();
    const int out_order = std::min(h.order(), std::min(M.order(), Mp.order()));

    // everything in the source xi-chart
    SeriesVector hbar = h.conj_components();
    SeriesVector gx, fx, gbx, fbx;
    for (const auto& c : h.g()) gx.push_back(M.t_series_to_xichart(c).truncated(out_order));
    for (const auto& c : h.f()) fx.push_back(M.t_series_to_xichart(c).truncated(out_order));
    for (int j = 0; j < h.n_target(); ++j) {
        Series comp = hbar[static_cast<size_t>(j)].embedded(fr.xichart).truncated(out_order);
        if (j < Mp.m())
            gbx.push_back(comp);
        else
            fbx.push_back(comp);
    }

    SeriesVector resid;
    for (int l = 0; l < Mp.d(); ++l) {
        // Theta'(w',zeta',z') at w' := g, zeta' := gbar, z' := f
        std::vector<Series> subs;
        for (const auto& v : frp.ambient) {
            auto iw = std::find(frp.w.begin(), frp.w.end(), v);
            auto iz = std::find(frp.z.begin(), frp.z.end(), v);
            auto izt = std::find(frp.zeta.begin(), frp.zeta.end(), v);
            if (iw != frp.w.end())
                subs.push_back(gx[static_cast<size_t>(iw - frp.w.begin())]);
            else if (izt != frp.zeta.end())
                subs.push_back(gbx[static_cast<size_t>(izt - frp.zeta.begin())]);
            else if (iz != frp.z.end())
                subs.push_back(fx[static_cast<size_t>(iz - frp.z.begin())]);
            else
                subs.push_back(Series::zero(fr.xichart, out_order));
        }
        Series th = Mp.theta()[static_cast<size_t>(l)].composed(subs);
        resid.push_back(fbx[static_cast<size_t>(l)] - fx[static_cast<size_t>(l)] +
                        th.scaled(GRat::i()));
    }
    return resid;
}

}  // namespace crsegre
