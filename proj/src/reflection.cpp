#include "crsegre/reflection.hpp"

#include <algorithm>
#include <functional>

namespace crsegre {

namespace {

std::vector<std::string> cat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

int total(const Expo& e) {
    int s = 0;
    for (auto x : e) s += static_cast<int>(x);
    return s;
}

// compose a target-frame series with slot values (all over a common frame)
Series fill_target_slots(const GenericManifold& Mp, const Series& s, const SeriesVector& wp,
                         const SeriesVector& zp, const SeriesVector& zetap, const SeriesVector& xip) {
    const Frame& frp = Mp.frame();
    std::vector<Series> subs;
    for (const auto& v : s.vars()) {
        auto iw = std::find(frp.w.begin(), frp.w.end(), v);
        auto iz = std::find(frp.z.begin(), frp.z.end(), v);
        auto izt = std::find(frp.zeta.begin(), frp.zeta.end(), v);
        auto ixi = std::find(frp.xi.begin(), frp.xi.end(), v);
        if (iw != frp.w.end())
            subs.push_back(wp[static_cast<size_t>(iw - frp.w.begin())]);
        else if (iz != frp.z.end())
            subs.push_back(zp[static_cast<size_t>(iz - frp.z.begin())]);
        else if (izt != frp.zeta.end())
            subs.push_back(zetap[static_cast<size_t>(izt - frp.zeta.begin())]);
        else if (ixi != frp.xi.end())
            subs.push_back(xip[static_cast<size_t>(ixi - frp.xi.begin())]);
        else
            throw SeriesError("reflection: unexpected target variable " + v);
    }
    return s.composed(subs);
}

void check_budget(int order, const char* what) {
    if (order < 2) throw SeriesError(std::string(what) + ": truncation order exhausted (below 2)");
}

}  // namespace

JetVector build_jet_vector(const FormalMap& h, int kappa) {
    JetVector J;
    J.kappa = kappa;
    SeriesVector hbar = h.conj_components();
    const Frame& fr = h.source().frame();
    const int n = h.source().n();
    for (int j = 0; j < h.n_target(); ++j) {
        std::map<Expo, Series> level;
        Expo zerox(static_cast<size_t>(n), 0);
        level[zerox] = hbar[static_cast<size_t>(j)];
        J.entries[{j, zerox}] = hbar[static_cast<size_t>(j)];
        for (int k = 1; k <= kappa; ++k) {
            std::map<Expo, Series> next;
            for (const auto& [e, s] : level) {
                for (int v = 0; v < n; ++v) {
                    Expo ne = e;
                    ne[static_cast<size_t>(v)] += 1;
                    if (next.count(ne)) continue;
                    next[ne] = s.derive(fr.tau[static_cast<size_t>(v)]);
                }
            }
            for (const auto& [e, s] : next) J.entries[{j, e}] = s;
            level = std::move(next);
        }
    }
    return J;
}

ReflectionSystem::ReflectionSystem(FormalMap h) : h_(std::move(h)) {
    const GenericManifold& M = h_.source();
    const GenericManifold& Mp = h_.target();
    const Frame& fr = M.frame();
    const Frame& frp = Mp.frame();
    tprime_ = cat(frp.w, frp.z);
    rframe_ = cat(fr.zchart, tprime_);
    const int order = h_.order();

    auto to_rframe = [&](const Series& s) { return s.embedded(rframe_); };

    for (const auto& c : h_.g()) gz_.push_back(to_rframe(c.embedded(fr.zchart)));
    for (const auto& c : h_.f()) fz_.push_back(to_rframe(c.embedded(fr.zchart)));
    SeriesVector hbar = h_.conj_components();
    for (int j = 0; j < h_.n_target(); ++j) {
        Series comp = to_rframe(M.tau_series_to_zchart(hbar[static_cast<size_t>(j)]));
        if (j < Mp.m())
            gbz_.push_back(comp);
        else
            fbz_.push_back(comp);
    }

    // R_0 = rho'(t', hbar(tau)) = fbar - zp + i Theta'(wp, gbar, zp)
    SeriesVector wp_free, zp_free;
    for (const auto& v : frp.w) wp_free.push_back(Series::variable(rframe_, order, v));
    for (const auto& v : frp.z) zp_free.push_back(Series::variable(rframe_, order, v));
    for (int l = 0; l < Mp.d(); ++l) {
        Series th = fill_target_slots(Mp, Mp.theta()[static_cast<size_t>(l)], wp_free, zp_free, gbz_,
                                      /*xip*/ SeriesVector(static_cast<size_t>(Mp.d()),
                                                           Series::zero(rframe_, order)));
        base_.push_back(fbz_[static_cast<size_t>(l)] - zp_free[static_cast<size_t>(l)] +
                        th.scaled(GRat::i()));
    }
    cache_[Expo(static_cast<size_t>(M.m()), 0)] = base_;
}

const SeriesVector& ReflectionSystem::R(const Expo& gamma) {
    if (static_cast<int>(gamma.size()) != h_.source().m())
        throw SeriesError("reflection: gamma arity mismatch");
    auto it = cache_.find(gamma);
    if (it != cache_.end()) return it->second;
    // recurse through the lowest nonzero index
    size_t j = 0;
    while (j < gamma.size() && gamma[j] == 0) ++j;
    Expo pred = gamma;
    pred[j] -= 1;
    const SeriesVector& prev = R(pred);
    check_budget(prev[0].order() - 1, "reflection.R");
    const std::string& var = h_.source().frame().zeta[j];
    SeriesVector next;
    next.reserve(prev.size());
    for (const auto& s : prev) next.push_back(s.derive(var));
    auto [pos, _] = cache_.emplace(gamma, std::move(next));
    return pos->second;
}

SeriesVector ReflectionSystem::R_at_origin(const Expo& gamma) {
    const SeriesVector& r = R(gamma);
    const Frame& fr = h_.source().frame();
    const int order = r[0].order();
    std::vector<Series> subs;
    for (const auto& v : rframe_) {
        bool base_var = std::find(fr.zchart.begin(), fr.zchart.end(), v) != fr.zchart.end();
        if (base_var)
            subs.push_back(Series::zero(tprime_, order));
        else
            subs.push_back(Series::variable(tprime_, order, v));
    }
    SeriesVector out;
    out.reserve(r.size());
    for (const auto& s : r) out.push_back(s.composed(subs));
    return out;
}

SeriesVector ReflectionSystem::base_on_segre_leaf() {
    const Frame& fr = h_.source().frame();
    std::vector<std::string> frame = fr.zeta;
    frame.insert(frame.end(), tprime_.begin(), tprime_.end());
    const int order = base_[0].order();
    std::vector<Series> subs;
    for (const auto& v : rframe_) {
        bool kill = std::find(fr.w.begin(), fr.w.end(), v) != fr.w.end() ||
                    std::find(fr.z.begin(), fr.z.end(), v) != fr.z.end();
        subs.push_back(kill ? Series::zero(frame, order) : Series::variable(frame, order, v));
    }
    SeriesVector out;
    for (const auto& s : base_) out.push_back(s.composed(subs));
    return out;
}

SeriesVector ReflectionSystem::R_on_map(const Expo& gamma) {
    const SeriesVector& r = R(gamma);
    const int order = r[0].order();
    const Frame& frp = h_.target().frame();
    std::vector<Series> subs;
    for (const auto& v : rframe_) {
        auto iw = std::find(frp.w.begin(), frp.w.end(), v);
        auto iz = std::find(frp.z.begin(), frp.z.end(), v);
        if (iw != frp.w.end())
            subs.push_back(gz_[static_cast<size_t>(iw - frp.w.begin())].truncated(order));
        else if (iz != frp.z.end())
            subs.push_back(fz_[static_cast<size_t>(iz - frp.z.begin())].truncated(order));
        else
            subs.push_back(Series::variable(rframe_, order, v));
    }
    SeriesVector out;
    for (const auto& s : r) out.push_back(s.composed(subs));
    return out;
}

std::vector<Series> ReflectionSystem::segre_row(const Expo& gamma, int lprime) {
    const GenericManifold& M = h_.source();
    const Frame& fr = M.frame();
    if (!M.verify_normal())
        throw SeriesError("reflection: Segre rows require normal coordinates");
    const Series& r = R(gamma)[static_cast<size_t>(lprime)];
    const int order = r.order() - 1;
    check_budget(order + 1, "reflection.segre_row");

    // t' := h(w, 0) needs g, f at z = 0 as series in w only
    SeriesVector g0, f0;
    const auto wvars = fr.w;
    for (const auto& c : h_.g()) {
        std::vector<Series> s;
        for (const auto& v : c.vars()) {
            if (std::find(fr.z.begin(), fr.z.end(), v) != fr.z.end())
                s.push_back(Series::zero(wvars, order));
            else
                s.push_back(Series::variable(wvars, order, v));
        }
        g0.push_back(c.composed(s));
    }
    for (const auto& c : h_.f()) {
        std::vector<Series> s;
        for (const auto& v : c.vars()) {
            if (std::find(fr.z.begin(), fr.z.end(), v) != fr.z.end())
                s.push_back(Series::zero(wvars, order));
            else
                s.push_back(Series::variable(wvars, order, v));
        }
        f0.push_back(c.composed(s));
    }

    const Frame& frp = h_.target().frame();
    std::vector<Series> row;
    for (const auto& tv : tprime_) {
        Series dr = r.derive(tv);
        std::vector<Series> subs;
        for (const auto& v : rframe_) {
            auto iw = std::find(frp.w.begin(), frp.w.end(), v);
            auto iz = std::find(frp.z.begin(), frp.z.end(), v);
            if (std::find(fr.w.begin(), fr.w.end(), v) != fr.w.end())
                subs.push_back(Series::variable(wvars, order, v));
            else if (iw != frp.w.end())
                subs.push_back(g0[static_cast<size_t>(iw - frp.w.begin())]);
            else if (iz != frp.z.end())
                subs.push_back(f0[static_cast<size_t>(iz - frp.z.begin())]);
            else
                subs.push_back(Series::zero(wvars, order));  // z, zeta := 0
        }
        row.push_back(dr.composed(subs));
    }
    return row;
}

const Series& ReflectionSystem::map_component_on_m(int j) const {
    if (j < static_cast<int>(gz_.size())) return gz_[static_cast<size_t>(j)];
    return fz_[static_cast<size_t>(j) - gz_.size()];
}

std::vector<std::vector<GRat>> ReflectionSystem::origin_gradient(const Expo& gamma) {
    SeriesVector r0 = R_at_origin(gamma);
    std::vector<std::vector<GRat>> rows;
    for (const auto& s : r0) {
        std::vector<GRat> row;
        for (const auto& v : tprime_) row.push_back(s.derive(v).constant_term());
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// shared scaffolding for the barred recursion: everything in the z chart
struct BarSide {
    std::vector<std::string> frame;  // source z-chart
    SeriesVector gb, fb;             // gbar, fbar on M
    SeriesVector g, f;               // g, f as z-chart series
    const GenericManifold* M = nullptr;
    const GenericManifold* Mp = nullptr;
};

BarSide make_bar_side(const FormalMap& h) {
    BarSide B;
    B.M = &h.source();
    B.Mp = &h.target();
    const Frame& fr = h.source().frame();
    B.frame = fr.zchart;
    for (const auto& c : h.g()) B.g.push_back(c.embedded(fr.zchart));
    for (const auto& c : h.f()) B.f.push_back(c.embedded(fr.zchart));
    SeriesVector hbar = h.conj_components();
    for (int j = 0; j < h.n_target(); ++j) {
        Series comp = h.source().tau_series_to_zchart(hbar[static_cast<size_t>(j)]);
        if (j < h.target().m())
            B.gb.push_back(comp);
        else
            B.fb.push_back(comp);
    }
    return B;
}

// Theta'_{zeta'^beta}(g, gbar, f) as z-chart series (one per target codim)
SeriesVector theta_beta_direct_zchart(const FormalMap& h, const Expo& beta) {
    BarSide B = make_bar_side(h);
    const Frame& frp = h.target().frame();
    if (beta.size() != static_cast<size_t>(h.target().m()))
        throw SeriesError("theta_beta: beta arity must match target CR dimension");
    SeriesVector out;
    for (int l = 0; l < h.target().d(); ++l) {
        Series th = h.target().theta()[static_cast<size_t>(l)];
        for (size_t k = 0; k < beta.size(); ++k)
            for (std::uint32_t rep = 0; rep < beta[k]; ++rep) th = th.derive(frp.zeta[k]);
        out.push_back(fill_target_slots(*B.Mp, th, B.g, B.f, B.gb,
                                        SeriesVector(static_cast<size_t>(h.target().d()),
                                                     Series::zero(B.frame, th.order()))));
    }
    return out;
}

SeriesMatrix lbar_gbar_matrix(const BarSide& B, const std::vector<int>& rows,
                              const std::vector<int>& cols) {
    const Frame& fr = B.M->frame();
    SeriesMatrix m;
    for (int j : rows) {
        std::vector<Series> row;
        for (int k : cols)
            row.push_back(B.gb[static_cast<size_t>(k)].derive(fr.zeta[static_cast<size_t>(j)]));
        m.push_back(std::move(row));
    }
    return m;
}

std::vector<int> iota(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i;
    return v;
}

}  // namespace

SeriesVector theta_beta_direct(const FormalMap& h, const Expo& beta) {
    SeriesVector z = theta_beta_direct_zchart(h, beta);
    SeriesVector out;
    for (const auto& s : z) out.push_back(h.source().zchart_to_xichart(s));
    return out;
}

Series delta_det(const FormalMap& h) {
    if (h.source().m() != h.target().m())
        throw SeriesError("delta_det: square case needs m = m'");
    return delta_det_selected(h, iota(h.source().m()), iota(h.target().m()));
}

Series delta_det_selected(const FormalMap& h, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
    if (rows.size() != cols.size()) throw SeriesError("delta_det: selection not square");
    BarSide B = make_bar_side(h);
    Series d = det(lbar_gbar_matrix(B, rows, cols));
    return h.source().zchart_to_xichart(d);
}

SeriesVector theta_beta_numerator(const FormalMap& h, const Expo& beta,
                                  const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.size() != cols.size() || rows.empty())
        throw SeriesError("theta_beta_numerator: selection not square");
    BarSide B = make_bar_side(h);
    const Frame& fr = h.source().frame();
    const int b_total = total(beta);
    if (b_total < 1) throw SeriesError("theta_beta_numerator: beta must be nonzero");
    // beta must be supported in the selected columns
    for (size_t k = 0; k < beta.size(); ++k) {
        if (beta[k] > 0 && std::find(cols.begin(), cols.end(), static_cast<int>(k)) == cols.end())
            throw SeriesError("theta_beta_numerator: beta exceeds the selected components");
    }
    // omitted components must be annihilated by the selected derivations
    for (int k = 0; k < h.target().m(); ++k) {
        if (std::find(cols.begin(), cols.end(), k) != cols.end()) continue;
        for (int j : rows) {
            if (!B.gb[static_cast<size_t>(k)].derive(fr.zeta[static_cast<size_t>(j)]).is_zero())
                throw SeriesError("theta_beta_numerator: omitted component not annihilated");
        }
    }

    SeriesMatrix Lg = lbar_gbar_matrix(B, rows, cols);
    Series Delta = det(Lg);
    SeriesMatrix Adj = adjugate(Lg);
    const size_t s = rows.size();
    const GRat I = GRat::i();

    std::map<Expo, SeriesVector> N;  // numerator d'-vectors, keyed by beta

    // level 1: N_{1_{cols[kc]}}[l'] = i * sum_j Adj[kc][j] * dzeta_{rows[j]} fbar_{l'}
    for (size_t kc = 0; kc < s; ++kc) {
        Expo e(beta.size(), 0);
        e[static_cast<size_t>(cols[kc])] = 1;
        SeriesVector entry;
        for (int l = 0; l < h.target().d(); ++l) {
            Series acc = Series::zero(B.frame, B.fb[0].order() - 1);
            for (size_t j = 0; j < s; ++j) {
                Series v = B.fb[static_cast<size_t>(l)].derive(fr.zeta[static_cast<size_t>(rows[j])]);
                acc = acc + Adj[kc][j].truncated(acc.order()) * v;
            }
            entry.push_back(acc.scaled(I));
        }
        N.emplace(e, std::move(entry));
    }

    // climb levels: from N_beta build N_{beta+1_k} for selected k
    std::function<SeriesVector(const Expo&)> numerator = [&](const Expo& bx) -> SeriesVector {
        auto it = N.find(bx);
        if (it != N.end()) return it->second;
        // predecessor: lowest selected index with positive entry
        size_t j = 0;
        while (j < bx.size() && bx[j] == 0) ++j;
        Expo pred = bx;
        pred[j] -= 1;
        SeriesVector Np = numerator(pred);
        check_budget(Np[0].order(), "theta_beta_numerator");
        const int bprev = total(pred);
        // v_r = Delta * dzeta_r N - (2b-1) N * dzeta_r Delta, r over selected rows
        std::vector<SeriesVector> vs;  // per l'
        const int out_order = Np[0].order() - 1;
        for (int l = 0; l < h.target().d(); ++l) {
            SeriesVector v;
            for (size_t r = 0; r < s; ++r) {
                const std::string& zr = fr.zeta[static_cast<size_t>(rows[r])];
                Series t1 = Delta.truncated(out_order) * Np[static_cast<size_t>(l)].derive(zr);
                Series t2 = Np[static_cast<size_t>(l)].truncated(out_order) *
                            Delta.derive(zr).truncated(out_order);
                v.push_back(t1 - t2.scaled(GRat(2 * bprev - 1)));
            }
            vs.push_back(std::move(v));
        }
        // which selected column did we step in?
        size_t kc = 0;
        for (size_t k = 0; k < s; ++k)
            if (static_cast<size_t>(cols[k]) == j) kc = k;
        SeriesVector out;
        for (int l = 0; l < h.target().d(); ++l) {
            Series acc = Series::zero(B.frame, out_order);
            for (size_t r = 0; r < s; ++r)
                acc = acc + Adj[kc][r].truncated(out_order) * vs[static_cast<size_t>(l)][r];
            out.push_back(acc);
        }
        N.emplace(bx, out);
        return out;
    };

    return numerator(beta);
}

SeriesVector theta_beta_recursive(const FormalMap& h, const Expo& beta) {
    if (h.source().m() != h.target().m())
        throw SeriesError("theta_beta_recursive: invertible mode needs m = m'");
    BarSide B = make_bar_side(h);
    Series Delta = det(lbar_gbar_matrix(B, iota(h.source().m()), iota(h.target().m())));
    if (Delta.constant_term().is_zero())
        throw SeriesError("theta_beta_recursive: det(Lbar gbar)(0) = 0; use the minor variant");
    SeriesVector N = theta_beta_numerator(h, beta, iota(h.source().m()), iota(h.target().m()));
    const int b = total(beta);
    Series denom_inv = Delta.truncated(N[0].order()).inverted_unit().pow(
        static_cast<unsigned>(2 * b - 1));
    SeriesVector out;
    for (const auto& n : N) out.push_back(h.source().zchart_to_xichart(n * denom_inv));
    return out;
}

MinorVariantResult minor_variant(const FormalMap& h, const Expo& beta, const std::vector<int>& rows,
                                 const std::vector<int>& cols) {
    BarSide B = make_bar_side(h);
    const Frame& fr = h.source().frame();
    MinorVariantResult res;
    Series Delta = det(lbar_gbar_matrix(B, rows, cols));
    const int b = total(beta);

    res.rhs = theta_beta_numerator(h, beta, rows, cols);
    SeriesVector direct = theta_beta_direct_zchart(h, beta);
    const int out_order = res.rhs[0].order();
    Series dpow = Delta.truncated(out_order).pow(static_cast<unsigned>(2 * b - 1));
    for (const auto& t : direct) res.lhs.push_back(t.truncated(out_order) * dpow);

    // gamma#: Delta at w = z = 0 must survive as a series in zeta
    std::vector<Series> subs;
    for (const auto& v : fr.zchart) {
        if (std::find(fr.zeta.begin(), fr.zeta.end(), v) != fr.zeta.end())
            subs.push_back(Series::variable(fr.zeta, Delta.order(), v));
        else
            subs.push_back(Series::zero(fr.zeta, Delta.order()));
    }
    Series dz = Delta.composed(subs);
    if (dz.is_zero())
        throw SeriesError("minor_variant: no valid gamma# below the order bound");
    Expo best;
    bool have = false;
    for (const auto& [e, c] : dz.terms()) {
        if (!have || e < best) {
            best = e;
            have = true;
        }
    }
    res.gamma_sharp = best;
    return res;
}

SeriesVector conjugate_reflection_check(const FormalMap& h, const Expo& beta) {
    const GenericManifold& M = h.source();
    const GenericManifold& Mp = h.target();
    const Frame& fr = M.frame();
    const Frame& frp = Mp.frame();

    // unbarred side in the xi chart: ThetaBar'_{w'^beta}(gbar, g, fbar)
    SeriesVector g_xi, f_xi, gb_xi, fb_xi;
    for (const auto& c : h.g()) g_xi.push_back(M.t_series_to_xichart(c));
    for (const auto& c : h.f()) f_xi.push_back(M.t_series_to_xichart(c));
    SeriesVector hbar = h.conj_components();
    for (int j = 0; j < h.n_target(); ++j) {
        Series comp = hbar[static_cast<size_t>(j)].embedded(fr.xichart);
        if (j < Mp.m())
            gb_xi.push_back(comp);
        else
            fb_xi.push_back(comp);
    }
    SeriesVector theta_prime;  // in the xi chart
    for (int l = 0; l < Mp.d(); ++l) {
        Series tb = Mp.theta_bar()[static_cast<size_t>(l)];
        for (size_t k = 0; k < beta.size(); ++k)
            for (std::uint32_t rep = 0; rep < beta[k]; ++rep) tb = tb.derive(frp.w[k]);
        theta_prime.push_back(fill_target_slots(Mp, tb, g_xi, SeriesVector(static_cast<size_t>(Mp.d()),
                                                                            Series::zero(fr.xichart, tb.order())),
                                                gb_xi, fb_xi));
    }

    // barred side, sigma-conjugated into the z chart
    SeriesVector barred = theta_beta_direct(h, beta);  // xi chart
    SeriesVector out;
    for (int l = 0; l < Mp.d(); ++l) {
        Series lhs = M.xichart_to_zchart(theta_prime[static_cast<size_t>(l)]);
        Series rhs = sigma_conjugate(barred[static_cast<size_t>(l)].embedded(fr.ambient), fr);
        // the conjugate uses only (zeta, w, z): restrict to the z chart
        Series rhs_z = M.to_plain_zchart(rhs);
        out.push_back(lhs.truncated(std::min(lhs.order(), rhs_z.order())) -
                      rhs_z.truncated(std::min(lhs.order(), rhs_z.order())));
    }
    return out;
}

}  // namespace crsegre
