#include "crsegre/propagate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace crsegre {

namespace {

int total(const Expo& e) {
    int s = 0;
    for (auto x : e) s += static_cast<int>(x);
    return s;
}

// substitutions sending an rframe series onto a chain point, with the primed
// slot filled by h o chain
std::vector<Series> chain_subs(ReflectionSystem& R, const PointOnM& p,
                               const std::vector<std::string>& params, int order) {
    const Frame& fr = R.map().source().frame();
    const Frame& frp = R.map().target().frame();

    // h o (w,z)-part of the point
    std::vector<Series> t_subs;
    for (int i = 0; i < R.map().source().m(); ++i) t_subs.push_back(p.w[static_cast<size_t>(i)]);
    for (int j = 0; j < R.map().source().d(); ++j) t_subs.push_back(p.z[static_cast<size_t>(j)]);
    SeriesVector h_on;
    for (int j = 0; j < R.map().n_target(); ++j)
        h_on.push_back(R.map().component(j).composed(t_subs));

    std::vector<Series> subs;
    for (const auto& v : R.rframe()) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto iz = std::find(fr.z.begin(), fr.z.end(), v);
        auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
        auto ipw = std::find(frp.w.begin(), frp.w.end(), v);
        auto ipz = std::find(frp.z.begin(), frp.z.end(), v);
        if (iw != fr.w.end())
            subs.push_back(p.w[static_cast<size_t>(iw - fr.w.begin())]);
        else if (iz != fr.z.end())
            subs.push_back(p.z[static_cast<size_t>(iz - fr.z.begin())]);
        else if (izt != fr.zeta.end())
            subs.push_back(p.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
        else if (ipw != frp.w.end())
            subs.push_back(h_on[static_cast<size_t>(ipw - frp.w.begin())]);
        else if (ipz != frp.z.end())
            subs.push_back(h_on[static_cast<size_t>(R.map().target().m() + (ipz - frp.z.begin()))]);
        else
            throw SeriesError("chain_subs: unexpected variable " + v);
    }
    (void)params;
    (void)order;
    return subs;
}

}  // namespace

FundamentalSystem default_fundamental_system(ReflectionSystem& R, const NondegResult& witness) {
    if (!witness.verdict.definite_true())
        throw PreconditionError("default_fundamental_system: no S-nondegeneracy witness");
    FundamentalSystem sys;
    sys.witness_rows = witness.witness;
    for (const auto& [g, lp] : witness.witness) {
        sys.X.push_back(R.R(g)[static_cast<size_t>(lp)]);
        sys.kappa0 = std::max(sys.kappa0, total(g));
        // re-verify the vanishing identity (7.3-style)
        if (!R.R_on_map(g)[static_cast<size_t>(lp)].is_zero())
            throw SeriesError("default_fundamental_system: witness row fails the vanishing identity");
    }
    // re-verify the determinant condition on the Segre variety
    SeriesMatrix mat;
    int min_order = 0;
    bool first = true;
    for (const auto& [g, lp] : witness.witness) {
        auto row = R.segre_row(g, lp);
        if (first || row[0].order() < min_order) min_order = row[0].order();
        first = false;
        mat.push_back(row);
    }
    for (auto& row : mat)
        for (auto& e : row) e = e.truncated(min_order);
    if (det(mat).is_zero())
        throw SeriesError("default_fundamental_system: witness determinant vanishes");
    return sys;
}

SeriesVector verify_on_chain(const FundamentalSystem& sys, ReflectionSystem& R, int k) {
    const GenericManifold& M = R.map().source();
    ChainMap chain = chain_map(M, ChainWord{true, k});

    // transversal prefix with fresh parameters
    std::vector<std::string> params = chain.params;
    for (int j = 1; j <= M.d(); ++j) params.push_back("qxi" + std::to_string(j));
    auto lift = [&](const SeriesVector& v) {
        SeriesVector out;
        for (const auto& s : v) out.push_back(s.embedded(params));
        return out;
    };
    PointOnM p;
    p.w = lift(chain.gamma.w);
    p.z = lift(chain.gamma.z);
    p.zeta = lift(chain.gamma.zeta);
    p.xi = lift(chain.gamma.xi);
    SeriesVector qparam;
    for (int j = 1; j <= M.d(); ++j)
        qparam.push_back(Series::variable(params, chain.order, "qxi" + std::to_string(j)));
    PointOnM pref = flow(M, FieldKind::UpsilonBar, p, qparam);

    SeriesVector residuals;
    for (const PointOnM* pt : {&p, &pref}) {
        auto subs = chain_subs(R, *pt, params, chain.order);
        for (const auto& x : sys.X) residuals.push_back(x.composed(subs));
    }
    return residuals;
}

ChainJetTable chain_jet_table_direct(const FormalMap& h, int k, int kappa) {
    const GenericManifold& M = h.source();
    const Frame& fr = M.frame();
    ChainMap chain = chain_map(M, ChainWord{true, k});
    ChainJetTable T;
    T.k = k;
    T.kappa = kappa;

    // unbarred half: xi-chart lifts differentiated by (w | xi)
    std::vector<Series> xichart_subs, zchart_subs;
    for (const auto& v : fr.xichart) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
        if (iw != fr.w.end())
            xichart_subs.push_back(chain.gamma.w[static_cast<size_t>(iw - fr.w.begin())]);
        else if (izt != fr.zeta.end())
            xichart_subs.push_back(chain.gamma.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
        else {
            auto ixi = std::find(fr.xi.begin(), fr.xi.end(), v);
            xichart_subs.push_back(chain.gamma.xi[static_cast<size_t>(ixi - fr.xi.begin())]);
        }
    }
    for (const auto& v : fr.zchart) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto iz = std::find(fr.z.begin(), fr.z.end(), v);
        if (iw != fr.w.end())
            zchart_subs.push_back(chain.gamma.w[static_cast<size_t>(iw - fr.w.begin())]);
        else if (iz != fr.z.end())
            zchart_subs.push_back(chain.gamma.z[static_cast<size_t>(iz - fr.z.begin())]);
        else {
            auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
            zchart_subs.push_back(chain.gamma.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
        }
    }

    SeriesVector hbar = h.conj_components();
    const int m = M.m(), d = M.d();
    for (int j = 0; j < h.n_target(); ++j) {
        Series lift_h = M.t_series_to_xichart(h.component(j));
        Series lift_hb = M.tau_series_to_zchart(hbar[static_cast<size_t>(j)]);
        for (const auto& ge : [&] {
                 std::vector<Expo> out;
                 std::vector<Expo> cur{Expo(static_cast<size_t>(m + d), 0)};
                 out.push_back(cur[0]);
                 for (int deg = 1; deg <= kappa; ++deg) {
                     std::set<Expo> next;
                     for (const auto& e : cur)
                         for (int i = 0; i < m + d; ++i) {
                             Expo ne = e;
                             ne[static_cast<size_t>(i)] += 1;
                             next.insert(ne);
                         }
                     cur.assign(next.begin(), next.end());
                     out.insert(out.end(), cur.begin(), cur.end());
                 }
                 return out;
             }()) {
            // unbarred: differentiate by w (first m slots) and xi (last d)
            Series dh = lift_h;
            Series dhb = lift_hb;
            for (int i = 0; i < m; ++i)
                for (std::uint32_t r = 0; r < ge[static_cast<size_t>(i)]; ++r) {
                    dh = dh.derive(fr.w[static_cast<size_t>(i)]);
                    dhb = dhb.derive(fr.zeta[static_cast<size_t>(i)]);
                }
            for (int jz = 0; jz < d; ++jz)
                for (std::uint32_t r = 0; r < ge[static_cast<size_t>(m + jz)]; ++r) {
                    dh = dh.derive(fr.xi[static_cast<size_t>(jz)]);
                    dhb = dhb.derive(fr.z[static_cast<size_t>(jz)]);
                }
            std::vector<Series> xs, zs;
            for (const auto& s : xichart_subs) xs.push_back(s.truncated(dh.order()));
            for (const auto& s : zchart_subs) zs.push_back(s.truncated(dhb.order()));
            T.entries[{false, j, ge}] = dh.composed(xs);
            T.entries[{true, j, ge}] = dhb.composed(zs);
        }
    }
    return T;
}

SeriesVector step1_solve_jets(const FundamentalSystem& sys, ReflectionSystem& R, int k,
                              const Expo& gamma, const Expo& delta) {
    const GenericManifold& M = R.map().source();
    const Frame& fr = M.frame();
    const int np = static_cast<int>(R.tprime_vars().size());
    if (static_cast<int>(sys.X.size()) != np)
        throw SeriesError("step1_solve_jets: system must have n' rows");
    if (total(gamma) + total(delta) < 1)
        throw SeriesError("step1_solve_jets: need at least one derivation");
    ChainMap chain = chain_map(M, ChainWord{true, k});

    // coefficient matrix X_{j,c} = dX_j/dt'_c composed on the chain
    auto subs = chain_subs(R, chain.gamma, chain.params, chain.order);
    SeriesMatrix X;
    int min_order = 0;
    bool first = true;
    for (const auto& xrow : sys.X) {
        std::vector<Series> row;
        for (const auto& tv : R.tprime_vars()) {
            Series dr = xrow.derive(tv);
            std::vector<Series> s;
            for (const auto& sub : subs) s.push_back(sub.truncated(dr.order()));
            row.push_back(dr.composed(s));
        }
        if (first || row[0].order() < min_order) min_order = row[0].order();
        first = false;
        X.push_back(std::move(row));
    }
    for (auto& row : X)
        for (auto& e : row) e = e.truncated(min_order);

    // Segre specialisation: only the last tangential block stays free
    {
        std::vector<std::string> last_block;
        for (const auto& pvar : chain.params)
            if (pvar.rfind("p" + std::to_string(k) + "w", 0) == 0 ||
                pvar.rfind("p" + std::to_string(k) + "zeta", 0) == 0)
                last_block.push_back(pvar);
        SeriesMatrix Xs;
        for (const auto& row : X) {
            std::vector<Series> r;
            for (const auto& e : row) {
                std::vector<Series> zsubs;
                for (const auto& pvar : chain.params) {
                    bool keep =
                        std::find(last_block.begin(), last_block.end(), pvar) != last_block.end();
                    zsubs.push_back(keep ? Series::variable(chain.params, e.order(), pvar)
                                         : Series::zero(chain.params, e.order()));
                }
                r.push_back(e.composed(zsubs));
            }
            Xs.push_back(std::move(r));
        }
        if (det(Xs).is_zero())
            throw SeriesError("step1_solve_jets: specialised determinant vanishes");
    }

    // direct frame jets of h on the chain
    SeriesVector H_direct;
    std::vector<Series> xichart_subs;
    for (const auto& v : fr.xichart) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
        if (iw != fr.w.end())
            xichart_subs.push_back(chain.gamma.w[static_cast<size_t>(iw - fr.w.begin())]);
        else if (izt != fr.zeta.end())
            xichart_subs.push_back(chain.gamma.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
        else {
            auto ixi = std::find(fr.xi.begin(), fr.xi.end(), v);
            xichart_subs.push_back(chain.gamma.xi[static_cast<size_t>(ixi - fr.xi.begin())]);
        }
    }
    for (int c = 0; c < np; ++c) {
        Series lift = M.t_series_to_xichart(R.map().component(c));
        for (size_t i = 0; i < gamma.size(); ++i)
            for (std::uint32_t r = 0; r < gamma[i]; ++r) lift = lift.derive(fr.w[i]);
        for (size_t i = 0; i < delta.size(); ++i)
            for (std::uint32_t r = 0; r < delta[i]; ++r) lift = lift.derive(fr.xi[i]);
        std::vector<Series> s;
        for (const auto& sub : xichart_subs) s.push_back(sub.truncated(lift.order()));
        H_direct.push_back(lift.composed(s).truncated(std::min(min_order, lift.order())));
    }
    for (auto& hc : H_direct) hc = hc.truncated(min_order);

    // remainder assembled from the identity: A = -X H, then the adjoint and
    // exact-division route must reproduce the direct jets
    SeriesVector A;
    for (int j = 0; j < np; ++j) {
        Series acc = Series::zero(chain.params, min_order);
        for (int c = 0; c < np; ++c) acc = acc + X[static_cast<size_t>(j)][static_cast<size_t>(c)] *
                                                     H_direct[static_cast<size_t>(c)];
        A.push_back(-acc);
    }
    Series b = det(X);
    if (b.is_zero()) throw SeriesError("step1_solve_jets: det X vanishes at this order");
    SeriesMatrix adj = adjugate(X);
    SeriesVector solved;
    for (int c = 0; c < np; ++c) {
        Series a = Series::zero(chain.params, min_order);
        for (int j = 0; j < np; ++j)
            a = a - adj[static_cast<size_t>(c)][static_cast<size_t>(j)] * A[static_cast<size_t>(j)];
        Series quotient = divide_exact(a, b);
        solved.push_back(quotient);
        if (quotient != H_direct[static_cast<size_t>(c)].truncated(quotient.order()))
            throw SeriesError("step1_solve_jets: solved jet disagrees with direct composition");
    }
    return solved;
}

ChainJetTable step2_transfer(const FundamentalSystem& sys, ReflectionSystem& R, int k, int kappa) {
    const GenericManifold& M = R.map().source();
    const Frame& fr = M.frame();
    const Frame& frp = R.map().target().frame();
    ChainMap chain = chain_map(M, ChainWord{true, k + 1});

    // conjugate identities: sigma-conjugate each X_lambda into the xi chart
    // with conjugated target slots
    std::vector<std::string> cframe = fr.xichart;
    for (const auto& v : frp.zeta) cframe.push_back(v);
    for (const auto& v : frp.xi) cframe.push_back(v);

    SeriesVector hbar = R.map().conj_components();
    SeriesVector hbar_on;  // hbar o tau-part of the chain
    {
        std::vector<Series> tau_subs;
        for (int i = 0; i < M.m(); ++i) tau_subs.push_back(chain.gamma.zeta[static_cast<size_t>(i)]);
        for (int j = 0; j < M.d(); ++j) tau_subs.push_back(chain.gamma.xi[static_cast<size_t>(j)]);
        for (const auto& c : hbar) hbar_on.push_back(c.composed(tau_subs));
    }

    SeriesMatrix Xbar_jac;
    SeriesVector residuals;
    int min_order = 0;
    bool first = true;
    for (const auto& x : sys.X) {
        // rename w<->zeta, z<->xi, wp->zetap, zp->xip and conjugate
        std::vector<std::string> renames;
        for (const auto& v : x.vars()) {
            auto iw = std::find(fr.w.begin(), fr.w.end(), v);
            auto iz = std::find(fr.z.begin(), fr.z.end(), v);
            auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
            auto ipw = std::find(frp.w.begin(), frp.w.end(), v);
            auto ipz = std::find(frp.z.begin(), frp.z.end(), v);
            if (iw != fr.w.end())
                renames.push_back(fr.zeta[static_cast<size_t>(iw - fr.w.begin())]);
            else if (iz != fr.z.end())
                renames.push_back(fr.xi[static_cast<size_t>(iz - fr.z.begin())]);
            else if (izt != fr.zeta.end())
                renames.push_back(fr.w[static_cast<size_t>(izt - fr.zeta.begin())]);
            else if (ipw != frp.w.end())
                renames.push_back(frp.zeta[static_cast<size_t>(ipw - frp.w.begin())]);
            else if (ipz != frp.z.end())
                renames.push_back(frp.xi[static_cast<size_t>(ipz - frp.z.begin())]);
            else
                throw SeriesError("step2_transfer: unexpected variable " + v);
        }
        Series xbar = x.conjugated().renamed(renames).embedded(cframe);

        // compose with the chain; tau' slots get hbar o chain
        std::vector<Series> subs;
        for (const auto& v : cframe) {
            auto iw = std::find(fr.w.begin(), fr.w.end(), v);
            auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
            auto ixi = std::find(fr.xi.begin(), fr.xi.end(), v);
            auto ipzt = std::find(frp.zeta.begin(), frp.zeta.end(), v);
            auto ipxi = std::find(frp.xi.begin(), frp.xi.end(), v);
            if (iw != fr.w.end())
                subs.push_back(chain.gamma.w[static_cast<size_t>(iw - fr.w.begin())]);
            else if (izt != fr.zeta.end())
                subs.push_back(chain.gamma.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
            else if (ixi != fr.xi.end())
                subs.push_back(chain.gamma.xi[static_cast<size_t>(ixi - fr.xi.begin())]);
            else if (ipzt != frp.zeta.end())
                subs.push_back(hbar_on[static_cast<size_t>(ipzt - frp.zeta.begin())]);
            else
                subs.push_back(
                    hbar_on[static_cast<size_t>(R.map().target().m() + (ipxi - frp.xi.begin()))]);
        }
        std::vector<Series> subs_t;
        for (const auto& s : subs) subs_t.push_back(s.truncated(xbar.order()));
        residuals.push_back(xbar.composed(subs_t));

        // Jacobian row in the conjugated target slot
        std::vector<Series> jrow;
        for (const auto& v : frp.zeta) {
            Series dr = xbar.derive(v);
            std::vector<Series> st;
            for (const auto& s : subs) st.push_back(s.truncated(dr.order()));
            jrow.push_back(dr.composed(st));
        }
        for (const auto& v : frp.xi) {
            Series dr = xbar.derive(v);
            std::vector<Series> st;
            for (const auto& s : subs) st.push_back(s.truncated(dr.order()));
            jrow.push_back(dr.composed(st));
        }
        if (first || jrow[0].order() < min_order) min_order = jrow[0].order();
        first = false;
        Xbar_jac.push_back(std::move(jrow));
    }
    for (const auto& r : residuals)
        if (!r.is_zero()) throw SeriesError("step2_transfer: conjugate identity fails on the chain");
    for (auto& row : Xbar_jac)
        for (auto& e : row) e = e.truncated(min_order);

    // determinant condition with only the last block free
    {
        std::vector<std::string> last_block;
        const std::string stem_zeta = "p" + std::to_string(k + 1) + "zeta";
        const std::string stem_w = "p" + std::to_string(k + 1) + "w";
        for (const auto& pvar : chain.params)
            if (pvar.rfind(stem_zeta, 0) == 0 || pvar.rfind(stem_w, 0) == 0) last_block.push_back(pvar);
        SeriesMatrix Xs;
        for (const auto& row : Xbar_jac) {
            std::vector<Series> r;
            for (const auto& e : row) {
                std::vector<Series> zsubs;
                for (const auto& pvar : chain.params) {
                    bool keep =
                        std::find(last_block.begin(), last_block.end(), pvar) != last_block.end();
                    zsubs.push_back(keep ? Series::variable(chain.params, e.order(), pvar)
                                         : Series::zero(chain.params, e.order()));
                }
                r.push_back(e.composed(zsubs));
            }
            Xs.push_back(std::move(r));
        }
        if (det(Xs).is_zero())
            throw SeriesError("step2_transfer: conjugate determinant vanishes when specialised");
    }

    return chain_jet_table_direct(R.map(), k + 1, kappa);
}

ChainJetTable iterate_solvable(const SolvabilityCertificate& cert, const FormalMap& h, int k,
                               int kappa) {
    const GenericManifold& M = h.source();
    const Frame& fr = M.frame();
    ChainMap chain = chain_map(M, ChainWord{true, k});
    ChainJetTable T;
    T.k = k;
    T.kappa = kappa;

    std::vector<Series> xichart_subs;
    for (const auto& v : fr.xichart) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
        if (iw != fr.w.end())
            xichart_subs.push_back(chain.gamma.w[static_cast<size_t>(iw - fr.w.begin())]);
        else if (izt != fr.zeta.end())
            xichart_subs.push_back(chain.gamma.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
        else {
            auto ixi = std::find(fr.xi.begin(), fr.xi.end(), v);
            xichart_subs.push_back(chain.gamma.xi[static_cast<size_t>(ixi - fr.xi.begin())]);
        }
    }

    const int m = M.m(), d = M.d();
    for (int j = 0; j < h.n_target(); ++j) {
        // certificate component over the z chart, moved to the xi chart
        Series a = M.zchart_to_xichart(cert.A[static_cast<size_t>(j)]);
        std::vector<Expo> idx;
        {
            std::vector<Expo> cur{Expo(static_cast<size_t>(m + d), 0)};
            idx.push_back(cur[0]);
            for (int deg = 1; deg <= kappa; ++deg) {
                std::set<Expo> next;
                for (const auto& e : cur)
                    for (int i = 0; i < m + d; ++i) {
                        Expo ne = e;
                        ne[static_cast<size_t>(i)] += 1;
                        next.insert(ne);
                    }
                cur.assign(next.begin(), next.end());
                idx.insert(idx.end(), cur.begin(), cur.end());
            }
        }
        for (const auto& ge : idx) {
            Series da = a;
            for (int i = 0; i < m; ++i)
                for (std::uint32_t r = 0; r < ge[static_cast<size_t>(i)]; ++r)
                    da = da.derive(fr.w[static_cast<size_t>(i)]);
            for (int jz = 0; jz < d; ++jz)
                for (std::uint32_t r = 0; r < ge[static_cast<size_t>(m + jz)]; ++r)
                    da = da.derive(fr.xi[static_cast<size_t>(jz)]);
            std::vector<Series> s;
            for (const auto& sub : xichart_subs) s.push_back(sub.truncated(da.order()));
            T.entries[{false, j, ge}] = da.composed(s);
        }
    }
    return T;
}

Series monic_lift(const MonicPolynomial& P, const Series& h_jet, int target_order) {
    const auto& vars = h_jet.vars();
    const int n0 = h_jet.order();
    if (target_order < n0) throw SeriesError("monic_lift: target below the jet order");
    const unsigned N = static_cast<unsigned>(P.coeffs.size());

    auto eval_poly = [&](const std::vector<Series>& coeffs, const Series& x) {
        // X^n + sum coeffs[k-1] X^(n-k), all truncated to x.order()
        const unsigned n = static_cast<unsigned>(coeffs.size());
        Series acc = x.pow(n);
        for (unsigned k = 1; k <= n; ++k) {
            Series c = coeffs[k - 1].embedded(vars);
            c = c.truncated(std::min(c.order(), x.order()));
            if (c.order() < x.order()) c = c.extended_exactly(x.order());
            acc = acc + c * x.pow(n - k);
        }
        return acc;
    };
    auto derivative_coeffs = [&](const std::vector<Series>& coeffs) {
        // d/dX of X^n + sum a_k X^(n-k), renormalised monic:
        // n X^(n-1) + sum (n-k) a_k X^(n-1-k) -> divide by n
        const unsigned n = static_cast<unsigned>(coeffs.size());
        std::vector<Series> out;
        for (unsigned k = 1; k < n; ++k) {
            GRat factor(static_cast<long>(n - k), static_cast<long>(n));
            out.push_back(coeffs[k - 1].scaled(factor));
        }
        return out;
    };

    std::vector<Series> coeffs = P.coeffs;
    Series h = h_jet;
    // require P(h_jet) = 0 at the jet order
    if (!eval_poly(coeffs, h).is_zero())
        throw SeriesError("monic_lift: inconsistent jet, P(h) != 0 at the jet order");

    // separant, replacing P by P' while it annihilates the jet entirely
    unsigned degree = N;
    for (;;) {
        if (degree == 0) throw SeriesError("monic_lift: separant exhausted");
        // d/dX (X^deg + sum a_k X^(deg-k)) = deg X^(deg-1) + sum (deg-k) a_k X^(deg-1-k)
        Series acc = h.pow(degree - 1).scaled(GRat(static_cast<long>(degree)));
        for (unsigned k = 1; k < degree; ++k) {
            Series c = coeffs[k - 1].embedded(vars).truncated(h.order());
            acc = acc + c.scaled(GRat(static_cast<long>(degree - k))) * h.pow(degree - 1 - k);
        }
        if (!acc.is_zero()) break;
        // replace P by its X-derivative (renormalised monic)
        coeffs = derivative_coeffs(coeffs);
        degree -= 1;
        if (!eval_poly(coeffs, h).is_zero())
            throw SeriesError("monic_lift: derivative polynomial no longer annihilates the jet");
    }

    // degree-by-degree extension
    for (int ord = n0; ord < target_order; ++ord) {
        Series hx = h.extended_exactly(ord + 1);
        // residual and separant at the extended order
        Series res = eval_poly(coeffs, hx);
        if (res.is_zero()) {
            h = hx;
            continue;
        }
        Series sep = hx.pow(degree - 1).scaled(GRat(static_cast<long>(degree)));
        for (unsigned k = 1; k < degree; ++k) {
            Series c = coeffs[k - 1].embedded(vars);
            c = c.truncated(std::min(c.order(), hx.order()));
            if (c.order() < hx.order()) c = c.extended_exactly(hx.order());
            sep = sep + c.scaled(GRat(static_cast<long>(degree - k))) * hx.pow(degree - 1 - k);
        }
        if (sep.is_zero()) throw SeriesError("monic_lift: separant vanishes at this order");
        const int v = sep.valuation();
        // the unknown correction eta (homogeneous of degree ord) must cancel
        // the residual block at degree ord + v
        Series block = res.homogeneous_part(ord + v);
        Series low = sep.homogeneous_part(v);
        for (int dlow = 0; dlow < ord + v; ++dlow) {
            if (!res.homogeneous_part(dlow).is_zero())
                throw SeriesError("monic_lift: no consistent extension (residual below separant reach)");
        }
        if (block.is_zero()) {
            h = hx;
            continue;
        }
        Series eta = divide_exact(-block, low);
        h = hx + eta.truncated(ord + 1);
        if (!eval_poly(coeffs, h).truncated(ord + 1).is_zero())
            throw SeriesError("monic_lift: correction failed to cancel the residual");
    }
    return h;
}

ArtinCheck artin_hypothesis_check(const SeriesVector& R, const std::vector<std::string>& y_vars,
                                  const SeriesVector& g_hat) {
    ArtinCheck out;
    if (R.empty()) return out;
    const auto& vars = R[0].vars();
    std::vector<std::string> w_vars;
    for (const auto& v : vars)
        if (std::find(y_vars.begin(), y_vars.end(), v) == y_vars.end()) w_vars.push_back(v);
    if (g_hat.size() != y_vars.size())
        throw SeriesError("artin_hypothesis_check: solution arity mismatch");

    // residual precondition
    std::vector<Series> subs;
    for (const auto& v : vars) {
        auto iy = std::find(y_vars.begin(), y_vars.end(), v);
        if (iy == y_vars.end())
            subs.push_back(Series::variable(w_vars, R[0].order(), v));
        else
            subs.push_back(g_hat[static_cast<size_t>(iy - y_vars.begin())]);
    }
    for (const auto& r : R)
        if (!r.composed(subs).is_zero())
            throw PreconditionError("artin_hypothesis_check: R(w, g(w)) != 0");

    // Jacobian rows along the solution
    SeriesMatrix jac;
    for (const auto& r : R) {
        std::vector<Series> row;
        for (const auto& yv : y_vars) {
            Series dr = r.derive(yv);
            std::vector<Series> st;
            for (const auto& s : subs) st.push_back(s.truncated(dr.order()));
            row.push_back(dr.composed(st));
        }
        jac.push_back(std::move(row));
    }
    const int my = static_cast<int>(y_vars.size());
    std::vector<int> sel;
    std::function<bool(int)> rec = [&](int start) {
        if (static_cast<int>(sel.size()) == my) {
            SeriesMatrix sub;
            for (int i : sel) sub.push_back(jac[static_cast<size_t>(i)]);
            if (!det(sub).is_zero()) return true;
            return false;
        }
        for (int i = start; i < static_cast<int>(jac.size()); ++i) {
            sel.push_back(i);
            if (rec(i + 1)) return true;
            sel.pop_back();
        }
        return false;
    };
    if (rec(0)) {
        out.holds = true;
        out.witness_rows = sel;
    }
    return out;
}

DeterminationBound determination_polynomial(const MonicPolynomial& P, const SeriesVector& solutions,
                                            int nu_max) {
    // every family member must actually solve P
    const unsigned deg = static_cast<unsigned>(P.coeffs.size());
    for (const auto& sol : solutions) {
        Series acc = sol.pow(deg);
        for (unsigned k = 1; k <= deg; ++k) {
            Series c = P.coeffs[k - 1].embedded(sol.vars());
            c = c.truncated(std::min(c.order(), sol.order()));
            if (c.order() < sol.order()) c = c.extended_exactly(sol.order());
            acc = acc + c * sol.pow(deg - k);
        }
        if (!acc.is_zero())
            throw PreconditionError("determination_polynomial: a solution fails P");
    }
    DeterminationBound out;
    out.context = "polynomial";
    for (int nu = 0; nu <= nu_max; ++nu) {
        bool separated = true;
        for (size_t a = 0; a < solutions.size() && separated; ++a) {
            for (size_t b = a + 1; b < solutions.size() && separated; ++b) {
                const Series &f = solutions[a], &g = solutions[b];
                bool jets_equal = (f - g).truncated(std::min(nu + 1, f.order())).is_zero();
                bool full_equal = (f == g);
                if (jets_equal && !full_equal) {
                    separated = false;
                    out.trials.push_back("nu=" + std::to_string(nu) + " pair=(" + std::to_string(a) +
                                         "," + std::to_string(b) + ") agreement-to-nu without full agreement");
                }
            }
        }
        if (separated) {
            out.nu = nu;
            out.trials.push_back("nu=" + std::to_string(nu) + " no counterexample over " +
                                 std::to_string(solutions.size()) + " solutions");
            return out;
        }
    }
    return out;
}

DeterminationBound determination_maps(const std::vector<FormalMap>& family, int nu_max) {
    DeterminationBound out;
    out.context = "map-pair";
    if (family.empty()) return out;
    SegreTypeReport st = segre_multitype(family[0].source(), 3 * 2 * family[0].source().n(), 7);
    const int kmax = st.conclusive ? 2 * st.mu : 4;

    std::vector<ChainJetTable> tables;
    for (const auto& h : family) tables.push_back(chain_jet_table_direct(h, kmax, 0));

    for (int nu = 0; nu <= nu_max; ++nu) {
        bool ok = true;
        for (size_t a = 0; a < family.size() && ok; ++a) {
            for (size_t b = a + 1; b < family.size() && ok; ++b) {
                bool jets_equal = true;
                for (int j = 0; j < family[a].n_target() && jets_equal; ++j) {
                    Series diff = family[a].component(j) - family[b].component(j);
                    jets_equal = diff.truncated(std::min(nu + 1, diff.order())).is_zero();
                }
                if (!jets_equal) continue;
                // jets agree: the chain tables must agree in full
                bool tables_equal = true;
                for (const auto& [key, s] : tables[a].entries) {
                    auto it = tables[b].entries.find(key);
                    if (it == tables[b].entries.end() || !(s == it->second)) tables_equal = false;
                }
                bool full_equal = true;
                for (int j = 0; j < family[a].n_target(); ++j)
                    full_equal = full_equal && (family[a].component(j) == family[b].component(j));
                if (!tables_equal || !full_equal) {
                    ok = false;
                    out.trials.push_back("nu=" + std::to_string(nu) + " pair=(" + std::to_string(a) +
                                         "," + std::to_string(b) + ") jets agree but maps differ");
                }
            }
        }
        if (ok) {
            out.nu = nu;
            out.trials.push_back("nu=" + std::to_string(nu) + " no counterexample over family of " +
                                 std::to_string(family.size()));
            return out;
        }
    }
    return out;
}

}  // namespace crsegre
