#include "crsegre/corpus.hpp"

#include <algorithm>

#include "crsegre/parse.hpp"

namespace crsegre {

namespace {

GenericManifold manifold_from_exprs(int m, int d, int order,
                                    const std::vector<std::string>& theta_bar_exprs) {
    Frame fr(m, d, false);
    SeriesVector tb;
    for (const auto& e : theta_bar_exprs) tb.push_back(parse_series(e, fr.ambient, order));
    return GenericManifold::from_theta_bar(m, d, order, tb);
}

FormalMap map_from_exprs(const GenericManifold& src, const GenericManifold& dst,
                         const std::vector<std::string>& h_exprs) {
    const Frame& fr = src.frame();
    SeriesVector g, f;
    for (int j = 0; j < dst.m() + dst.d(); ++j) {
        Series c = parse_series(h_exprs[static_cast<size_t>(j)], fr.t, src.order());
        if (j < dst.m())
            g.push_back(c);
        else
            f.push_back(c);
    }
    return FormalMap(src, dst, g, f);
}

RatMatrix rat_inverse(RatMatrix a) {
    const size_t n = a.size();
    RatMatrix inv(n, std::vector<GRat>(n, GRat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = GRat(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw SeriesError("transform: singular linear change");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        GRat p = a[col][col].inv();
        for (size_t c = 0; c < n; ++c) {
            a[col][c] *= p;
            inv[col][c] *= p;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            GRat f = a[r][col];
            for (size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// linear combination sum_k mat[i][k] * vec[k]
SeriesVector mat_apply(const RatMatrix& mat, const SeriesVector& vec) {
    SeriesVector out;
    for (size_t i = 0; i < mat.size(); ++i) {
        Series acc = Series::zero(vec[0].vars(), vec[0].order());
        for (size_t k = 0; k < vec.size(); ++k) acc = acc + vec[k].scaled(mat[i][k]);
        out.push_back(acc);
    }
    return out;
}

}  // namespace

Corpus build_corpus(int order) {
    Corpus c;

    c.manifolds["hq"] = manifold_from_exprs(1, 1, order, {"w1*zeta1"});
    c.manifolds["flat"] = manifold_from_exprs(1, 1, order, {"0"});
    c.manifolds["quartic"] = manifold_from_exprs(1, 1, order, {"w1^2*zeta1^2"});
    c.manifolds["twisted"] =
        manifold_from_exprs(2, 1, order, {"w1*zeta1 + w1*zeta1*w2*zeta2"});
    c.manifolds["target_a1"] =
        manifold_from_exprs(2, 1, order, {"w1*zeta1 + w1^2*zeta2 + zeta1^2*w2"});
    c.manifolds["target_a2"] =
        manifold_from_exprs(2, 1, order, {"w1*zeta1 + w1^3*zeta2^2 + zeta1^3*w2^2"});
    c.manifolds["quartic3"] =
        manifold_from_exprs(2, 1, order, {"w1^2*zeta1^2 + w1*zeta2^2 + zeta1*w2^2"});
    c.manifolds["halfflat"] =
        manifold_from_exprs(1, 2, order, {"w1*zeta1 + w1^2*zeta1^2*xi2", "0"});

    // rational-graph hypersurface: y = |z1|^2 |1 + z1 zbar2|^2 / (1 + Re(z1 zbar2))
    //                                  - x Im(z1 zbar2) / (1 + Re(z1 zbar2))
    {
        Frame fr(2, 1, false);
        std::vector<std::string> gv = fr.w;
        gv.insert(gv.end(), fr.zeta.begin(), fr.zeta.end());
        gv.insert(gv.end(), fr.z.begin(), fr.z.end());
        Series P = parse_series("w1*zeta2", gv, order);
        Series Pb = parse_series("zeta1*w2", gv, order);
        Series one = Series::constant(gv, order, GRat(1));
        Series x = Series::variable(gv, order, "z1");
        Series lead = parse_series("w1*zeta1", gv, order) * (one + P) * (one + Pb);
        Series imterm = x * (P - Pb).scaled(GRat::i() * GRat(1, 2));
        Series denom_inv = (one + (P + Pb).scaled(GRat(1, 2))).inverted_unit();
        Series hgraph = (lead + imterm) * denom_inv;
        c.manifolds["ratgraph"] = theta_from_graph(2, 1, {hgraph}, order);
    }

    c.maps.emplace("embed_a1", map_from_exprs(c.manifolds["hq"], c.manifolds["target_a1"],
                                              {"w1", "0", "z1"}));
    c.maps.emplace("embed_a2", map_from_exprs(c.manifolds["hq"], c.manifolds["target_a2"],
                                              {"w1", "0", "z1"}));
    c.maps.emplace("embed_quartic", map_from_exprs(c.manifolds["quartic"], c.manifolds["quartic3"],
                                                   {"w1", "0", "z1"}));
    return c;
}

GenericManifold random_graph_manifold(int m, int d, int order, Rng& rng) {
    Frame fr(m, d, false);
    std::vector<std::string> gv = fr.w;
    gv.insert(gv.end(), fr.zeta.begin(), fr.zeta.end());
    gv.insert(gv.end(), fr.z.begin(), fr.z.end());

    SeriesVector h;
    for (int j = 0; j < d; ++j) {
        Series comp = Series::zero(gv, order);
        const int terms = static_cast<int>(rng.in_range(2, 4));
        for (int t = 0; t < terms; ++t) {
            // exponents for w^beta zetabar^alpha x^k with total degree in [2, 4]
            Expo beta(static_cast<size_t>(m), 0), alpha(static_cast<size_t>(m), 0),
                xk(static_cast<size_t>(d), 0);
            int deg = 0;
            const int want = static_cast<int>(rng.in_range(2, 4));
            while (deg < want) {
                int slot = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * m + d)));
                if (slot < m)
                    beta[static_cast<size_t>(slot)] += 1;
                else if (slot < 2 * m)
                    alpha[static_cast<size_t>(slot - m)] += 1;
                else
                    xk[static_cast<size_t>(slot - 2 * m)] += 1;
                ++deg;
            }
            GRat coeff = rng.small_grat_nonzero(8);
            Expo e1(gv.size(), 0), e2(gv.size(), 0);
            for (int i = 0; i < m; ++i) {
                e1[static_cast<size_t>(i)] = beta[static_cast<size_t>(i)];
                e1[static_cast<size_t>(m + i)] = alpha[static_cast<size_t>(i)];
                e2[static_cast<size_t>(i)] = alpha[static_cast<size_t>(i)];
                e2[static_cast<size_t>(m + i)] = beta[static_cast<size_t>(i)];
            }
            for (int i = 0; i < d; ++i) {
                e1[static_cast<size_t>(2 * m + i)] = xk[static_cast<size_t>(i)];
                e2[static_cast<size_t>(2 * m + i)] = xk[static_cast<size_t>(i)];
            }
            comp = comp + Series::monomial(gv, order, e1, coeff) +
                   Series::monomial(gv, order, e2, coeff.conj());
        }
        h.push_back(comp);
    }
    return theta_from_graph(m, d, h, order);
}

GenericManifold transform_manifold(const GenericManifold& M, const RatMatrix& A, const RatMatrix& C) {
    const Frame& fr = M.frame();
    const int order = M.order();
    // reality of the transformed data needs a real normal-block change
    for (const auto& row : C)
        for (const auto& e : row)
            if (!e.is_real()) throw SeriesError("transform_manifold: C must be real");

    // substitution vectors over the same frame names
    SeriesVector w_new, zeta_new, xi_new;
    for (int i = 0; i < M.m(); ++i) {
        Series aw = Series::zero(fr.ambient, order);
        Series az = Series::zero(fr.ambient, order);
        for (int k = 0; k < M.m(); ++k) {
            aw = aw + Series::variable(fr.ambient, order, fr.w[static_cast<size_t>(k)])
                          .scaled(A[static_cast<size_t>(i)][static_cast<size_t>(k)]);
            az = az + Series::variable(fr.ambient, order, fr.zeta[static_cast<size_t>(k)])
                          .scaled(A[static_cast<size_t>(i)][static_cast<size_t>(k)].conj());
        }
        w_new.push_back(aw);
        zeta_new.push_back(az);
    }
    for (int j = 0; j < M.d(); ++j) {
        Series cx = Series::zero(fr.ambient, order);
        for (int k = 0; k < M.d(); ++k)
            cx = cx + Series::variable(fr.ambient, order, fr.xi[static_cast<size_t>(k)])
                          .scaled(C[static_cast<size_t>(j)][static_cast<size_t>(k)]);
        xi_new.push_back(cx);
    }
    std::vector<Series> subs;
    for (const auto& v : fr.ambient) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
        auto ixi = std::find(fr.xi.begin(), fr.xi.end(), v);
        if (iw != fr.w.end())
            subs.push_back(w_new[static_cast<size_t>(iw - fr.w.begin())]);
        else if (izt != fr.zeta.end())
            subs.push_back(zeta_new[static_cast<size_t>(izt - fr.zeta.begin())]);
        else if (ixi != fr.xi.end())
            subs.push_back(xi_new[static_cast<size_t>(ixi - fr.xi.begin())]);
        else
            subs.push_back(Series::variable(fr.ambient, order, v));
    }
    SeriesVector composed;
    for (const auto& tb : M.theta_bar()) composed.push_back(tb.composed(subs));
    SeriesVector tb_new = mat_apply(rat_inverse(C), composed);
    return GenericManifold::from_theta_bar(M.m(), M.d(), order, tb_new);
}

FormalMap transform_map(const FormalMap& h, const RatMatrix& A, const RatMatrix& C,
                        const RatMatrix& Ap, const RatMatrix& Cp) {
    GenericManifold src = transform_manifold(h.source(), A, C);
    GenericManifold dst = transform_manifold(h.target().reframed(false), Ap, Cp);
    const Frame& fr = h.source().frame();
    const int order = h.order();

    std::vector<Series> subs;
    for (const auto& v : fr.t) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        Series acc = Series::zero(fr.t, order);
        if (iw != fr.w.end()) {
            size_t i = static_cast<size_t>(iw - fr.w.begin());
            for (int k = 0; k < h.source().m(); ++k)
                acc = acc + Series::variable(fr.t, order, fr.w[static_cast<size_t>(k)])
                                .scaled(A[i][static_cast<size_t>(k)]);
        } else {
            auto iz = std::find(fr.z.begin(), fr.z.end(), v);
            size_t j = static_cast<size_t>(iz - fr.z.begin());
            for (int k = 0; k < h.source().d(); ++k)
                acc = acc + Series::variable(fr.t, order, fr.z[static_cast<size_t>(k)])
                                .scaled(C[j][static_cast<size_t>(k)]);
        }
        subs.push_back(acc);
    }
    SeriesVector gc, fc;
    for (const auto& comp : h.g()) gc.push_back(comp.composed(subs));
    for (const auto& comp : h.f()) fc.push_back(comp.composed(subs));
    SeriesVector g_new = mat_apply(rat_inverse(Ap), gc);
    SeriesVector f_new = mat_apply(rat_inverse(Cp), fc);
    return FormalMap(src, dst, g_new, f_new);
}

}  // namespace crsegre
