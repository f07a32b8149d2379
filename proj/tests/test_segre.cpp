#include <doctest.h>

#include <algorithm>

#include "crsegre/corpus.hpp"
#include "crsegre/parse.hpp"
#include "crsegre/segre.hpp"

using namespace crsegre;

namespace {

bool all_zero(const SeriesVector& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

// a random on-M point over a one-parameter frame: pick rational w, zeta, z
// directions and solve xi from the manifold equation
PointOnM random_point(const GenericManifold& M, Rng& rng, const std::vector<std::string>& params) {
    const int order = M.order();
    PointOnM p = PointOnM::origin(M, params, order);
    Series t = Series::variable(params, order, params.at(0));
    for (auto& c : p.w) c = t.scaled(rng.small_grat(4));
    for (auto& c : p.zeta) c = t.scaled(rng.small_grat(4));
    for (auto& c : p.z) c = t.scaled(rng.small_grat(4));
    // xi := z - i Theta(w, zeta, z)
    const Frame& fr = M.frame();
    std::vector<Series> subs;
    for (const auto& v : fr.ambient) {
        auto iw = std::find(fr.w.begin(), fr.w.end(), v);
        auto iz = std::find(fr.z.begin(), fr.z.end(), v);
        auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
        if (iw != fr.w.end())
            subs.push_back(p.w[static_cast<size_t>(iw - fr.w.begin())]);
        else if (iz != fr.z.end())
            subs.push_back(p.z[static_cast<size_t>(iz - fr.z.begin())]);
        else if (izt != fr.zeta.end())
            subs.push_back(p.zeta[static_cast<size_t>(izt - fr.zeta.begin())]);
        else
            subs.push_back(Series::zero(params, order));
    }
    for (int j = 0; j < M.d(); ++j)
        p.xi[static_cast<size_t>(j)] =
            p.z[static_cast<size_t>(j)] -
            M.theta()[static_cast<size_t>(j)].composed(subs).scaled(GRat::i());
    return p;
}

SeriesVector fresh_params(const std::vector<std::string>& frame, int order,
                          const std::vector<std::string>& names) {
    SeriesVector out;
    for (const auto& n : names) out.push_back(Series::variable(frame, order, n));
    return out;
}

}  // namespace

TEST_CASE("flows: hand values on the hyperquadric") {
    Corpus c = build_corpus(8);
    const GenericManifold& M = c.manifolds["hq"];
    std::vector<std::string> pv{"p1w1", "p2zeta1", "p3w1"};
    PointOnM p0 = PointOnM::origin(M, pv, 8);

    PointOnM p1 = flow(M, FieldKind::L, p0, fresh_params(pv, 8, {"p1w1"}));
    CHECK(p1.w[0] == Series::variable(pv, 8, "p1w1"));
    CHECK(p1.z[0].is_zero());
    CHECK(p1.zeta[0].is_zero());
    CHECK(p1.xi[0].is_zero());

    PointOnM p2 = flow(M, FieldKind::Lbar, p1, fresh_params(pv, 8, {"p2zeta1"}));
    CHECK(p2.zeta[0] == Series::variable(pv, 8, "p2zeta1"));
    CHECK(p2.xi[0] == parse_series("-i*p1w1*p2zeta1", pv, 8));

    PointOnM p3 = flow(M, FieldKind::L, p2, fresh_params(pv, 8, {"p3w1"}));
    CHECK(p3.w[0] == parse_series("p1w1 + p3w1", pv, 8));
    CHECK(p3.z[0] == parse_series("i*p3w1*p2zeta1", pv, 8));
    CHECK(p3.zeta[0] == Series::variable(pv, 8, "p2zeta1"));
    CHECK(p3.xi[0] == parse_series("-i*p1w1*p2zeta1", pv, 8));
    CHECK(all_zero(m_residual(M, p3)));
}

TEST_CASE("chain_map matches iterated flows and stays on M") {
    Corpus c = build_corpus(8);
    const GenericManifold& M = c.manifolds["hq"];
    ChainMap g3 = chain_map(M, ChainWord{true, 3});
    CHECK(g3.gamma.w[0] == parse_series("p1w1 + p3w1", g3.params, 8));
    CHECK(g3.gamma.z[0] == parse_series("i*p3w1*p2zeta1", g3.params, 8));
    CHECK(all_zero(m_residual(M, g3.gamma)));

    // Levi-flat: flows only translate
    const GenericManifold& F = c.manifolds["flat"];
    ChainMap g4 = chain_map(F, ChainWord{true, 4});
    CHECK(g4.gamma.w[0] == parse_series("p1w1 + p3w1", g4.params, 8));
    CHECK(g4.gamma.zeta[0] == parse_series("p2zeta1 + p4zeta1", g4.params, 8));
    CHECK(g4.gamma.z[0].is_zero());
    CHECK(g4.gamma.xi[0].is_zero());

    for (const auto& [name, M2] : c.manifolds) {
        CAPTURE(name);
        ChainMap g = chain_map(M2, ChainWord{true, 3});
        CHECK(all_zero(m_residual(M2, g.gamma)));
        ChainMap gb = chain_map(M2, ChainWord{false, 3});
        CHECK(all_zero(m_residual(M2, gb.gamma)));
    }
}

TEST_CASE("flow rejects off-manifold points") {
    Corpus c = build_corpus(8);
    const GenericManifold& M = c.manifolds["hq"];
    std::vector<std::string> pv{"x"};
    PointOnM p = PointOnM::origin(M, pv, 8);
    p.z[0] = Series::variable(pv, 8, "x");  // xi stays 0: off M
    CHECK_THROWS_AS(flow(M, FieldKind::L, p, {Series::zero(pv, 8)}), SeriesError);
}

TEST_CASE("build_fields and apply_field") {
    Corpus c = build_corpus(8);
    const GenericManifold& M = c.manifolds["hq"];
    const Frame& fr = M.frame();
    VectorFieldSystem V = build_fields(M);

    // L = d/dw + i zeta d/dz, Lbar = d/dzeta - i w d/dxi
    CHECK(V.Lz[0][0] == parse_series("i*zeta1", fr.ambient, 7));
    CHECK(V.Lbarxi[0][0] == parse_series("-i*w1", fr.ambient, 7));

    // tangency: Lbar annihilates xi - z + i Theta, L annihilates z - xi - i ThetaBar
    Series meq = parse_series("xi1 - z1 + i*w1*zeta1", fr.ambient, 8);
    CHECK(apply_field(M, V, FieldKind::Lbar, 0, meq).is_zero());
    Series meq2 = parse_series("z1 - xi1 - i*w1*zeta1", fr.ambient, 8);
    CHECK(apply_field(M, V, FieldKind::L, 0, meq2).is_zero());

    // L(w) = 1, Lbar(xi) = -i w
    CHECK(apply_field(M, V, FieldKind::L, 0, Series::variable(fr.ambient, 8, "w1")) ==
          Series::constant(fr.ambient, 7, GRat(1)));
    CHECK(apply_field(M, V, FieldKind::Lbar, 0, Series::variable(fr.ambient, 8, "xi1")) ==
          parse_series("-i*w1", fr.ambient, 7));

    // Levi-flat: Upsilon = d/dz + d/dxi
    const GenericManifold& F = c.manifolds["flat"];
    VectorFieldSystem VF = build_fields(F);
    Series zf = Series::variable(F.frame().ambient, 8, "z1");
    Series xif = Series::variable(F.frame().ambient, 8, "xi1");
    CHECK(apply_field(F, VF, FieldKind::Upsilon, 0, zf) ==
          Series::constant(F.frame().ambient, 7, GRat(1)));
    CHECK(apply_field(F, VF, FieldKind::Upsilon, 0, xif) ==
          Series::constant(F.frame().ambient, 7, GRat(1)));

    // pairwise commutation of the tangential fields where m = 2
    const GenericManifold& T = c.manifolds["twisted"];
    VectorFieldSystem VT = build_fields(T);
    Rng rng(5);
    Series rnd = Series::zero(T.frame().ambient, 8);
    for (int t = 0; t < 6; ++t) {
        Expo e(T.frame().ambient.size(), 0);
        for (int k = 0; k < 3; ++k) e[rng.below(e.size())] += 1;
        rnd = rnd + Series::monomial(T.frame().ambient, 8, e, rng.small_grat(4));
    }
    Series ab = apply_field(T, VT, FieldKind::L, 0, apply_field(T, VT, FieldKind::L, 1, rnd));
    Series ba = apply_field(T, VT, FieldKind::L, 1, apply_field(T, VT, FieldKind::L, 0, rnd));
    CHECK(ab == ba);
    Series ab2 = apply_field(T, VT, FieldKind::Lbar, 0, apply_field(T, VT, FieldKind::Lbar, 1, rnd));
    Series ba2 = apply_field(T, VT, FieldKind::Lbar, 1, apply_field(T, VT, FieldKind::Lbar, 0, rnd));
    CHECK(ab2 == ba2);
}

TEST_CASE("flow group law and permutation invariance") {
    Corpus c = build_corpus(8);
    for (const char* name : {"twisted", "ratgraph"}) {
        CAPTURE(name);
        const GenericManifold& M = c.manifolds[name];
        std::vector<std::string> pv{"x", "a1", "a2", "b1", "b2"};
        Rng rng(13);
        PointOnM q = random_point(M, rng, pv);
        REQUIRE(all_zero(m_residual(M, q)));

        // simultaneous two-component L flow == componentwise in either order
        SeriesVector a{Series::variable(pv, 8, "a1"), Series::variable(pv, 8, "a2")};
        SeriesVector a_first{Series::variable(pv, 8, "a1"), Series::zero(pv, 8)};
        SeriesVector a_second{Series::zero(pv, 8), Series::variable(pv, 8, "a2")};
        PointOnM lhs = flow(M, FieldKind::L, q, a);
        PointOnM r12 = flow(M, FieldKind::L, flow(M, FieldKind::L, q, a_first), a_second);
        PointOnM r21 = flow(M, FieldKind::L, flow(M, FieldKind::L, q, a_second), a_first);
        for (int i = 0; i < 4; ++i) {
            CHECK(lhs.all()[static_cast<size_t>(i)] == r12.all()[static_cast<size_t>(i)]);
            CHECK(lhs.all()[static_cast<size_t>(i)] == r21.all()[static_cast<size_t>(i)]);
        }

        // additivity along the same field
        SeriesVector b{Series::variable(pv, 8, "b1"), Series::variable(pv, 8, "b2")};
        SeriesVector ab{a[0] + b[0], a[1] + b[1]};
        PointOnM two = flow(M, FieldKind::Lbar, flow(M, FieldKind::Lbar, q, a), b);
        PointOnM one = flow(M, FieldKind::Lbar, q, ab);
        for (int i = 0; i < 4; ++i)
            CHECK(two.all()[static_cast<size_t>(i)] == one.all()[static_cast<size_t>(i)]);
    }
}

TEST_CASE("transversal flows: commutation with the tangential flows") {
    Corpus c = build_corpus(8);
    for (const char* name : {"hq", "twisted", "halfflat"}) {
        CAPTURE(name);
        const GenericManifold& M = c.manifolds[name];
        std::vector<std::string> pv{"x", "u1", "u2", "v1", "v2"};
        Rng rng(29);
        PointOnM q = random_point(M, rng, pv);

        SeriesVector wpar, xipar, zpar;
        for (int i = 0; i < M.m(); ++i) wpar.push_back(Series::variable(pv, 8, i ? "u2" : "u1"));
        for (int j = 0; j < M.d(); ++j) xipar.push_back(Series::variable(pv, 8, j ? "v2" : "v1"));
        for (int j = 0; j < M.d(); ++j) zpar.push_back(Series::variable(pv, 8, j ? "v2" : "v1"));

        PointOnM lu = flow(M, FieldKind::UpsilonBar, flow(M, FieldKind::L, q, wpar), xipar);
        PointOnM ul = flow(M, FieldKind::L, flow(M, FieldKind::UpsilonBar, q, xipar), wpar);
        for (int i = 0; i < 4; ++i)
            CHECK(lu.all()[static_cast<size_t>(i)] == ul.all()[static_cast<size_t>(i)]);
        PointOnM lv = flow(M, FieldKind::Upsilon, flow(M, FieldKind::Lbar, q, wpar), zpar);
        PointOnM vl = flow(M, FieldKind::Lbar, flow(M, FieldKind::Upsilon, q, zpar), wpar);
        for (int i = 0; i < 4; ++i)
            CHECK(lv.all()[static_cast<size_t>(i)] == vl.all()[static_cast<size_t>(i)]);
    }
}

TEST_CASE("transversal flow solves its defining derivation") {
    // d/ds [F o UpsilonBar_s (q)] at s = 0 equals (UpsilonBar F)(q)
    Corpus c = build_corpus(8);
    const GenericManifold& M = c.manifolds["twisted"];
    const Frame& fr = M.frame();
    VectorFieldSystem V = build_fields(M);
    std::vector<std::string> pv{"x", "s"};
    Rng rng(37);
    PointOnM q = random_point(M, rng, pv);

    Series F = Series::variable(fr.ambient, 8, fr.z[0]) *
               Series::variable(fr.ambient, 8, fr.w[0]);
    SeriesVector spar(static_cast<size_t>(M.d()), Series::variable(pv, 8, "s"));
    PointOnM flowed = flow(M, FieldKind::UpsilonBar, q, spar);

    auto compose_pt = [&](const Series& f, const PointOnM& pt) {
        std::vector<Series> subs;
        for (const auto& v : fr.ambient) {
            auto iw = std::find(fr.w.begin(), fr.w.end(), v);
            auto iz = std::find(fr.z.begin(), fr.z.end(), v);
            auto izt = std::find(fr.zeta.begin(), fr.zeta.end(), v);
            auto ixi = std::find(fr.xi.begin(), fr.xi.end(), v);
            if (iw != fr.w.end())
                subs.push_back(pt.w[static_cast<size_t>(iw - fr.w.begin())].truncated(f.order()));
            else if (iz != fr.z.end())
                subs.push_back(pt.z[static_cast<size_t>(iz - fr.z.begin())].truncated(f.order()));
            else if (izt != fr.zeta.end())
                subs.push_back(
                    pt.zeta[static_cast<size_t>(izt - fr.zeta.begin())].truncated(f.order()));
            else
                subs.push_back(pt.xi[static_cast<size_t>(ixi - fr.xi.begin())].truncated(f.order()));
        }
        return f.composed(subs);
    };

    Series dds = compose_pt(F, flowed).derive("s");
    std::vector<Series> kill{Series::variable({"x"}, dds.order(), "x"),
                             Series::zero({"x"}, dds.order())};
    Series lhs = dds.composed(kill);

    // sum over the d flow components of UpsilonBar applied to F
    Series uf = Series::zero(fr.ambient, 7);
    for (int j = 0; j < M.d(); ++j) uf = uf + apply_field(M, V, FieldKind::UpsilonBar, j, F);
    PointOnM q7 = q;
    Series rhs = compose_pt(uf, q7);
    // restrict both to the single surviving parameter
    CHECK(lhs == rhs.composed({Series::variable({"x"}, rhs.order(), "x"),
                               Series::zero({"x"}, rhs.order())}));
}

TEST_CASE("sigma equivariance of flows") {
    Corpus c = build_corpus(8);
    for (const char* name : {"hq", "twisted"}) {
        CAPTURE(name);
        const GenericManifold& M = c.manifolds[name];
        std::vector<std::string> pv{"x", "a1", "a2"};
        Rng rng(31);
        PointOnM q = random_point(M, rng, pv);
        SeriesVector par;
        for (int i = 0; i < M.m(); ++i) par.push_back(Series::variable(pv, 8, i ? "a2" : "a1"));

        // sigma(L_w(q)) = Lbar_{wbar}(sigma(q)): after conjugating the point,
        // the parameter of the barred flow is the conjugated variable, which
        // keeps the same formal name
        PointOnM lhs = sigma_point(flow(M, FieldKind::L, q, par));
        PointOnM rhs = flow(M, FieldKind::Lbar, sigma_point(q), par);
        for (int i = 0; i < 4; ++i)
            CHECK(lhs.all()[static_cast<size_t>(i)] == rhs.all()[static_cast<size_t>(i)]);

        PointOnM twice = sigma_point(sigma_point(q));
        for (int i = 0; i < 4; ++i)
            CHECK(twice.all()[static_cast<size_t>(i)] == q.all()[static_cast<size_t>(i)]);
    }
}

TEST_CASE("generic rank of chains") {
    Corpus c = build_corpus(8);
    const GenericManifold& M = c.manifolds["hq"];
    CHECK(generic_rank_of_map(chain_map(M, ChainWord{true, 2}).gamma.all(), 1) == 2);
    CHECK(generic_rank_of_map(chain_map(M, ChainWord{true, 3}).gamma.all(), 1) == 3);
    const GenericManifold& F = c.manifolds["flat"];
    CHECK(generic_rank_of_map(chain_map(F, ChainWord{true, 5}).gamma.all(), 1) == 2);
}

TEST_CASE("segre multitype on the corpus") {
    Corpus c = build_corpus(8);

    SegreTypeReport hq = segre_multitype(c.manifolds["hq"], 8, 1);
    CHECK(hq.conclusive);
    CHECK(hq.mu == 3);
    CHECK(hq.kappa == 1);
    CHECK(hq.e == std::vector<int>{1});
    CHECK(hq.minimal);
    CHECK(hq.ranks[0] == 1);
    CHECK(hq.ranks[1] == 2);
    CHECK(hq.ranks[2] == 3);
    CHECK(3 <= hq.mu);
    CHECK(hq.mu <= c.manifolds["hq"].d() + 2);

    SegreTypeReport fl = segre_multitype(c.manifolds["flat"], 8, 1);
    CHECK(fl.conclusive);
    CHECK_FALSE(fl.minimal);
    CHECK(fl.ranks.back() == 2);  // stalls at 2m

    SegreTypeReport qu = segre_multitype(c.manifolds["quartic"], 8, 1);
    CHECK(qu.conclusive);
    CHECK(qu.mu == 3);
    CHECK(qu.minimal);

    SegreTypeReport tw = segre_multitype(c.manifolds["twisted"], 8, 1);
    CHECK(tw.conclusive);
    CHECK(tw.minimal);

    SegreTypeReport hf = segre_multitype(c.manifolds["halfflat"], 10, 1);
    CHECK(hf.conclusive);
    CHECK_FALSE(hf.minimal);  // one flat codirection survives

    // order stability: raising the order by 2 changes nothing
    Corpus c10 = build_corpus(10);
    for (const char* name : {"hq", "flat", "quartic", "twisted"}) {
        CAPTURE(name);
        SegreTypeReport a = segre_multitype(c.manifolds[name], 8, 1);
        SegreTypeReport b = segre_multitype(c10.manifolds[name], 8, 1);
        CHECK(a.mu == b.mu);
        CHECK(a.e == b.e);
        CHECK(a.minimal == b.minimal);
    }
}

TEST_CASE("rank monotonicity along chains") {
    Corpus c = build_corpus(8);
    for (const char* name : {"hq", "quartic", "twisted", "flat"}) {
        CAPTURE(name);
        const GenericManifold& M = c.manifolds[name];
        int prev = 0;
        bool stable = false;
        int stable_rank = 0;
        for (int k = 1; k <= 5; ++k) {
            int r = generic_rank_of_map(chain_map(M, ChainWord{true, k}).gamma.all(),
                                        static_cast<std::uint64_t>(k));
            CHECK(r >= prev);
            if (stable) CHECK(r == stable_rank);
            if (k > 1 && r == prev) {
                stable = true;
                stable_rank = r;
            }
            prev = r;
        }
    }
}

TEST_CASE("minimality witness") {
    Corpus c = build_corpus(8);
    auto w = minimality_witness(c.manifolds["hq"], 3);
    REQUIRE(w.has_value());
    CHECK(w->rank_t == 2);
    CHECK(w->rank_tau == 2);
    CHECK(w->conjugate_checked);

    CHECK_THROWS_AS(minimality_witness(c.manifolds["flat"], 3), SeriesError);

    auto wt = minimality_witness(c.manifolds["twisted"], 3);
    REQUIRE(wt.has_value());
    CHECK(wt->rank_t == 3);
    CHECK(wt->rank_tau == 3);
}
