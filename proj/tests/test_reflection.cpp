#include <doctest.h>

#include <algorithm>

#include "crsegre/corpus.hpp"
#include "crsegre/parse.hpp"
#include "crsegre/reflection.hpp"

using namespace crsegre;

namespace {

bool vec_zero(const SeriesVector& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("derived identities of the identity map on the hyperquadric") {
    Corpus c = build_corpus(8);
    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    ReflectionSystem R(id);

    // R_0(0,0,t') = -zp
    SeriesVector r0 = R.R_at_origin(Expo{0});
    CHECK(r0[0] == parse_series("-zp1", R.tprime_vars(), 8));
    // R_1(0,0,t') = i wp
    SeriesVector r1 = R.R_at_origin(Expo{1});
    CHECK(r1[0] == parse_series("i*wp1", R.tprime_vars(), 7));
    // R_2(0,0,t') = 0
    CHECK(R.R_at_origin(Expo{2})[0].is_zero());

    // the defining identity: R_gamma with t' := h(t) vanishes on M
    for (unsigned g = 0; g <= 3; ++g) CHECK(vec_zero(R.R_on_map(Expo{g})));
}

TEST_CASE("derived identities of the identity map, two tangential directions") {
    Corpus c = build_corpus(8);
    FormalMap id = FormalMap::identity(c.manifolds["twisted"]);
    ReflectionSystem R(id);

    CHECK(R.R_at_origin(Expo{0, 0})[0] == parse_series("-zp1", R.tprime_vars(), 8));
    CHECK(R.R_at_origin(Expo{1, 0})[0] == parse_series("i*wp1", R.tprime_vars(), 7));
    CHECK(R.R_at_origin(Expo{1, 1})[0] == parse_series("i*wp1*wp2", R.tprime_vars(), 6));
    CHECK(R.R_at_origin(Expo{0, 1})[0].is_zero());

    for (const Expo& g : {Expo{0, 0}, Expo{1, 0}, Expo{0, 1}, Expo{1, 1}, Expo{2, 0}})
        CHECK(vec_zero(R.R_on_map(g)));
}

TEST_CASE("derived identities vanish on chains for the corpus embeddings") {
    Corpus c = build_corpus(8);
    for (const char* name : {"embed_a1", "embed_a2", "embed_quartic"}) {
        CAPTURE(name);
        ReflectionSystem R(c.maps.at(name));
        for (const Expo& g : {Expo{0}, Expo{1}, Expo{2}}) CHECK(vec_zero(R.R_on_map(g)));
    }
}

TEST_CASE("jet order budget fails loudly") {
    Corpus c = build_corpus(8);
    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    ReflectionSystem R(id);
    CHECK_THROWS_AS(R.R(Expo{7}), SeriesError);
}

TEST_CASE("jet vector consistency") {
    Corpus c = build_corpus(8);
    const FormalMap& h = c.maps.at("embed_a1");
    JetVector J = build_jet_vector(h, 2);
    const Frame& fr = h.source().frame();
    const int n = h.source().n();
    for (const auto& [key, s] : J.entries) {
        const auto& [j, alpha] = key;
        int total = 0;
        for (auto x : alpha) total += static_cast<int>(x);
        if (total >= J.kappa) continue;
        for (int v = 0; v < n; ++v) {
            Expo up = alpha;
            up[static_cast<size_t>(v)] += 1;
            auto it = J.entries.find({j, up});
            REQUIRE(it != J.entries.end());
            CHECK(it->second == s.derive(fr.tau[static_cast<size_t>(v)]));
        }
    }
    SeriesVector hbar = h.conj_components();
    for (int j = 0; j < h.n_target(); ++j) {
        Expo zero(static_cast<size_t>(n), 0);
        CHECK(J.entries.at({j, zero}) == hbar[static_cast<size_t>(j)]);
    }
}

TEST_CASE("theta_beta: direct substitution, hand values") {
    Corpus c = build_corpus(8);

    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    SeriesVector t1 = theta_beta_direct(id, Expo{1});
    const Frame fr(1, 1, false);
    CHECK(t1[0] == parse_series("w1", fr.xichart, t1[0].order()));
    CHECK(theta_beta_direct(id, Expo{2})[0].is_zero());

    FormalMap id2 = FormalMap::identity(c.manifolds["twisted"]);
    const Frame fr2(2, 1, false);
    Series t10 = theta_beta_direct(id2, Expo{1, 0})[0];
    CHECK(t10 == parse_series("w1 + w1*w2*zeta2", fr2.xichart, t10.order()));
    Series t11 = theta_beta_direct(id2, Expo{1, 1})[0];
    CHECK(t11 == parse_series("w1*w2", fr2.xichart, t11.order()));

    // a map with gbar_2 = 0: only the first tangential slot is probed
    SeriesVector q1 = theta_beta_direct(c.maps.at("embed_a1"), Expo{0, 1});
    CHECK(q1[0] == parse_series("w1^2", fr.xichart, q1[0].order()));
}

TEST_CASE("delta determinant") {
    Corpus c = build_corpus(8);
    const Frame fr1(1, 1, false);
    const Frame fr2(2, 1, false);

    CHECK(delta_det(FormalMap::identity(c.manifolds["hq"])) ==
          parse_series("1", fr1.xichart, 7));
    CHECK(delta_det(FormalMap::identity(c.manifolds["twisted"])) ==
          parse_series("1", fr2.xichart, 7));

    CHECK(delta_det_selected(c.maps.at("embed_a1"), {0}, {0}) ==
          parse_series("1", fr1.xichart, 7));
    CHECK_THROWS_AS(delta_det(c.maps.at("embed_a1")), SeriesError);
}

TEST_CASE("theta_beta recursion agrees with direct substitution") {
    Corpus c = build_corpus(8);

    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    CHECK(theta_beta_recursive(id, Expo{1})[0].truncated(6) ==
          theta_beta_direct(id, Expo{1})[0].truncated(6));
    CHECK(theta_beta_recursive(id, Expo{2})[0].is_zero());

    FormalMap id2 = FormalMap::identity(c.manifolds["twisted"]);
    for (const Expo& b : {Expo{1, 0}, Expo{0, 1}, Expo{2, 0}, Expo{1, 1}, Expo{0, 2}}) {
        CAPTURE(b[0]);
        CAPTURE(b[1]);
        SeriesVector rec = theta_beta_recursive(id2, b);
        SeriesVector dir = theta_beta_direct(id2, b);
        int o = std::min(rec[0].order(), dir[0].order());
        CHECK(rec[0].truncated(o) == dir[0].truncated(o));
    }

    FormalMap idr = FormalMap::identity(c.manifolds["ratgraph"]);
    for (const Expo& b : {Expo{1, 0}, Expo{1, 1}}) {
        SeriesVector rec = theta_beta_recursive(idr, b);
        SeriesVector dir = theta_beta_direct(idr, b);
        int o = std::min(rec[0].order(), dir[0].order());
        CHECK(rec[0].truncated(o) == dir[0].truncated(o));
    }
}

TEST_CASE("minor variant for rank-deficient embeddings") {
    Corpus c = build_corpus(8);

    const FormalMap& h = c.maps.at("embed_a1");
    MinorVariantResult mv = minor_variant(h, Expo{1, 0}, {0}, {0});
    for (size_t l = 0; l < mv.lhs.size(); ++l) {
        int o = std::min(mv.lhs[l].order(), mv.rhs[l].order());
        CHECK(mv.lhs[l].truncated(o) == mv.rhs[l].truncated(o));
    }
    CHECK(mv.gamma_sharp == Expo{0});  // Delta = 1 is a unit

    MinorVariantResult mv2 = minor_variant(h, Expo{2, 0}, {0}, {0});
    for (size_t l = 0; l < mv2.lhs.size(); ++l) {
        int o = std::min(mv2.lhs[l].order(), mv2.rhs[l].order());
        CHECK(mv2.lhs[l].truncated(o) == mv2.rhs[l].truncated(o));
    }

    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    MinorVariantResult mv3 = minor_variant(id, Expo{1}, {0}, {0});
    CHECK(mv3.gamma_sharp == Expo{0});
    for (size_t l = 0; l < mv3.lhs.size(); ++l) {
        int o = std::min(mv3.lhs[l].order(), mv3.rhs[l].order());
        CHECK(mv3.lhs[l].truncated(o) == mv3.rhs[l].truncated(o));
    }

    // a squaring map: Delta(0) = 0 but a first derivation revives it
    Frame frq(1, 1, false);
    GenericManifold half_quartic = GenericManifold::from_theta_bar(
        1, 1, 8, {parse_series("1/2*w1^2*zeta1^2", frq.ambient, 8)});
    FormalMap sq2(half_quartic, c.manifolds["hq"],
                  {parse_series("w1^2", frq.t, 8)},
                  {parse_series("2*z1", frq.t, 8)});
    REQUIRE(vec_zero(verify_maps_into(sq2)));
    MinorVariantResult mv4 = minor_variant(sq2, Expo{1}, {0}, {0});
    CHECK(mv4.gamma_sharp == Expo{1});  // Lbar gbar = 2 zeta at the base point
    for (size_t l = 0; l < mv4.lhs.size(); ++l) {
        int o = std::min(mv4.lhs[l].order(), mv4.rhs[l].order());
        CHECK(mv4.lhs[l].truncated(o) == mv4.rhs[l].truncated(o));
    }
}

TEST_CASE("conjugate-side reflection identities") {
    Corpus c = build_corpus(8);

    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    CHECK(vec_zero(conjugate_reflection_check(id, Expo{1})));
    CHECK(vec_zero(conjugate_reflection_check(id, Expo{2})));

    FormalMap fl = FormalMap::identity(c.manifolds["flat"]);
    CHECK(vec_zero(conjugate_reflection_check(fl, Expo{1})));
    CHECK(vec_zero(conjugate_reflection_check(fl, Expo{3})));

    FormalMap id2 = FormalMap::identity(c.manifolds["twisted"]);
    CHECK(vec_zero(conjugate_reflection_check(id2, Expo{1, 0})));
    CHECK(vec_zero(conjugate_reflection_check(id2, Expo{1, 1})));

    for (const char* name : {"embed_a1", "embed_quartic"}) {
        CAPTURE(name);
        CHECK(vec_zero(conjugate_reflection_check(c.maps.at(name), Expo{1, 0})));
    }
}

TEST_CASE("denominator economy: the cleared numerator needs no division") {
    Corpus c = build_corpus(8);
    FormalMap id2 = FormalMap::identity(c.manifolds["twisted"]);
    for (const Expo& b : {Expo{1, 0}, Expo{1, 1}, Expo{2, 0}}) {
        SeriesVector num = theta_beta_numerator(id2, b, {0, 1}, {0, 1});
        SeriesVector dir = theta_beta_direct(id2, b);
        Series dirz = id2.source().xichart_to_zchart(dir[0]);
        int o = std::min(num[0].order(), dirz.order());
        CHECK(num[0].truncated(o) == dirz.truncated(o));
    }
}
