#include <doctest.h>

#include "crsegre/corpus.hpp"
#include "crsegre/manifold.hpp"
#include "crsegre/parse.hpp"

using namespace crsegre;

namespace {

GenericManifold from_tb(int m, int d, int order, const std::vector<std::string>& exprs) {
    Frame fr(m, d, false);
    SeriesVector tb;
    for (const auto& e : exprs) tb.push_back(parse_series(e, fr.ambient, order));
    return GenericManifold::from_theta_bar(m, d, order, tb);
}

bool all_zero(const SeriesVector& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

// rename xi_j -> z_j only: reinterpret a companion's normal slot as a theta
// normal slot, keeping the tangential blocks in place
Series block_swap_xi_to_z(const Series& s, const Frame& fr) {
    std::vector<std::string> out;
    for (const auto& v : s.vars()) {
        bool done = false;
        for (int j = 0; j < fr.d && !done; ++j) {
            if (v == fr.xi[static_cast<size_t>(j)]) {
                out.push_back(fr.z[static_cast<size_t>(j)]);
                done = true;
            }
        }
        if (!done) out.push_back(v);
    }
    return s.renamed(out);
}

}  // namespace

TEST_CASE("theta_from_graph: hand values and residual oracle") {
    // y = w wbar -> ThetaBar = 2 w zeta
    Frame fr(1, 1, false);
    std::vector<std::string> gv{"w1", "zeta1", "z1"};
    GenericManifold M = theta_from_graph(1, 1, {parse_series("w1*zeta1", gv, 8)}, 8);
    CHECK(M.theta_bar()[0] == parse_series("2*w1*zeta1", fr.ambient, 8));
    auto [r1, r2] = verify_reality(M);
    CHECK(all_zero(r1));
    CHECK(all_zero(r2));

    // y = 0 -> Levi-flat
    GenericManifold F = theta_from_graph(1, 1, {parse_series("0", gv, 8)}, 8);
    CHECK(F.theta_bar()[0].is_zero());

    // y = x^2: solve (z - xi)/2i = ((z + xi)/2)^2; check by residual only
    GenericManifold X = theta_from_graph(1, 1, {parse_series("z1^2", gv, 8)}, 8);
    CHECK(!X.theta_bar()[0].is_zero());
    auto [x1, x2] = verify_reality(X);
    CHECK(all_zero(x1));
    CHECK(all_zero(x2));

    // reality violation demands matched conjugate pairs
    CHECK_THROWS_AS(theta_from_graph(1, 1, {parse_series("i*w1*zeta1", gv, 8)}, 8), SeriesError);
    // dh(0) != 0 rejected
    CHECK_THROWS_AS(theta_from_graph(1, 1, {parse_series("w1 + zeta1", gv, 8)}, 8), SeriesError);
}

TEST_CASE("conjugate_theta: fixed point and involution") {
    Frame fr(1, 1, false);
    std::vector<std::string> th_vars = fr.ambient;

    // Theta = w zeta is its own companion
    SeriesVector tb = conjugate_theta(1, 1, {parse_series("w1*zeta1", th_vars, 8)}, 8);
    CHECK(tb[0] == parse_series("w1*zeta1", Frame(1, 1, false).xichart, 8));

    // Theta = w1 zeta1 (1 + w2 zeta2)
    Frame fr2(2, 1, false);
    SeriesVector tb2 =
        conjugate_theta(2, 1, {parse_series("w1*zeta1 + w1*zeta1*w2*zeta2", fr2.ambient, 8)}, 8);
    CHECK(tb2[0] == parse_series("w1*zeta1 + w1*zeta1*w2*zeta2", fr2.xichart, 8));

    // Theta = w zeta + w^2 zeta^2 z: fixed point gains an i w^3 zeta^3 term
    SeriesVector tb3 =
        conjugate_theta(1, 1, {parse_series("w1*zeta1 + w1^2*zeta1^2*z1", th_vars, 8)}, 8);
    Series expected_low =
        parse_series("w1*zeta1 + w1^2*zeta1^2*xi1 + i*w1^3*zeta1^3", Frame(1, 1, false).xichart, 5);
    CHECK(tb3[0].truncated(5) == expected_low);

    // exact involution through negation: the companion of -ThetaBar (read as
    // a theta) is -Theta, for any input
    Series as_theta = -block_swap_xi_to_z(tb3[0], fr).embedded(fr.ambient);
    Series again = conjugate_theta(1, 1, {as_theta}, 8)[0];
    CHECK(block_swap_xi_to_z(again, fr).embedded(fr.ambient) ==
          -parse_series("w1*zeta1 + w1^2*zeta1^2*z1", th_vars, 8));
}

TEST_CASE("verify_reality catches corrupted data") {
    GenericManifold good = from_tb(1, 1, 8, {"w1*zeta1"});
    auto [g1, g2] = verify_reality(good);
    CHECK(all_zero(g1));
    CHECK(all_zero(g2));
    CHECK(good.verify_normal());

    // corrupt: ThetaBar = 2 w zeta against Theta = w zeta
    Frame fr(1, 1, false);
    GenericManifold bad = GenericManifold::from_theta_bar(
        1, 1, 8, {parse_series("2*w1*zeta1", fr.ambient, 8)});
    // fabricate the mismatch by checking the cross identity directly: the
    // sigma-conjugate of 2 w zeta is itself, so reality holds; instead build
    // non-real data
    GenericManifold nonreal =
        GenericManifold::from_theta_bar(1, 1, 8, {parse_series("w1*zeta1 + w1^2*zeta1^2*z1",
                                                               fr.ambient, 8)});
    auto [n1, n2] = verify_reality(nonreal);
    bool any = false;
    for (const auto& r : n1) any = any || !r.is_zero();
    for (const auto& r : n2) any = any || !r.is_zero();
    CHECK(any);
    (void)bad;
}

TEST_CASE("verify_normal") {
    CHECK(from_tb(1, 1, 8, {"w1*zeta1"}).verify_normal());
    CHECK_FALSE(from_tb(1, 1, 8, {"w1*zeta1 + w1^2"}).verify_normal());
    CHECK(from_tb(2, 1, 8, {"w1*zeta1 + w1*zeta1*w2*zeta2"}).verify_normal());
}

TEST_CASE("verify_maps_into on the corpus") {
    Corpus c = build_corpus(8);

    // identity on the hyperquadric
    FormalMap id = FormalMap::identity(c.manifolds["hq"]);
    CHECK(all_zero(verify_maps_into(id)));

    // the straight embedding into the degenerate-pair target
    CHECK(all_zero(verify_maps_into(c.maps.at("embed_a1"))));
    CHECK(all_zero(verify_maps_into(c.maps.at("embed_a2"))));
    CHECK(all_zero(verify_maps_into(c.maps.at("embed_quartic"))));

    // perturbed map fails: (w, 0, z + w^2)
    const GenericManifold& src = c.manifolds["hq"];
    const GenericManifold& dst = c.manifolds["target_a1"];
    Frame fr = src.frame();
    FormalMap bad(src, dst,
                  {parse_series("w1", fr.t, 8), parse_series("0", fr.t, 8)},
                  {parse_series("z1 + w1^2", fr.t, 8)});
    CHECK_FALSE(all_zero(verify_maps_into(bad)));
}

TEST_CASE("identity maps-into holds for every corpus manifold") {
    Corpus c = build_corpus(8);
    for (const auto& [name, M] : c.manifolds) {
        CAPTURE(name);
        CHECK(all_zero(verify_maps_into(FormalMap::identity(M))));
    }
}

TEST_CASE("conjugate_theta involution on the corpus") {
    Corpus c = build_corpus(8);
    for (const auto& [name, M] : c.manifolds) {
        CAPTURE(name);
        Frame fr(M.m(), M.d(), false);
        SeriesVector tb = conjugate_theta(M.m(), M.d(), M.theta(), M.order());

        // the fixed point reproduces the stored companion on real data
        for (int j = 0; j < M.d(); ++j)
            CHECK(tb[static_cast<size_t>(j)].embedded(fr.ambient) ==
                  M.theta_bar()[static_cast<size_t>(j)]);

        // bar of bar: sigma-conjugating the companion returns Theta
        for (int j = 0; j < M.d(); ++j)
            CHECK(sigma_conjugate(tb[static_cast<size_t>(j)].embedded(fr.ambient), fr) ==
                  M.theta()[static_cast<size_t>(j)]);

        // exact algebraic involution through negation, reality not needed
        SeriesVector as_theta;
        for (const auto& s : tb)
            as_theta.push_back(-block_swap_xi_to_z(s, fr).embedded(fr.ambient));
        SeriesVector back = conjugate_theta(M.m(), M.d(), as_theta, M.order());
        for (int j = 0; j < M.d(); ++j) {
            Series got = block_swap_xi_to_z(back[static_cast<size_t>(j)], fr).embedded(fr.ambient);
            CHECK(got == -M.theta()[static_cast<size_t>(j)]);
        }
    }
}

TEST_CASE("both graph identities pass or fail together") {
    Corpus c = build_corpus(8);
    for (const char* name : {"embed_a1", "embed_a2", "embed_quartic"}) {
        CAPTURE(name);
        const FormalMap& h = c.maps.at(name);
        CHECK(all_zero(verify_maps_into(h)));
        CHECK(all_zero(verify_maps_into_conjugate(h)));
    }
    for (const auto& [name, M] : c.manifolds) {
        CAPTURE(name);
        FormalMap id = FormalMap::identity(M);
        CHECK(all_zero(verify_maps_into(id)));
        CHECK(all_zero(verify_maps_into_conjugate(id)));
    }
    // a perturbed map trips both residuals
    const GenericManifold& src = c.manifolds["hq"];
    FormalMap bad(src, c.manifolds["target_a1"],
                  {parse_series("w1", src.frame().t, 8), parse_series("0", src.frame().t, 8)},
                  {parse_series("z1 + z1^2", src.frame().t, 8)});
    CHECK_FALSE(all_zero(verify_maps_into(bad)));
    CHECK_FALSE(all_zero(verify_maps_into_conjugate(bad)));
}
