#include <doctest.h>

#include <algorithm>

#include "crsegre/classify.hpp"
#include "crsegre/corpus.hpp"
#include "crsegre/parse.hpp"
#include "crsegre/segre.hpp"

using namespace crsegre;

namespace {
const Bounds kBounds{6, 4, 4, 1};
}

TEST_CASE("s_solvable: identity on the hyperquadric has kappa0 = 1") {
    Corpus c = build_corpus(8);
    ReflectionSystem R(FormalMap::identity(c.manifolds["hq"]));
    SolvableResult s = s_solvable(R, 6);
    CHECK(s.verdict.definite_true());
    CHECK(s.kappa0 == 1);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].first == Expo{0});
    CHECK(s.rows[1].first == Expo{1});
}

TEST_CASE("corpus classification table") {
    Corpus c = build_corpus(8);

    SUBCASE("embedding with the first-order pair is S-solvable") {
        ClassificationReport rep = classify_map(c.maps.at("embed_a1"), kBounds);
        CHECK(rep.solvable.verdict.definite_true());
        CHECK(rep.solvable.kappa0 == 2);
        CHECK(rep.finite.verdict.definite_true());
        CHECK(rep.audit_ok);
    }

    SUBCASE("embedding with the second-order pair is S-finite but not S-solvable") {
        ClassificationReport rep = classify_map(c.maps.at("embed_a2"), kBounds);
        CHECK(rep.solvable.verdict.kind == Verdict::FalseUpTo);
        CHECK(rep.solvable.verdict.bound == 6);
        CHECK(rep.finite.verdict.definite_true());
        CHECK(rep.audit_ok);
    }

    SUBCASE("quartic embedding is S-finite but not S-nondegenerate") {
        ClassificationReport rep = classify_map(c.maps.at("embed_quartic"), kBounds);
        CHECK(rep.finite.verdict.definite_true());
        CHECK(rep.nondeg.verdict.kind == Verdict::FalseUpTo);
        CHECK(rep.nondeg.verdict.bound == 4);
        CHECK(rep.solvable.verdict.kind == Verdict::FalseUpTo);
        CHECK(rep.audit_ok);
    }

    SUBCASE("identity on the twisted manifold: S-nondegenerate, not S-finite") {
        ClassificationReport rep = manifold_classify(c.manifolds["twisted"], kBounds);
        CHECK(rep.nondeg.verdict.definite_true());
        CHECK(rep.finite.verdict.definite_false());
        // the degenerate line t' = (0, s, 0)
        REQUIRE(rep.finite.curve_direction.size() == 3);
        CHECK(rep.finite.curve_direction[0].is_zero());
        CHECK_FALSE(rep.finite.curve_direction[1].is_zero());
        CHECK(rep.finite.curve_direction[2].is_zero());
        CHECK(rep.audit_ok);
    }

    SUBCASE("identity on the hyperquadric: all three flags") {
        ClassificationReport rep = manifold_classify(c.manifolds["hq"], kBounds);
        CHECK(rep.solvable.verdict.definite_true());
        CHECK(rep.finite.verdict.definite_true());
        CHECK(rep.nondeg.verdict.definite_true());
        CHECK(rep.audit_ok);
    }

    SUBCASE("Levi-flat: nothing survives") {
        ClassificationReport rep = manifold_classify(c.manifolds["flat"], kBounds);
        CHECK_FALSE(rep.solvable.verdict.definite_true());
        CHECK(rep.finite.verdict.definite_false());
        CHECK_FALSE(rep.nondeg.verdict.definite_true());
        CHECK(rep.audit_ok);
    }

    SUBCASE("rational-graph hypersurface is not S-nondegenerate at these bounds") {
        ClassificationReport rep = manifold_classify(c.manifolds["ratgraph"], kBounds);
        CHECK(rep.nondeg.verdict.kind == Verdict::FalseUpTo);
        CHECK(rep.nondeg.verdict.bound == 4);
        CHECK(rep.audit_ok);
    }
}

TEST_CASE("essential variety generators") {
    Corpus c = build_corpus(8);
    ReflectionSystem R(FormalMap::identity(c.manifolds["twisted"]));
    EssentialVariety V = essential_variety(R, 4);
    CHECK(V.n_prime == 3);
    // generators must include -zp, i wp1 and i wp1 wp2 up to truncation
    bool has_zp = false, has_w1 = false, has_w1w2 = false;
    for (const auto& g : V.generators) {
        if (g == parse_series("-zp1", g.vars(), g.order())) has_zp = true;
        if (g == parse_series("i*wp1", g.vars(), g.order())) has_w1 = true;
        if (g == parse_series("i*wp1*wp2", g.vars(), g.order())) has_w1w2 = true;
    }
    CHECK(has_zp);
    CHECK(has_w1);
    CHECK(has_w1w2);

    // Levi-flat: the only generator is -zp
    ReflectionSystem Rf(FormalMap::identity(c.manifolds["flat"]));
    EssentialVariety Vf = essential_variety(Rf, 4);
    REQUIRE(Vf.generators.size() == 1);
    CHECK(Vf.generators[0] == parse_series("-zp1", Vf.generators[0].vars(), 8));
}

TEST_CASE("s_nondegenerate witnesses carry the reported determinant") {
    Corpus c = build_corpus(8);

    ReflectionSystem R(FormalMap::identity(c.manifolds["hq"]));
    NondegResult nd = s_nondegenerate_map(R, 4);
    CHECK(nd.verdict.definite_true());
    REQUIRE(nd.witness.size() == 2);
    CHECK(nd.witness[0].first == Expo{0});
    CHECK(nd.witness[1].first == Expo{1});

    ReflectionSystem R2(FormalMap::identity(c.manifolds["twisted"]));
    NondegResult nd2 = s_nondegenerate_map(R2, 4);
    CHECK(nd2.verdict.definite_true());
    // the witness determinant has leading term proportional to w1
    CHECK(nd2.det_leading.find("w1") != std::string::npos);
}

TEST_CASE("manifold-level nondegeneracy via the theta route") {
    Corpus c = build_corpus(8);

    NondegResult hq = s_nondegenerate_manifold(c.manifolds["hq"], 4);
    CHECK(hq.verdict.definite_true());

    NondegResult tw = s_nondegenerate_manifold(c.manifolds["twisted"], 4);
    CHECK(tw.verdict.definite_true());
    CHECK(tw.det_leading.find("w1") != std::string::npos);

    NondegResult rg = s_nondegenerate_manifold(c.manifolds["ratgraph"], 4);
    CHECK(rg.verdict.kind == Verdict::FalseUpTo);

    NondegResult fl = s_nondegenerate_manifold(c.manifolds["flat"], 4);
    CHECK(fl.verdict.kind == Verdict::FalseUpTo);

    // agreement with the identity-map route where both are definite
    for (const char* name : {"hq", "twisted"}) {
        CAPTURE(name);
        ClassificationReport rep = manifold_classify(c.manifolds[name], kBounds);
        NondegResult via_theta = s_nondegenerate_manifold(c.manifolds[name], 4);
        CHECK(rep.nondeg.verdict.definite_true() == via_theta.verdict.definite_true());
    }

    // non-normal input is rejected: the graph y = x^2 is real but its
    // normal-slot dependence survives at zeta = 0
    GenericManifold bad =
        theta_from_graph(1, 1, {parse_series("z1^2", {"w1", "zeta1", "z1"}, 8)}, 8);
    REQUIRE_FALSE(bad.verify_normal());
    CHECK_THROWS_AS(s_nondegenerate_manifold(bad, 4), PreconditionError);
}

TEST_CASE("implication audit") {
    ClassificationReport ok;
    ok.solvable.verdict = Verdict::yes();
    ok.finite.verdict = Verdict::yes();
    ok.nondeg.verdict = Verdict::yes();
    CHECK(implication_audit(ok));

    ClassificationReport bad;
    bad.solvable.verdict = Verdict::yes();
    bad.finite.verdict = Verdict::no();
    CHECK_FALSE(implication_audit(bad));

    // inconclusive flags never fail
    ClassificationReport inc;
    inc.solvable.verdict = Verdict::yes();
    inc.finite.verdict = Verdict::false_up_to(4);
    CHECK(implication_audit(inc));

    // manifold-level: essentially finite forces S-nondegenerate
    ClassificationReport mrep;
    mrep.is_manifold = true;
    mrep.solvable.verdict = Verdict::false_up_to(6);
    mrep.finite.verdict = Verdict::yes();
    mrep.nondeg.verdict = Verdict::no();
    CHECK_FALSE(implication_audit(mrep));
    mrep.is_manifold = false;
    CHECK(implication_audit(mrep));
}

TEST_CASE("audit passes on every corpus report") {
    Corpus c = build_corpus(8);
    for (const auto& [name, M] : c.manifolds) {
        CAPTURE(name);
        if (!M.verify_normal()) continue;
        ClassificationReport rep = manifold_classify(M, kBounds);
        CHECK(implication_audit(rep));
    }
    for (const auto& [name, h] : c.maps) {
        CAPTURE(name);
        ClassificationReport rep = classify_map(h, kBounds);
        CHECK(implication_audit(rep));
    }
}

TEST_CASE("solvability certificates reproduce the map") {
    Corpus c = build_corpus(8);

    ReflectionSystem R(FormalMap::identity(c.manifolds["hq"]));
    SolvableResult s = s_solvable(R, 6);
    SolvabilityCertificate cert = solvability_certificate(R, s);
    CHECK(cert.kappa0 == 1);
    CHECK(cert.A.size() == 2);

    ReflectionSystem R1(c.maps.at("embed_a1"));
    SolvableResult s1 = s_solvable(R1, 6);
    SolvabilityCertificate cert1 = solvability_certificate(R1, s1);
    CHECK(cert1.kappa0 == 2);

    ReflectionSystem R2(c.maps.at("embed_a2"));
    SolvableResult s2 = s_solvable(R2, 6);
    CHECK_THROWS_AS(solvability_certificate(R2, s2), PreconditionError);
}

TEST_CASE("weierstrass certificates") {
    Corpus c = build_corpus(8);

    // solvable case: degree-1 monic polynomials
    ReflectionSystem R(FormalMap::identity(c.manifolds["hq"]));
    WeierstrassCertificate w = weierstrass_certificate(R, 6);
    CHECK(w.degrees == std::vector<int>{1, 1});
    verify_weierstrass(R, w);

    // S-finite but not solvable: elimination-derived polynomials
    ReflectionSystem Rq(c.maps.at("embed_quartic"));
    WeierstrassCertificate wq = weierstrass_certificate(Rq, 4);
    CHECK(wq.polys.size() == 3);
    verify_weierstrass(Rq, wq);
    for (int dg : wq.degrees) CHECK(dg >= 1);

    // corrupted certificate: bump a coefficient
    WeierstrassCertificate badc = wq;
    badc.polys[0].back() =
        badc.polys[0].back() +
        Series::constant(badc.polys[0].back().vars(), badc.polys[0].back().order(), GRat(1, 7));
    CHECK_THROWS_AS(verify_weierstrass(Rq, badc), SeriesError);
}

TEST_CASE("formal-rank and Segre-rank instance audits") {
    Corpus c = build_corpus(8);

    // invertible maps into S-nondegenerate targets stay S-nondegenerate:
    // a unit rotation on the hyperquadric
    const GenericManifold& M = c.manifolds["hq"];
    const Frame& fr = M.frame();
    GRat lam(mpq_class(3, 5), mpq_class(4, 5));
    FormalMap rot(M, M, {Series::variable(fr.t, 8, "w1").scaled(lam)},
                  {Series::variable(fr.t, 8, "z1")});
    for (const auto& r : verify_maps_into(rot)) REQUIRE(r.is_zero());
    ReflectionSystem Rrot(rot);
    CHECK(s_nondegenerate_map(Rrot, 4).verdict.definite_true());

    // the embeddings have Segre-variety rank 1 < m' = 2 and f(w, 0) == 0
    for (const char* name : {"embed_a1", "embed_quartic"}) {
        CAPTURE(name);
        const FormalMap& h = c.maps.at(name);
        SeriesVector g0;
        for (const auto& comp : h.g()) {
            std::vector<Series> subs;
            for (const auto& v : comp.vars()) {
                if (v == "z1")
                    subs.push_back(Series::zero({"w1"}, 8));
                else
                    subs.push_back(Series::variable({"w1"}, 8, v));
            }
            g0.push_back(comp.composed(subs));
        }
        CHECK(generic_rank_of_map(g0, 3) == 1);
        for (const auto& comp : h.f()) {
            std::vector<Series> subs;
            for (const auto& v : comp.vars()) {
                if (v == "z1")
                    subs.push_back(Series::zero({"w1"}, 8));
                else
                    subs.push_back(Series::variable({"w1"}, 8, v));
            }
            CHECK(comp.composed(subs).is_zero());
        }
    }
}

TEST_CASE("classification is stable under linear changes of coordinates") {
    Corpus c = build_corpus(8);
    RatMatrix A{{GRat(mpq_class(2, 1), mpq_class(1, 3))}};
    RatMatrix C{{GRat(3, 2)}};
    RatMatrix Ap{{GRat(mpq_class(1, 2), mpq_class(-1, 5)), GRat(mpq_class(1, 3), mpq_class(0, 1))},
                 {GRat(0), GRat(mpq_class(4, 3), mpq_class(1, 7))}};
    RatMatrix Cp{{GRat(2, 3)}};

    const FormalMap& h = c.maps.at("embed_a1");
    FormalMap ht = transform_map(h, A, C, Ap, Cp);
    for (const auto& r : verify_maps_into(ht)) REQUIRE(r.is_zero());

    ClassificationReport before = classify_map(h, kBounds);
    ClassificationReport after = classify_map(ht, kBounds);
    CHECK(before.solvable.verdict.kind == after.solvable.verdict.kind);
    CHECK(before.solvable.kappa0 == after.solvable.kappa0);
    CHECK(before.finite.verdict.kind == after.finite.verdict.kind);
    CHECK(before.nondeg.verdict.kind == after.nondeg.verdict.kind);
}

TEST_CASE("classify_map rejects non-maps") {
    Corpus c = build_corpus(8);
    const GenericManifold& src = c.manifolds["hq"];
    const Frame& fr = src.frame();
    FormalMap bad(src, c.manifolds["target_a1"],
                  {parse_series("w1", fr.t, 8), parse_series("0", fr.t, 8)},
                  {parse_series("z1 + w1^3", fr.t, 8)});
    CHECK_THROWS_AS(classify_map(bad, kBounds), PreconditionError);
}

TEST_CASE("raising bounds never flips a definite verdict") {
    Corpus c = build_corpus(8);
    const Bounds low{2, 2, 2, 1};
    const Bounds high{6, 4, 4, 1};
    auto compatible = [](const Verdict& small, const Verdict& big) {
        if (small.kind == Verdict::True) return big.kind == Verdict::True;
        if (small.kind == Verdict::False) return big.kind == Verdict::False;
        return true;  // bounded verdicts may resolve either way
    };
    std::vector<ClassificationReport> lows, highs;
    for (const char* name : {"embed_a1", "embed_a2", "embed_quartic"}) {
        lows.push_back(classify_map(c.maps.at(name), low));
        highs.push_back(classify_map(c.maps.at(name), high));
    }
    for (const char* name : {"hq", "twisted", "flat"}) {
        lows.push_back(manifold_classify(c.manifolds[name], low));
        highs.push_back(manifold_classify(c.manifolds[name], high));
    }
    for (size_t i = 0; i < lows.size(); ++i) {
        CAPTURE(i);
        CHECK(compatible(lows[i].solvable.verdict, highs[i].solvable.verdict));
        CHECK(compatible(lows[i].finite.verdict, highs[i].finite.verdict));
        CHECK(compatible(lows[i].nondeg.verdict, highs[i].nondeg.verdict));
    }
}

TEST_CASE("rank-deficient collapse onto the hyperquadric") {
    // source with a flat tangential direction, collapsed along it: the
    // Segre-variety rank equals the target CR dimension, the target is
    // S-nondegenerate, and the map classifies as fully nondegenerate
    Corpus c = build_corpus(8);
    Frame fr(2, 1, false);
    GenericManifold cyl = GenericManifold::from_theta_bar(
        2, 1, 8, {parse_series("w1*zeta1", fr.ambient, 8)});
    FormalMap h(cyl, c.manifolds["hq"], {parse_series("w1", fr.t, 8)},
                {parse_series("z1", fr.t, 8)});
    for (const auto& r : verify_maps_into(h)) REQUIRE(r.is_zero());

    ClassificationReport rep = classify_map(h, kBounds);
    CHECK(rep.solvable.verdict.definite_true());
    CHECK(rep.finite.verdict.definite_true());
    CHECK(rep.nondeg.verdict.definite_true());
    CHECK(rep.audit_ok);

    // Segre-restriction rank equals m' = 1
    SeriesVector g0;
    std::vector<Series> subs;
    for (const auto& v : fr.t)
        subs.push_back(v == "z1" ? Series::zero(fr.w, 8) : Series::variable(fr.w, 8, v));
    g0.push_back(h.g()[0].composed(subs));
    CHECK(generic_rank_of_map(g0, 3) == 1);

    // the selected rectangular recursion agrees with the direct route
    MinorVariantResult mv = minor_variant(h, Expo{1}, {0}, {0});
    for (size_t l = 0; l < mv.lhs.size(); ++l) {
        int o = std::min(mv.lhs[l].order(), mv.rhs[l].order());
        CHECK(mv.lhs[l].truncated(o) == mv.rhs[l].truncated(o));
    }
    // selecting the flat derivation leaves no surviving minor
    CHECK_THROWS_AS(minor_variant(h, Expo{1}, {1}, {0}), SeriesError);
}

TEST_CASE("solvable corpus maps are also S-nondegenerate") {
    Corpus c = build_corpus(8);
    for (const char* name : {"embed_a1"}) {
        CAPTURE(name);
        ClassificationReport rep = classify_map(c.maps.at(name), kBounds);
        REQUIRE(rep.solvable.verdict.definite_true());
        CHECK(rep.nondeg.verdict.definite_true());
    }
    for (const char* name : {"hq", "twisted"}) {
        CAPTURE(name);
        ClassificationReport rep = manifold_classify(c.manifolds[name], kBounds);
        if (rep.solvable.verdict.definite_true()) CHECK(rep.nondeg.verdict.definite_true());
    }
}
