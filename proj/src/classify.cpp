#include "crsegre/classify.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "crsegre/rng.hpp"

namespace crsegre {

namespace {

int total(const Expo& e) {
    int s = 0;
    for (auto x : e) s += static_cast<int>(x);
    return s;
}

// all multiindices of arity m with total degree <= bound, graded-lex
std::vector<Expo> multiindices(int m, int bound, bool include_zero = true) {
    std::vector<Expo> out;
    std::vector<Expo> level{Expo(static_cast<size_t>(m), 0)};
    if (include_zero) out.push_back(level[0]);
    for (int deg = 1; deg <= bound; ++deg) {
        std::set<Expo> next;
        for (const auto& e : level)
            for (int i = 0; i < m; ++i) {
                Expo ne = e;
                ne[static_cast<size_t>(i)] += 1;
                next.insert(ne);
            }
        level.assign(next.begin(), next.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::string leading_term_str(const Series& s) {
    if (s.is_zero()) return "0";
    // lowest total degree, then lex
    const std::pair<const Expo, GRat>* best = nullptr;
    int best_deg = 0;
    for (const auto& t : s.terms()) {
        int d = total(t.first);
        if (!best || d < best_deg || (d == best_deg && t.first < best->first)) {
            best = &t;
            best_deg = d;
        }
    }
    Series mono = Series::monomial(s.vars(), s.order(), best->first, best->second);
    return mono.str();
}

}  // namespace

std::string Verdict::str() const {
    switch (kind) {
        case True: return "true";
        case False: return "false";
        case FalseUpTo: return "false-up-to(" + std::to_string(bound) + ")";
        case Inconclusive: return "inconclusive(" + std::to_string(bound) + ")";
    }
    return "?";
}

SolvableResult s_solvable(ReflectionSystem& R, int kappa_max) {
    const int np = static_cast<int>(R.tprime_vars().size());
    SolvableResult res;
    RatMatrix basis;  // reduced independent rows
    std::vector<std::pair<Expo, int>> kept;
    const int m = R.map().source().m();

    auto try_add = [&](const std::vector<GRat>& row, const Expo& g, int lp) {
        // reduce against basis
        std::vector<GRat> r = row;
        for (const auto& b : basis) {
            // find pivot of b
            size_t p = 0;
            while (p < b.size() && b[p].is_zero()) ++p;
            if (p == b.size()) continue;
            if (r[p].is_zero()) continue;
            GRat f = r[p] / b[p];
            for (size_t j = 0; j < r.size(); ++j) r[j] -= f * b[j];
        }
        bool nonzero = false;
        for (const auto& x : r) nonzero = nonzero || !x.is_zero();
        if (nonzero) {
            basis.push_back(r);
            kept.emplace_back(g, lp);
        }
        return nonzero;
    };

    for (int kappa = 0; kappa <= kappa_max; ++kappa) {
        for (const auto& g : multiindices(m, kappa)) {
            if (total(g) != kappa) continue;
            auto rows = R.origin_gradient(g);
            for (int lp = 0; lp < static_cast<int>(rows.size()); ++lp)
                try_add(rows[static_cast<size_t>(lp)], g, lp);
        }
        if (static_cast<int>(basis.size()) == np) {
            res.verdict = Verdict::yes();
            res.kappa0 = kappa;
            res.rows = kept;
            return res;
        }
    }
    res.verdict = Verdict::false_up_to(kappa_max);
    return res;
}

EssentialVariety essential_variety(ReflectionSystem& R, int gamma_bound) {
    EssentialVariety V;
    V.n_prime = static_cast<int>(R.tprime_vars().size());
    V.on_segre_leaf = R.base_on_segre_leaf();
    const int m = R.map().source().m();
    for (const auto& g : multiindices(m, gamma_bound)) {
        SeriesVector r0 = R.R_at_origin(g);
        for (int lp = 0; lp < static_cast<int>(r0.size()); ++lp) {
            if (r0[static_cast<size_t>(lp)].is_zero()) continue;
            V.generators.push_back(r0[static_cast<size_t>(lp)]);
            V.tags.emplace_back(g, lp);
        }
    }
    return V;
}

FiniteResult s_finite(const EssentialVariety& V, std::uint64_t seed) {
    FiniteResult res;
    if (V.generators.empty()) {
        res.verdict = Verdict::no();  // no equations: the whole space
        return res;
    }
    const auto& vars = V.generators[0].vars();
    const int nv = static_cast<int>(vars.size());

    // negative certificate: a line through 0 on which the identities vanish
    // for the whole derivation family. The t' slots get s * direction while
    // the leaf parameters stay free, so the check is independent of the
    // derivation bound and a definite verdict stays stable when the bound is
    // raised.
    auto line_inside = [&](const std::vector<GRat>& dir) {
        if (V.on_segre_leaf.empty()) return false;
        const auto& leaf_vars = V.on_segre_leaf[0].vars();
        const int order = V.on_segre_leaf[0].order();
        std::vector<std::string> out_vars;
        for (const auto& v : leaf_vars) {
            bool is_tp = false;
            for (int j = 0; j < nv; ++j) is_tp = is_tp || v == vars[static_cast<size_t>(j)];
            if (!is_tp) out_vars.push_back(v);
        }
        out_vars.push_back("s");
        std::vector<Series> subs;
        for (const auto& v : leaf_vars) {
            int which = -1;
            for (int j = 0; j < nv; ++j)
                if (v == vars[static_cast<size_t>(j)]) which = j;
            if (which >= 0)
                subs.push_back(Series::variable(out_vars, order, "s")
                                   .scaled(dir[static_cast<size_t>(which)]));
            else
                subs.push_back(Series::variable(out_vars, order, v));
        }
        for (const auto& g : V.on_segre_leaf)
            if (!g.composed(subs).is_zero()) return false;
        return true;
    };
    for (int j = 0; j < nv; ++j) {
        std::vector<GRat> dir(static_cast<size_t>(nv), GRat(0));
        dir[static_cast<size_t>(j)] = GRat(1);
        if (line_inside(dir)) {
            res.verdict = Verdict::no();
            res.curve_direction = dir;
            return res;
        }
    }

    if (nv > 3) {
        res.verdict = Verdict::inconclusive(nv);
        return res;
    }

    // positive certificate: for each coordinate, a nonzero univariate
    // vanishing on the variety, by iterated pairwise resultants
    bool all_ok = true;
    std::vector<Series> univariates;
    for (int j = 0; j < nv && all_ok; ++j) {
        std::vector<Series> pool = V.generators;
        for (int o = 0; o < nv; ++o) {
            if (o == j) continue;
            const std::string& ov = vars[static_cast<size_t>(o)];
            std::vector<Series> with, without;
            for (const auto& p : pool)
                (degree_in(p, ov) > 0 ? with : without).push_back(p);
            std::vector<Series> next = without;
            for (size_t a = 0; a < with.size(); ++a)
                for (size_t b = a + 1; b < with.size() && next.size() < 24; ++b) {
                    Series r = resultant_in(with[a], with[b], ov);
                    if (!r.is_zero()) next.push_back(r);
                }
            pool = std::move(next);
        }
        // a nonzero polynomial purely in coordinate j?
        const Series* found = nullptr;
        for (const auto& p : pool) {
            if (p.is_zero()) continue;
            bool pure = true;
            for (int o = 0; o < nv; ++o)
                if (o != j && degree_in(p, vars[static_cast<size_t>(o)]) > 0) pure = false;
            if (pure && degree_in(p, vars[static_cast<size_t>(j)]) > 0) {
                found = &p;
                break;
            }
        }
        if (found)
            univariates.push_back(*found);
        else
            all_ok = false;
    }
    if (all_ok) {
        res.verdict = Verdict::yes();
        res.univariates = std::move(univariates);
        return res;
    }

    // sampled non-axis lines before giving up
    Rng rng(seed);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<GRat> dir;
        for (int i = 0; i < nv; ++i) dir.push_back(rng.small_grat(4));
        bool nonzero = false;
        for (const auto& d : dir) nonzero = nonzero || !d.is_zero();
        if (!nonzero) continue;
        if (line_inside(dir)) {
            res.verdict = Verdict::no();
            res.curve_direction = dir;
            return res;
        }
    }
    res.verdict = Verdict::inconclusive(0);
    return res;
}

NondegResult s_nondegenerate_map(ReflectionSystem& R, int gamma_bound) {
    NondegResult res;
    const int m = R.map().source().m();
    const int np = static_cast<int>(R.tprime_vars().size());

    struct Row {
        Expo gamma;
        int lp;
        std::vector<Series> entries;
        int weight;
    };
    std::vector<Row> rows;
    for (const auto& g : multiindices(m, gamma_bound)) {
        const int dp = R.map().target().d();
        for (int lp = 0; lp < dp; ++lp) {
            auto row = R.segre_row(g, lp);
            bool nonzero = false;
            for (const auto& e : row) nonzero = nonzero || !e.is_zero();
            if (nonzero) rows.push_back({g, lp, row, total(g)});
        }
    }
    if (static_cast<int>(rows.size()) < np) {
        res.verdict = Verdict::false_up_to(gamma_bound);
        return res;
    }

    // enumerate n'-subsets ordered by total derivation weight
    std::vector<int> idx(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == np) {
            subsets.push_back(cur);
            return;
        }
        for (int i = start; i < static_cast<int>(rows.size()); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::stable_sort(subsets.begin(), subsets.end(), [&](const auto& a, const auto& b) {
        int wa = 0, wb = 0;
        for (int i : a) wa += rows[static_cast<size_t>(i)].weight;
        for (int i : b) wb += rows[static_cast<size_t>(i)].weight;
        return wa < wb;
    });

    for (const auto& sel : subsets) {
        SeriesMatrix mat;
        int min_order = rows[static_cast<size_t>(sel[0])].entries[0].order();
        for (int i : sel)
            min_order = std::min(min_order, rows[static_cast<size_t>(i)].entries[0].order());
        for (int i : sel) {
            std::vector<Series> r;
            for (const auto& e : rows[static_cast<size_t>(i)].entries) r.push_back(e.truncated(min_order));
            mat.push_back(std::move(r));
        }
        Series dt = det(mat);
        if (!dt.is_zero()) {
            res.verdict = Verdict::yes();
            for (int i : sel)
                res.witness.emplace_back(rows[static_cast<size_t>(i)].gamma, rows[static_cast<size_t>(i)].lp);
            res.det_leading = leading_term_str(dt);
            return res;
        }
    }
    res.verdict = Verdict::false_up_to(gamma_bound);
    return res;
}

NondegResult s_nondegenerate_manifold(const GenericManifold& M, int beta_bound) {
    if (!M.verify_normal())
        throw PreconditionError("s_nondegenerate_manifold: requires normal coordinates");
    NondegResult res;
    const Frame& fr = M.frame();
    const int m = M.m();

    struct Row {
        Expo beta;
        int l;
        std::vector<Series> entries;  // d/dw_k of Theta^l_{zeta^beta}(w,0,0)
        int weight;
    };
    std::vector<Row> rows;
    for (const auto& b : multiindices(m, beta_bound, /*include_zero=*/false)) {
        for (int l = 0; l < M.d(); ++l) {
            Series th = M.theta()[static_cast<size_t>(l)];
            for (size_t k = 0; k < b.size(); ++k)
                for (std::uint32_t rep = 0; rep < b[k]; ++rep) th = th.derive(fr.zeta[k]);
            // restrict to (w, 0, 0)
            std::vector<Series> subs;
            for (const auto& v : fr.ambient) {
                if (std::find(fr.w.begin(), fr.w.end(), v) != fr.w.end())
                    subs.push_back(Series::variable(fr.w, th.order(), v));
                else
                    subs.push_back(Series::zero(fr.w, th.order()));
            }
            Series restricted = th.composed(subs);
            std::vector<Series> row;
            bool nonzero = false;
            for (const auto& wv : fr.w) {
                row.push_back(restricted.derive(wv));
                nonzero = nonzero || !row.back().is_zero();
            }
            if (nonzero) rows.push_back({b, l, row, total(b)});
        }
    }
    if (static_cast<int>(rows.size()) < m) {
        res.verdict = Verdict::false_up_to(beta_bound);
        return res;
    }

    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == m) {
            subsets.push_back(cur);
            return;
        }
        for (int i = start; i < static_cast<int>(rows.size()); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::stable_sort(subsets.begin(), subsets.end(), [&](const auto& a, const auto& b) {
        int wa = 0, wb = 0;
        for (int i : a) wa += rows[static_cast<size_t>(i)].weight;
        for (int i : b) wb += rows[static_cast<size_t>(i)].weight;
        return wa < wb;
    });
    for (const auto& sel : subsets) {
        int min_order = rows[static_cast<size_t>(sel[0])].entries[0].order();
        for (int i : sel)
            min_order = std::min(min_order, rows[static_cast<size_t>(i)].entries[0].order());
        SeriesMatrix mat;
        for (int i : sel) {
            std::vector<Series> r;
            for (const auto& e : rows[static_cast<size_t>(i)].entries) r.push_back(e.truncated(min_order));
            mat.push_back(std::move(r));
        }
        Series dt = det(mat);
        if (!dt.is_zero()) {
            res.verdict = Verdict::yes();
            for (int i : sel)
                res.witness.emplace_back(rows[static_cast<size_t>(i)].beta, rows[static_cast<size_t>(i)].l);
            res.det_leading = leading_term_str(dt);
            return res;
        }
    }
    res.verdict = Verdict::false_up_to(beta_bound);
    return res;
}

ClassificationReport classify_map(const FormalMap& h, const Bounds& b) {
    for (const auto& r : verify_maps_into(h))
        if (!r.is_zero())
            throw PreconditionError("classify_map: map does not send the source into the target");
    if (!h.source().verify_normal())
        throw PreconditionError("classify_map: source must be in normal coordinates");

    ReflectionSystem R(h);
    ClassificationReport rep;
    rep.order_used = h.order();
    rep.solvable = s_solvable(R, b.kappa_max);
    EssentialVariety V = essential_variety(R, b.gamma_bound);
    rep.finite = s_finite(V, b.seed);
    // an S-solvable map is S-finite; keep the stronger verdict if elimination
    // was inconclusive
    if (rep.solvable.verdict.definite_true() && !rep.finite.verdict.definite_true())
        rep.finite.verdict = Verdict::yes();
    rep.nondeg = s_nondegenerate_map(R, b.gamma_bound);
    rep.audit_ok = implication_audit(rep);
    return rep;
}

ClassificationReport manifold_classify(const GenericManifold& M, const Bounds& b) {
    if (!M.verify_normal())
        throw PreconditionError("manifold_classify: requires normal coordinates");
    ClassificationReport rep = classify_map(FormalMap::identity(M), b);
    rep.is_manifold = true;
    rep.audit_ok = implication_audit(rep);
    return rep;
}

bool implication_audit(const ClassificationReport& r) {
    if (r.solvable.verdict.definite_true() && r.finite.verdict.definite_false()) return false;
    if (r.is_manifold) {
        if (r.finite.verdict.definite_true() && r.nondeg.verdict.definite_false()) return false;
        if (r.solvable.verdict.definite_true() && r.nondeg.verdict.definite_false()) return false;
    }
    return true;
}

SolvabilityCertificate solvability_certificate(ReflectionSystem& R, const SolvableResult& s) {
    if (!s.verdict.definite_true())
        throw PreconditionError("solvability_certificate: map is not S-solvable at these bounds");
    const auto& tprime = R.tprime_vars();
    const size_t np = tprime.size();
    if (s.rows.size() != np) throw SeriesError("solvability_certificate: bad witness row count");

    int min_order = R.base_order();
    SeriesVector F;
    for (const auto& [g, lp] : s.rows) {
        Series row = R.R(g)[static_cast<size_t>(lp)];
        min_order = std::min(min_order, row.order());
        F.push_back(row);
    }
    for (auto& f : F) f = f.truncated(min_order);
    SeriesVector A = implicit_solve(F, tprime);

    // re-verify: A_j reproduces h_j on the complexification
    for (size_t j = 0; j < np; ++j) {
        Series target = R.map_component_on_m(static_cast<int>(j)).truncated(min_order);
        // A_j lives over the z-chart frame (rframe minus t'); embed to compare
        Series aj = A[j].embedded(R.rframe()).truncated(min_order);
        if (aj != target)
            throw SeriesError("solvability_certificate: certificate fails to reproduce the map");
    }
    SolvabilityCertificate cert;
    cert.kappa0 = s.kappa0;
    cert.A = A;
    return cert;
}

WeierstrassCertificate weierstrass_certificate(ReflectionSystem& R, int gamma_bound) {
    WeierstrassCertificate cert;
    const auto& tprime = R.tprime_vars();
    const int m = R.map().source().m();

    // degree-1 certificates whenever the map is solvable at this bound
    SolvableResult s = s_solvable(R, gamma_bound);
    if (s.verdict.definite_true()) {
        SolvabilityCertificate sc = solvability_certificate(R, s);
        for (size_t j = 0; j < tprime.size(); ++j) {
            Series a = sc.A[j].embedded(R.rframe());
            cert.polys.push_back({Series::constant(R.rframe(), a.order(), GRat(1)), -a});
            cert.degrees.push_back(1);
        }
        verify_weierstrass(R, cert);
        return cert;
    }

    // elimination route
    std::vector<Series> gens;
    for (const auto& g : multiindices(m, gamma_bound)) {
        for (const auto& comp : R.R(g))
            if (!comp.is_zero()) gens.push_back(comp);
    }
    for (size_t j = 0; j < tprime.size(); ++j) {
        std::vector<Series> pool = gens;
        for (size_t o = 0; o < tprime.size(); ++o) {
            if (o == j) continue;
            const std::string& ov = tprime[o];
            std::vector<Series> with, without;
            for (const auto& p : pool) (degree_in(p, ov) > 0 ? with : without).push_back(p);
            std::vector<Series> next = without;
            for (size_t a = 0; a < with.size(); ++a)
                for (size_t bx = a + 1; bx < with.size() && next.size() < 16; ++bx) {
                    Series r = resultant_in(with[a], with[bx], ov);
                    if (!r.is_zero()) next.push_back(r);
                }
            pool = std::move(next);
        }
        const Series* best = nullptr;
        int best_deg = 0;
        for (const auto& p : pool) {
            int dj = degree_in(p, tprime[j]);
            if (dj <= 0) continue;
            // leading coefficient must be a unit for monic normalisation
            Series lead = Series::zero(p.vars(), p.order());
            for (const auto& [e, c] : p.terms()) {
                int vi = p.var_index(tprime[j]);
                if (static_cast<int>(e[static_cast<size_t>(vi)]) == dj) {
                    Expo r = e;
                    r[static_cast<size_t>(vi)] = 0;
                    lead = lead + Series::monomial(p.vars(), p.order(), r, c);
                }
            }
            bool unit = !lead.constant_term().is_zero();
            bool tprime_free = true;
            for (size_t o = 0; o < tprime.size(); ++o)
                if (o != j && degree_in(lead, tprime[o]) > 0) tprime_free = false;
            if (unit && tprime_free && (!best || dj < best_deg)) {
                best = &p;
                best_deg = dj;
            }
        }
        if (!best)
            throw SeriesError("weierstrass_certificate: non-monic elimination output for " + tprime[j]);

        // normalise: divide every coefficient by the leading one
        const int vi = best->var_index(tprime[j]);
        std::vector<Series> coeffs(static_cast<size_t>(best_deg + 1),
                                   Series::zero(best->vars(), best->order()));
        for (const auto& [e, c] : best->terms()) {
            Expo r = e;
            int k = static_cast<int>(r[static_cast<size_t>(vi)]);
            r[static_cast<size_t>(vi)] = 0;
            coeffs[static_cast<size_t>(best_deg - k)] =
                coeffs[static_cast<size_t>(best_deg - k)] +
                Series::monomial(best->vars(), best->order(), r, c);
        }
        // the identities behind the generators are reliable below
        // base_order - gamma_bound; stamp the coefficients accordingly
        const int reliable = std::max(R.base_order() - gamma_bound, 2);
        Series lead_inv = coeffs[0].truncated(std::min(coeffs[0].order(), reliable)).inverted_unit();
        std::vector<Series> monic;
        for (auto& c : coeffs)
            monic.push_back(c.truncated(std::min(c.order(), reliable)) * lead_inv);
        cert.polys.push_back(std::move(monic));
        cert.degrees.push_back(best_deg);
    }
    verify_weierstrass(R, cert);
    return cert;
}

void verify_weierstrass(ReflectionSystem& R, const WeierstrassCertificate& cert) {
    const auto& tprime = R.tprime_vars();
    if (cert.polys.size() != tprime.size())
        throw SeriesError("verify_weierstrass: bad certificate arity");
    for (size_t j = 0; j < tprime.size(); ++j) {
        const auto& coeffs = cert.polys[j];
        int check_order = R.base_order();
        for (const auto& c : coeffs) check_order = std::min(check_order, c.order());
        Series hj = R.map_component_on_m(static_cast<int>(j)).truncated(check_order);
        Series acc = Series::zero(R.rframe(), check_order);
        const int deg = cert.degrees[j];
        for (int k = 0; k <= deg; ++k) {
            Series term = coeffs[static_cast<size_t>(k)].embedded(R.rframe()).truncated(check_order) *
                          hj.pow(static_cast<unsigned>(deg - k));
            acc = acc + term;
        }
        if (!acc.is_zero())
            throw SeriesError("verify_weierstrass: nonzero residual for component " + tprime[j]);
    }
}

}  // namespace crsegre
