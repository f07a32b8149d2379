#include "crsegre/cli.hpp"

#include <algorithm>
#include <sstream>

#include "crsegre/classify.hpp"
#include "crsegre/propagate.hpp"
#include "crsegre/segre.hpp"

namespace crsegre {

namespace {

int count_nonzero(const SeriesVector& v) {
    int n = 0;
    for (const auto& s : v)
        if (!s.is_zero()) ++n;
    return n;
}

std::string expo_str(const Expo& e) {
    std::string s = "(";
    for (size_t i = 0; i < e.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e[i]);
    }
    return s + ")";
}

std::string witness_str(const std::vector<std::pair<Expo, int>>& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ";";
        s += "gamma=" + expo_str(w[i].first) + ",l=" + std::to_string(w[i].second + 1);
    }
    return s;
}

// FNV-1a over the canonical text form
std::uint64_t checksum(const Series& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

const GenericManifold& find_manifold(const InputSet& in, const std::string& name) {
    auto it = in.manifolds.find(name);
    if (it == in.manifolds.end()) throw ParseError("unknown manifold '" + name + "'", 0, 0);
    return it->second;
}

const FormalMap& find_map(const InputSet& in, const std::string& name) {
    auto it = in.maps.find(name);
    if (it == in.maps.end()) throw ParseError("unknown map '" + name + "'", 0, 0);
    return it->second;
}

GenericManifold with_order(const GenericManifold& M, int order) {
    SeriesVector tb;
    for (const auto& s : M.theta_bar()) tb.push_back(s.truncated(std::min(order, s.order())));
    for (auto& s : tb)
        if (s.order() < order) s = s.extended_exactly(order);
    return GenericManifold::from_theta_bar(M.m(), M.d(), order, tb);
}

FormalMap with_order(const FormalMap& h, int order) {
    GenericManifold src = with_order(h.source(), order);
    GenericManifold dst = with_order(h.target().reframed(false), order);
    SeriesVector g, f;
    for (const auto& c : h.g()) {
        Series s = c.truncated(std::min(order, c.order()));
        g.push_back(s.order() < order ? s.extended_exactly(order) : s);
    }
    for (const auto& c : h.f()) {
        Series s = c.truncated(std::min(order, c.order()));
        f.push_back(s.order() < order ? s.extended_exactly(order) : s);
    }
    return FormalMap(src, dst, g, f);
}

void emit_classification(std::ostringstream& os, const ClassificationReport& rep) {
    os << "s_solvable=" << rep.solvable.verdict.str() << "\n";
    if (rep.solvable.verdict.definite_true()) os << "kappa0=" << rep.solvable.kappa0 << "\n";
    os << "s_finite=" << rep.finite.verdict.str() << "\n";
    os << "s_nondeg=" << rep.nondeg.verdict.str() << "\n";
    if (rep.nondeg.verdict.definite_true()) {
        os << "witness=" << witness_str(rep.nondeg.witness) << "\n";
        os << "witness_det_leading=" << rep.nondeg.det_leading << "\n";
    }
    os << "audit=" << (rep.audit_ok ? "pass" : "fail") << "\n";
    os << "order=" << rep.order_used << "\n";
}

bool all_inconclusive(const ClassificationReport& rep) {
    return rep.solvable.verdict.kind != Verdict::True &&
           rep.solvable.verdict.kind != Verdict::False &&
           rep.finite.verdict.kind != Verdict::True && rep.finite.verdict.kind != Verdict::False &&
           rep.nondeg.verdict.kind != Verdict::True && rep.nondeg.verdict.kind != Verdict::False;
}

// unit-modulus diagonal self-map family for the determination experiment
std::vector<FormalMap> build_family(const FormalMap& h, int family_size) {
    std::vector<FormalMap> family{h};
    static const std::vector<GRat> units = {
        GRat(1),
        GRat(-1),
        GRat::i(),
        -GRat::i(),
        GRat(mpq_class(3, 5), mpq_class(4, 5)),
        GRat(mpq_class(4, 5), mpq_class(3, 5)),
        GRat(mpq_class(3, 5), mpq_class(-4, 5)),
        GRat(mpq_class(5, 13), mpq_class(12, 13)),
    };
    const GenericManifold& M = h.source();
    for (size_t u = 1; u < units.size() && static_cast<int>(family.size()) < family_size; ++u) {
        SeriesVector g, f;
        for (int i = 0; i < h.target().m(); ++i)
            g.push_back(h.g()[static_cast<size_t>(i)].scaled(i == 0 ? units[u] : GRat(1)));
        for (int j = 0; j < h.target().d(); ++j) f.push_back(h.f()[static_cast<size_t>(j)]);
        try {
            FormalMap cand(M, h.target(), g, f);
            bool ok = true;
            for (const auto& r : verify_maps_into(cand)) ok = ok && r.is_zero();
            if (ok) family.push_back(cand);
        } catch (const SeriesError&) {
        }
    }
    return family;
}

RunResult dispatch(const RunConfig& cfg, const InputSet& inputs) {
    std::ostringstream os;
    RunResult res;
    if (cfg.order < 4) throw ParseError("order must be at least 4", 0, 0);
    if (cfg.kappa_max < 1 || cfg.gamma_bound < 1 || cfg.beta_bound < 1 || cfg.k_max < 1)
        throw ParseError("bounds must be at least 1", 0, 0);

    if (cfg.command == "verify-manifold") {
        const GenericManifold M = with_order(find_manifold(inputs, cfg.names.at(0)), cfg.order);
        auto [r1, r2] = verify_reality(M);
        os << "reality_residuals=" << count_nonzero(r1) + count_nonzero(r2) << "\n";
        os << "normal=" << (M.verify_normal() ? "true" : "false") << "\n";
        os << "order=" << M.order() << "\n";
    } else if (cfg.command == "verify-map") {
        const FormalMap h = with_order(find_map(inputs, cfg.names.at(0)), cfg.order);
        os << "maps_into_residuals=" << count_nonzero(verify_maps_into(h)) << "\n";
        os << "order=" << h.order() << "\n";
    } else if (cfg.command == "segre-type") {
        const GenericManifold M = with_order(find_manifold(inputs, cfg.names.at(0)), cfg.order);
        SegreTypeReport rep = segre_multitype(M, std::max(cfg.k_max, 3), cfg.seed);
        if (!rep.conclusive) {
            os << "inconclusive=ranks-not-stabilised\n";
            for (size_t k = 0; k < rep.ranks.size(); ++k)
                os << "rank_" << (k + 1) << "=" << rep.ranks[k] << "\n";
            res.exit_code = 4;
        } else {
            os << "mu=" << rep.mu << "\n";
            os << "multitype=" << M.m() << "," << M.m();
            for (int e : rep.e) os << "," << e;
            os << "\n";
            os << "minimal=" << (rep.minimal ? "true" : "false") << "\n";
            for (size_t k = 0; k < rep.ranks.size(); ++k)
                os << "rank_" << (k + 1) << "=" << rep.ranks[k] << "\n";
        }
        os << "order=" << M.order() << "\n";
    } else if (cfg.command == "minimality") {
        const GenericManifold M = with_order(find_manifold(inputs, cfg.names.at(0)), cfg.order);
        auto w = minimality_witness(M, cfg.seed);
        if (!w) {
            os << "witness=inconclusive\n";
            res.exit_code = 4;
        } else {
            os << "chain_length=" << w->chain_length << "\n";
            os << "rank_t=" << w->rank_t << "\n";
            os << "rank_tau=" << w->rank_tau << "\n";
            os << "returned=" << (w->returned ? "true" : "false") << "\n";
            os << "conjugate_rank_ok=" << (w->conjugate_checked ? "true" : "false") << "\n";
            os << "tuple=";
            for (size_t i = 0; i < w->tuple.size(); ++i) os << (i ? "," : "") << w->tuple[i].str();
            os << "\n";
        }
    } else if (cfg.command == "classify-manifold") {
        const GenericManifold M = with_order(find_manifold(inputs, cfg.names.at(0)), cfg.order);
        Bounds b{cfg.kappa_max, cfg.gamma_bound, cfg.beta_bound, cfg.seed};
        ClassificationReport rep = manifold_classify(M, b);
        emit_classification(os, rep);
        // manifold-level names for the identity-map flags
        os << "finitely_nondegenerate=" << rep.solvable.verdict.str() << "\n";
        os << "essentially_finite=" << rep.finite.verdict.str() << "\n";
        os << "s_nondegenerate=" << rep.nondeg.verdict.str() << "\n";
        NondegResult mn = s_nondegenerate_manifold(M, cfg.beta_bound);
        os << "s_nondeg_theta_route=" << mn.verdict.str() << "\n";
        if (all_inconclusive(rep)) res.exit_code = 4;
    } else if (cfg.command == "classify-map") {
        const FormalMap h = with_order(find_map(inputs, cfg.names.at(0)), cfg.order);
        Bounds b{cfg.kappa_max, cfg.gamma_bound, cfg.beta_bound, cfg.seed};
        ClassificationReport rep = classify_map(h, b);
        emit_classification(os, rep);
        if (all_inconclusive(rep)) res.exit_code = 4;
    } else if (cfg.command == "reflect") {
        const FormalMap h = with_order(find_map(inputs, cfg.names.at(0)), cfg.order);
        ReflectionSystem R(h);
        const int m = h.source().m();
        std::vector<Expo> gammas{Expo(static_cast<size_t>(m), 0)};
        for (int deg = 1; deg <= cfg.gamma_bound; ++deg) {
            std::vector<Expo> next;
            for (const auto& e : gammas) {
                if (static_cast<int>([&] {
                        int s = 0;
                        for (auto x : e) s += static_cast<int>(x);
                        return s;
                    }()) != deg - 1)
                    continue;
                for (int i = 0; i < m; ++i) {
                    Expo ne = e;
                    ne[static_cast<size_t>(i)] += 1;
                    if (std::find(next.begin(), next.end(), ne) == next.end() &&
                        std::find(gammas.begin(), gammas.end(), ne) == gammas.end())
                        next.push_back(ne);
                }
            }
            gammas.insert(gammas.end(), next.begin(), next.end());
        }
        for (const auto& g : gammas) {
            SeriesVector r0 = R.R_at_origin(g);
            for (size_t lp = 0; lp < r0.size(); ++lp) {
                os << "R_" << expo_str(g) << "_l" << (lp + 1) << "=";
                if (r0[lp].is_zero()) {
                    os << "0";
                } else {
                    // leading term only: lowest degree, then lex
                    const std::pair<const Expo, GRat>* best = nullptr;
                    int bd = 0;
                    for (const auto& t : r0[lp].terms()) {
                        int dsum = 0;
                        for (auto x : t.first) dsum += static_cast<int>(x);
                        if (!best || dsum < bd || (dsum == bd && t.first < best->first)) {
                            best = &t;
                            bd = dsum;
                        }
                    }
                    os << Series::monomial(r0[lp].vars(), r0[lp].order(), best->first, best->second)
                              .str();
                }
                os << "\n";
            }
        }
        os << "order=" << h.order() << "\n";
    } else if (cfg.command == "check-prop51") {
        const FormalMap h = with_order(find_map(inputs, cfg.names.at(0)), cfg.order);
        const int m = h.source().m();
        int checked = 0, matched = 0;
        std::vector<Expo> betas;
        std::vector<Expo> level{Expo(static_cast<size_t>(m), 0)};
        for (int deg = 1; deg <= cfg.beta_bound; ++deg) {
            std::vector<Expo> next;
            for (const auto& e : level)
                for (int i = 0; i < m; ++i) {
                    Expo ne = e;
                    ne[static_cast<size_t>(i)] += 1;
                    if (std::find(next.begin(), next.end(), ne) == next.end()) next.push_back(ne);
                }
            betas.insert(betas.end(), next.begin(), next.end());
            level = next;
        }
        for (const auto& b : betas) {
            SeriesVector rec = theta_beta_recursive(h, b);
            SeriesVector dir = theta_beta_direct(h, b);
            ++checked;
            bool ok = true;
            for (size_t l = 0; l < rec.size(); ++l) {
                int o = std::min(rec[l].order(), dir[l].order());
                ok = ok && (rec[l].truncated(o) == dir[l].truncated(o));
            }
            if (ok) ++matched;
            os << "beta=" << expo_str(b) << " match=" << (ok ? "yes" : "no") << "\n";
        }
        os << "checked=" << checked << "\n";
        os << "matched=" << matched << "\n";
        os << "order=" << h.order() << "\n";
        if (matched != checked) res.exit_code = 3;
    } else if (cfg.command == "propagate") {
        const FormalMap h = with_order(find_map(inputs, cfg.names.at(0)), cfg.order);
        ReflectionSystem R(h);
        NondegResult nd = s_nondegenerate_map(R, cfg.gamma_bound);
        if (!nd.verdict.definite_true())
            throw PreconditionError("propagate: map is not S-nondegenerate at these bounds");
        FundamentalSystem sys = default_fundamental_system(R, nd);
        int chain_bound = cfg.k_max;
        SegreTypeReport st = segre_multitype(h.source(), 3 * 2 * h.source().n(), cfg.seed);
        if (st.conclusive) chain_bound = std::min(chain_bound, 2 * st.mu);
        for (int k = 1; k <= chain_bound; ++k) {
            SeriesVector resid = verify_on_chain(sys, R, k);
            os << "chain_" << k << "_residual_terms=" << count_nonzero(resid) << "\n";
        }
        ChainJetTable T = chain_jet_table_direct(h, std::min(cfg.k_max, 3), 1);
        std::uint64_t sum = 0;
        for (const auto& [key, s] : T.entries) sum ^= checksum(s);
        os << "jet_table_checksum=" << sum << "\n";
        os << "order=" << h.order() << "\n";
    } else if (cfg.command == "determine") {
        const FormalMap h = with_order(find_map(inputs, cfg.names.at(0)), cfg.order);
        auto family = build_family(h, cfg.family_size);
        DeterminationBound bound = determination_maps(family, cfg.nu_max);
        os << "family_size=" << family.size() << "\n";
        os << "nu=" << bound.nu << "\n";
        os << "empirical=true\n";
        for (const auto& t : bound.trials) os << "trial=" << t << "\n";
        if (bound.nu < 0) res.exit_code = 4;
    } else if (cfg.command == "artin-check") {
        auto it = inputs.systems.find(cfg.names.at(0));
        if (it == inputs.systems.end())
            throw ParseError("unknown system '" + cfg.names.at(0) + "'", 0, 0);
        const InputSystem& sys = it->second;
        ArtinCheck chk = artin_hypothesis_check(sys.R, sys.y_vars, sys.g_hat);
        os << "holds=" << (chk.holds ? "true" : "false") << "\n";
        if (chk.holds) {
            os << "witness_rows=";
            for (size_t i = 0; i < chk.witness_rows.size(); ++i)
                os << (i ? "," : "") << (chk.witness_rows[i] + 1);
            os << "\n";
        }
    } else {
        throw ParseError("unknown command '" + cfg.command + "'", 0, 0);
    }
    res.report = os.str();
    return res;
}

}  // namespace

RunResult run_command(const RunConfig& cfg, const InputSet& inputs) {
    try {
        return dispatch(cfg, inputs);
    } catch (const ParseError& e) {
        return RunResult{std::string("error=parse: ") + e.what() + "\n", 2};
    } catch (const PreconditionError& e) {
        return RunResult{std::string("error=precondition: ") + e.what() + "\n", 3};
    } catch (const SeriesError& e) {
        return RunResult{std::string("error=precondition: ") + e.what() + "\n", 3};
    }
}

RunResult run_command(const RunConfig& cfg) {
    try {
        InputSet set;
        for (const auto& path : cfg.inputs) {
            InputSet one = parse_input_file(path);
            for (auto& [k, v] : one.manifolds) set.manifolds.emplace(k, std::move(v));
            for (auto& [k, v] : one.maps) set.maps.emplace(k, std::move(v));
            for (auto& [k, v] : one.systems) set.systems.emplace(k, std::move(v));
        }
        return run_command(cfg, set);
    } catch (const ParseError& e) {
        return RunResult{std::string("error=parse: ") + e.what() + "\n", 2};
    }
}

}  // namespace crsegre
