#include "crsegre/segre.hpp"

#include <algorithm>

#include "crsegre/rng.hpp"

namespace crsegre {

SeriesVector PointOnM::all() const {
    SeriesVector out;
    out.insert(out.end(), w.begin(), w.end());
    out.insert(out.end(), z.begin(), z.end());
    out.insert(out.end(), zeta.begin(), zeta.end());
    out.insert(out.end(), xi.begin(), xi.end());
    return out;
}

PointOnM PointOnM::origin(const GenericManifold& M, const std::vector<std::string>& params,
                          int order) {
    PointOnM p;
    Series zero = Series::zero(params, order);
    p.w.assign(static_cast<size_t>(M.m()), zero);
    p.z.assign(static_cast<size_t>(M.d()), zero);
    p.zeta.assign(static_cast<size_t>(M.m()), zero);
    p.xi.assign(static_cast<size_t>(M.d()), zero);
    return p;
}

namespace {

// compose a d-vector of manifold data (ambient frame) with point blocks
SeriesVector compose_on_point(const GenericManifold& M, const SeriesVector& data,
                              const SeriesVector& w, const SeriesVector& z,
                              const SeriesVector& zeta, const SeriesVector& xi) {
    const Frame& fr = M.frame();
    std::vector<Series> subs;
    subs.reserve(fr.ambient.size());
    for (int i = 0; i < M.m(); ++i) subs.push_back(w[static_cast<size_t>(i)]);
    for (int j = 0; j < M.d(); ++j) subs.push_back(z[static_cast<size_t>(j)]);
    for (int i = 0; i < M.m(); ++i) subs.push_back(zeta[static_cast<size_t>(i)]);
    for (int j = 0; j < M.d(); ++j) subs.push_back(xi[static_cast<size_t>(j)]);
    SeriesVector out;
    out.reserve(data.size());
    for (const auto& s : data) out.push_back(s.composed(subs));
    return out;
}

SeriesVector add_vec(const SeriesVector& a, const SeriesVector& b) {
    SeriesVector out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

SeriesVector sub_vec(const SeriesVector& a, const SeriesVector& b) {
    SeriesVector out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

SeriesVector scale_vec(const SeriesVector& a, const GRat& c) {
    SeriesVector out;
    out.reserve(a.size());
    for (const auto& s : a) out.push_back(s.scaled(c));
    return out;
}

}  // namespace

PointOnM flow(const GenericManifold& M, FieldKind field, const PointOnM& p,
              const SeriesVector& param) {
    for (const auto& r : m_residual(M, p))
        if (!r.is_zero()) throw SeriesError("flow: start point off the complexification");
    PointOnM q = p;
    switch (field) {
        case FieldKind::L: {
            if (static_cast<int>(param.size()) != M.m()) throw SeriesError("flow: L needs m parameters");
            q.w = add_vec(p.w, param);
            SeriesVector tb = compose_on_point(M, M.theta_bar(), q.w, p.z, p.zeta, p.xi);
            q.z = add_vec(p.xi, scale_vec(tb, GRat::i()));
            break;
        }
        case FieldKind::Lbar: {
            if (static_cast<int>(param.size()) != M.m())
                throw SeriesError("flow: Lbar needs m parameters");
            q.zeta = add_vec(p.zeta, param);
            SeriesVector th = compose_on_point(M, M.theta(), p.w, p.z, q.zeta, p.xi);
            q.xi = sub_vec(p.z, scale_vec(th, GRat::i()));
            break;
        }
        case FieldKind::Upsilon: {
            if (static_cast<int>(param.size()) != M.d())
                throw SeriesError("flow: Upsilon needs d parameters");
            q.z = add_vec(p.z, param);
            SeriesVector th_new = compose_on_point(M, M.theta(), p.w, q.z, p.zeta, p.xi);
            SeriesVector th_old = compose_on_point(M, M.theta(), p.w, p.z, p.zeta, p.xi);
            q.xi = sub_vec(add_vec(p.xi, param), scale_vec(sub_vec(th_new, th_old), GRat::i()));
            break;
        }
        case FieldKind::UpsilonBar: {
            if (static_cast<int>(param.size()) != M.d())
                throw SeriesError("flow: UpsilonBar needs d parameters");
            q.xi = add_vec(p.xi, param);
            SeriesVector tb_new = compose_on_point(M, M.theta_bar(), p.w, p.z, p.zeta, q.xi);
            SeriesVector tb_old = compose_on_point(M, M.theta_bar(), p.w, p.z, p.zeta, p.xi);
            q.z = add_vec(add_vec(p.z, param), scale_vec(sub_vec(tb_new, tb_old), GRat::i()));
            break;
        }
    }
    return q;
}

SeriesVector m_residual(const GenericManifold& M, const PointOnM& p) {
    SeriesVector th = compose_on_point(M, M.theta(), p.w, p.z, p.zeta, p.xi);
    SeriesVector out;
    for (int j = 0; j < M.d(); ++j) {
        out.push_back(p.xi[static_cast<size_t>(j)] - p.z[static_cast<size_t>(j)] +
                      th[static_cast<size_t>(j)].scaled(GRat::i()));
    }
    return out;
}

ChainMap chain_map(const GenericManifold& M, const ChainWord& word) {
    ChainMap c;
    c.word = word;
    c.order = M.order();
    for (int step = 1; step <= word.length; ++step) {
        bool is_l = word.l_first ? (step % 2 == 1) : (step % 2 == 0);
        const std::string stem = "p" + std::to_string(step) + (is_l ? "w" : "zeta");
        for (int i = 1; i <= M.m(); ++i) c.params.push_back(stem + std::to_string(i));
    }
    if (c.params.empty()) c.params.push_back("p0");  // degenerate zero-length chain
    PointOnM p = PointOnM::origin(M, c.params, c.order);
    int cursor = 0;
    for (int step = 1; step <= word.length; ++step) {
        bool is_l = word.l_first ? (step % 2 == 1) : (step % 2 == 0);
        SeriesVector param;
        for (int i = 0; i < M.m(); ++i)
            param.push_back(Series::variable(c.params, c.order, c.params[static_cast<size_t>(cursor + i)]));
        cursor += M.m();
        p = flow(M, is_l ? FieldKind::L : FieldKind::Lbar, p, param);
    }
    c.gamma = p;
    return c;
}

VectorFieldSystem build_fields(const GenericManifold& M) {
    VectorFieldSystem V;
    const Frame& fr = M.frame();
    const GRat I = GRat::i();
    V.Lz.assign(static_cast<size_t>(M.d()), std::vector<Series>());
    V.Lbarxi.assign(static_cast<size_t>(M.d()), std::vector<Series>());
    V.Uxi.assign(static_cast<size_t>(M.d()), std::vector<Series>());
    V.Ubarz.assign(static_cast<size_t>(M.d()), std::vector<Series>());
    for (int j = 0; j < M.d(); ++j) {
        const Series& tb = M.theta_bar()[static_cast<size_t>(j)];
        const Series& th = M.theta()[static_cast<size_t>(j)];
        for (int r = 0; r < M.m(); ++r) {
            V.Lz[static_cast<size_t>(j)].push_back(tb.derive(fr.w[static_cast<size_t>(r)]).scaled(I));
            V.Lbarxi[static_cast<size_t>(j)].push_back(
                th.derive(fr.zeta[static_cast<size_t>(r)]).scaled(-I));
        }
        for (int s = 0; s < M.d(); ++s) {
            Series diag = (j == s) ? Series::constant(fr.ambient, M.order() - 1, GRat(1))
                                   : Series::zero(fr.ambient, M.order() - 1);
            V.Uxi[static_cast<size_t>(j)].push_back(
                diag - th.derive(fr.z[static_cast<size_t>(s)]).scaled(I));
            V.Ubarz[static_cast<size_t>(j)].push_back(
                diag + tb.derive(fr.xi[static_cast<size_t>(s)]).scaled(I));
        }
    }
    return V;
}

Series apply_field(const GenericManifold& M, const VectorFieldSystem& V, FieldKind kind,
                   int component, const Series& F) {
    const Frame& fr = M.frame();
    const size_t c = static_cast<size_t>(component);
    const int out_order = F.order() - 1;
    auto coeff = [&](const Series& s) { return s.truncated(std::min(s.order(), out_order)); };
    Series acc = Series::zero(fr.ambient, out_order);
    switch (kind) {
        case FieldKind::L:
            acc = F.derive(fr.w[c]);
            for (int j = 0; j < M.d(); ++j)
                acc = acc + coeff(V.Lz[static_cast<size_t>(j)][c]) * F.derive(fr.z[static_cast<size_t>(j)]);
            break;
        case FieldKind::Lbar:
            acc = F.derive(fr.zeta[c]);
            for (int j = 0; j < M.d(); ++j)
                acc = acc +
                      coeff(V.Lbarxi[static_cast<size_t>(j)][c]) * F.derive(fr.xi[static_cast<size_t>(j)]);
            break;
        case FieldKind::Upsilon:
            acc = F.derive(fr.z[c]);
            for (int j = 0; j < M.d(); ++j)
                acc = acc + coeff(V.Uxi[static_cast<size_t>(j)][c]) * F.derive(fr.xi[static_cast<size_t>(j)]);
            break;
        case FieldKind::UpsilonBar:
            acc = F.derive(fr.xi[c]);
            for (int j = 0; j < M.d(); ++j)
                acc = acc + coeff(V.Ubarz[static_cast<size_t>(j)][c]) * F.derive(fr.z[static_cast<size_t>(j)]);
            break;
    }
    return acc;
}

int generic_rank_of_map(const SeriesVector& F, std::uint64_t seed) {
    if (F.empty()) return 0;
    const auto& vars = F[0].vars();
    SeriesMatrix J;
    for (const auto& comp : F) {
        std::vector<Series> row;
        for (const auto& v : vars) row.push_back(comp.derive(v));
        J.push_back(std::move(row));
    }
    return generic_rank(J, seed);
}

SegreTypeReport segre_multitype(const GenericManifold& M, int k_max, std::uint64_t seed) {
    if (k_max < 3) throw SeriesError("segre_multitype: k_max must be at least 3");
    SegreTypeReport rep;
    rep.order_used = M.order();
    int stabilised_at = -1;
    for (int k = 1; k <= k_max; ++k) {
        ChainMap c = chain_map(M, ChainWord{true, k});
        rep.ranks.push_back(generic_rank_of_map(c.gamma.all(), seed + static_cast<std::uint64_t>(k)));
        if (k >= 2 && rep.ranks[static_cast<size_t>(k - 1)] == rep.ranks[static_cast<size_t>(k - 2)]) {
            stabilised_at = k - 1;
            break;
        }
    }
    if (stabilised_at < 0) {
        rep.conclusive = false;
        return rep;
    }
    rep.conclusive = true;
    rep.mu = stabilised_at;
    rep.kappa = std::max(rep.mu - 2, 0);
    for (int j = 1; j <= rep.kappa; ++j)
        rep.e.push_back(rep.ranks[static_cast<size_t>(j + 1)] - rep.ranks[static_cast<size_t>(j)]);
    const int stable_rank = rep.ranks.back();
    rep.minimal = (stable_rank == 2 * M.m() + M.d());
    return rep;
}

std::optional<MinimalityWitness> minimality_witness(const GenericManifold& M, std::uint64_t seed,
                                                    int trials) {
    SegreTypeReport rep = segre_multitype(M, 3 * 2 * M.n(), seed);
    if (!rep.conclusive || !rep.minimal)
        throw SeriesError("minimality_witness: manifold is not minimal at this order");
    const int len = 2 * rep.mu;
    ChainMap chain = chain_map(M, ChainWord{true, len});
    const int n = M.n();

    SeriesMatrix jac_t, jac_tau;
    SeriesVector t_part, tau_part;
    t_part.insert(t_part.end(), chain.gamma.w.begin(), chain.gamma.w.end());
    t_part.insert(t_part.end(), chain.gamma.z.begin(), chain.gamma.z.end());
    tau_part.insert(tau_part.end(), chain.gamma.zeta.begin(), chain.gamma.zeta.end());
    tau_part.insert(tau_part.end(), chain.gamma.xi.begin(), chain.gamma.xi.end());
    for (const auto& comp : t_part) {
        std::vector<Series> row;
        for (const auto& v : chain.params) row.push_back(comp.derive(v));
        jac_t.push_back(std::move(row));
    }
    for (const auto& comp : tau_part) {
        std::vector<Series> row;
        for (const auto& v : chain.params) row.push_back(comp.derive(v));
        jac_tau.push_back(std::move(row));
    }

    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<GRat> tuple;
        tuple.reserve(chain.params.size());
        for (size_t i = 0; i < chain.params.size(); ++i) tuple.push_back(rng.small_grat(4));
        int rt = rank(eval_matrix(jac_t, tuple));
        int rtau = rank(eval_matrix(jac_tau, tuple));
        if (rt != n || rtau != n) continue;
        MinimalityWitness w;
        w.tuple = tuple;
        w.rank_t = rt;
        w.rank_tau = rtau;
        w.chain_length = len;
        bool returned = true;
        for (const auto& comp : chain.gamma.all())
            if (!comp.eval(tuple).is_zero()) returned = false;
        w.returned = returned;

        // conjugate tuple on the opposite word
        ChainMap other = chain_map(M, ChainWord{false, len});
        std::vector<GRat> conj_tuple;
        for (size_t b = 0; b < tuple.size() / static_cast<size_t>(M.m()); ++b) {
            size_t src = tuple.size() - (b + 1) * static_cast<size_t>(M.m());
            for (int i = 0; i < M.m(); ++i) conj_tuple.push_back(tuple[src + static_cast<size_t>(i)].conj());
        }
        SeriesMatrix jt2;
        SeriesVector t2;
        t2.insert(t2.end(), other.gamma.w.begin(), other.gamma.w.end());
        t2.insert(t2.end(), other.gamma.z.begin(), other.gamma.z.end());
        for (const auto& comp : t2) {
            std::vector<Series> row;
            for (const auto& v : other.params) row.push_back(comp.derive(v));
            jt2.push_back(std::move(row));
        }
        w.conjugate_checked = (rank(eval_matrix(jt2, conj_tuple)) == n);
        return w;
    }
    return std::nullopt;
}

PointOnM sigma_point(const PointOnM& p) {
    PointOnM q;
    auto conj_vec = [](const SeriesVector& v) {
        SeriesVector out;
        out.reserve(v.size());
        for (const auto& s : v) out.push_back(s.conjugated());
        return out;
    };
    q.w = conj_vec(p.zeta);
    q.z = conj_vec(p.xi);
    q.zeta = conj_vec(p.w);
    q.xi = conj_vec(p.z);
    return q;
}

}  // namespace crsegre
