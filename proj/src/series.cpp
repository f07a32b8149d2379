#include "crsegre/series.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace crsegre {

namespace {

int total_degree(const Expo& e) {
    int d = 0;
    for (auto x : e) d += static_cast<int>(x);
    return d;
}

// graded lex, used only for printing
bool grlex_less(const std::pair<Expo, GRat>& a, const std::pair<Expo, GRat>& b) {
    int da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da < db;
    return a.first < b.first;
}

}  // namespace

Series::Series(std::vector<std::string> vars, int order) : vars_(std::move(vars)), order_(order) {
    if (order_ < 0) throw SeriesError("Series: negative order");
}

Series Series::zero(const std::vector<std::string>& vars, int order) { return Series(vars, order); }

Series Series::constant(const std::vector<std::string>& vars, int order, const GRat& c) {
    Series s(vars, order);
    s.insert_term(Expo(vars.size(), 0), c);
    return s;
}

Series Series::variable(const std::vector<std::string>& vars, int order, const std::string& name) {
    Series s(vars, order);
    Expo e(vars.size(), 0);
    int i = s.var_index(name);
    if (i < 0) throw SeriesError("Series: unknown variable " + name);
    e[static_cast<size_t>(i)] = 1;
    s.insert_term(e, GRat(1));
    return s;
}

Series Series::monomial(const std::vector<std::string>& vars, int order, const Expo& e, const GRat& c) {
    if (e.size() != vars.size()) throw SeriesError("Series: exponent arity mismatch");
    Series s(vars, order);
    s.insert_term(e, c);
    return s;
}

void Series::insert_term(const Expo& e, const GRat& c) {
    if (c.is_zero()) return;
    if (total_degree(e) >= order_) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Series::require_same_frame(const Series& a, const Series& b, const char* op) {
    if (a.vars_ != b.vars_)
        throw SeriesError(std::string(op) + ": variable-set mismatch");
}

int Series::valuation() const {
    int v = order_;
    for (const auto& [e, c] : terms_) v = std::min(v, total_degree(e));
    return v;
}

GRat Series::constant_term() const { return coeff(Expo(vars_.size(), 0)); }

GRat Series::coeff(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? GRat(0) : it->second;
}

int Series::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

Series Series::operator-() const {
    Series r(vars_, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Series operator+(const Series& a, const Series& b) {
    Series::require_same_frame(a, b, "add");
    Series r(a.vars_, std::min(a.order_, b.order_));
    for (const auto& [e, c] : a.terms_) r.insert_term(e, c);
    for (const auto& [e, c] : b.terms_) r.insert_term(e, c);
    return r;
}

Series operator-(const Series& a, const Series& b) {
    Series::require_same_frame(a, b, "sub");
    Series r(a.vars_, std::min(a.order_, b.order_));
    for (const auto& [e, c] : a.terms_) r.insert_term(e, c);
    for (const auto& [e, c] : b.terms_) r.insert_term(e, -c);
    return r;
}

Series operator*(const Series& a, const Series& b) {
    Series::require_same_frame(a, b, "mul");
    Series r(a.vars_, std::min(a.order_, b.order_));
    const size_t n = a.vars_.size();
    for (const auto& [ea, ca] : a.terms_) {
        int da = total_degree(ea);
        if (da >= r.order_) continue;
        for (const auto& [eb, cb] : b.terms_) {
            if (da + total_degree(eb) >= r.order_) continue;
            Expo e(n);
            for (size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
            r.insert_term(e, ca * cb);
        }
    }
    return r;
}

Series Series::scaled(const GRat& c) const {
    Series r(vars_, order_);
    if (c.is_zero()) return r;
    for (const auto& [e, q] : terms_) r.terms_.emplace(e, q * c);
    return r;
}

Series Series::pow(unsigned k) const {
    Series r = Series::constant(vars_, order_, GRat(1));
    Series base = *this;
    while (k != 0) {
        if (k & 1u) r = r * base;
        k >>= 1u;
        if (k != 0) base = base * base;
    }
    return r;
}

Series Series::derive(const std::string& var) const {
    int i = var_index(var);
    if (i < 0) throw SeriesError("derive: unknown variable " + var);
    return derive(i);
}

Series Series::derive(int vi) const {
    Series r(vars_, std::max(order_ - 1, 0));
    const size_t i = static_cast<size_t>(vi);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Expo d = e;
        d[i] -= 1;
        r.insert_term(d, c * GRat(static_cast<long>(e[i])));
    }
    return r;
}

Series Series::truncated(int new_order) const {
    if (new_order > order_) throw SeriesError("truncated: cannot raise order");
    Series r(vars_, new_order);
    for (const auto& [e, c] : terms_) r.insert_term(e, c);
    return r;
}

Series Series::extended_exactly(int new_order) const {
    if (new_order < order_) return truncated(new_order);
    Series r(vars_, new_order);
    for (const auto& [e, c] : terms_) r.insert_term(e, c);
    return r;
}

Series Series::embedded(const std::vector<std::string>& new_vars) const {
    Series r(new_vars, order_);
    std::vector<size_t> where(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        int j = r.var_index(vars_[i]);
        if (j < 0) throw SeriesError("embedded: target frame lacks variable " + vars_[i]);
        where[i] = static_cast<size_t>(j);
    }
    for (const auto& [e, c] : terms_) {
        Expo ne(new_vars.size(), 0);
        for (size_t i = 0; i < vars_.size(); ++i) ne[where[i]] = e[i];
        r.insert_term(ne, c);
    }
    return r;
}

Series Series::renamed(const std::vector<std::string>& new_names) const {
    if (new_names.size() != vars_.size()) throw SeriesError("renamed: arity mismatch");
    Series r(new_names, order_);
    r.terms_ = terms_;
    return r;
}

Series Series::composed(const std::vector<Series>& subs) const {
    if (subs.size() != vars_.size())
        throw SeriesError("compose: need one substitution per variable");
    int out_order = order_;
    for (const auto& s : subs) {
        if (s.vars() != subs.front().vars())
            throw SeriesError("compose: substitutions disagree on variables");
        if (!s.constant_term().is_zero())
            throw SeriesError("compose: nonzero constant term in substitution");
        out_order = std::min(out_order, s.order());
    }
    const auto& out_vars = subs.front().vars();
    Series acc = Series::zero(out_vars, out_order);

    // powers of each substituted series, computed on demand
    std::vector<std::vector<Series>> pows(subs.size());
    for (size_t i = 0; i < subs.size(); ++i)
        pows[i].push_back(Series::constant(out_vars, out_order, GRat(1)));
    auto power = [&](size_t i, std::uint32_t k) -> const Series& {
        auto& cache = pows[i];
        while (cache.size() <= k) cache.push_back(cache.back() * subs[i].truncated(out_order));
        return cache[k];
    };

    for (const auto& [e, c] : terms_) {
        if (total_degree(e) >= out_order && total_degree(e) > 0) {
            // substituted series have valuation >= 1, so this monomial only
            // produces terms of degree >= order: skip it outright
            bool all_pos = true;
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0 && subs[i].valuation() == 0) all_pos = false;
            if (all_pos) continue;
        }
        Series t = Series::constant(out_vars, out_order, c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t = t * power(i, e[i]);
        acc = acc + t;
    }
    return acc;
}

Series Series::inverted_unit() const {
    GRat c0 = constant_term();
    if (c0.is_zero()) throw SeriesError("invert_unit: zero constant term");
    Series g = Series::constant(vars_, order_, c0.inv());
    Series two = Series::constant(vars_, order_, GRat(2));
    // Newton iteration g <- g(2 - f g); doubles the agreement each sweep.
    int correct = 1;
    while (correct < order_) {
        g = g * (two - (*this) * g);
        correct *= 2;
    }
    return g;
}

GRat Series::eval(const std::vector<GRat>& point) const {
    if (point.size() != vars_.size()) throw SeriesError("eval: point arity mismatch");
    GRat acc(0);
    for (const auto& [e, c] : terms_) {
        GRat t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

Series Series::conjugated() const {
    Series r(vars_, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
    return r;
}

Series Series::homogeneous_part(int k) const {
    Series r(vars_, order_);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) == k) r.terms_.emplace(e, c);
    return r;
}

bool operator==(const Series& a, const Series& b) {
    return a.vars_ == b.vars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
}

std::string Series::str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Expo, GRat>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), grlex_less);
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : ts) {
        std::string cs = c.str();
        bool neg = cs.size() > 1 && cs[0] == '-' && cs.find('(') == std::string::npos;
        if (first) {
            if (neg) {
                os << "-";
                cs = cs.substr(1);
            }
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = cs.substr(1);
        }
        first = false;
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) {
            os << cs;
        } else if (cs == "1") {
            os << mono;
        } else if (cs == "i" || cs == "-i") {
            os << cs << "*" << mono;
        } else {
            os << cs << "*" << mono;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.str(); }

void require_uniform(const SeriesVector& v, const char* what) {
    for (size_t i = 1; i < v.size(); ++i) {
        if (v[i].vars() != v[0].vars() || v[i].order() != v[0].order())
            throw SeriesError(std::string(what) + ": components disagree on vars/order");
    }
}

Series ring_op(const Series& a, const Series& b, RingOp which) {
    if (a.vars() != b.vars()) throw SeriesError("ring_op: variable-set mismatch");
    if (a.order() != b.order()) throw SeriesError("ring_op: order mismatch");
    switch (which) {
        case RingOp::Add: return a + b;
        case RingOp::Sub: return a - b;
        case RingOp::Mul: return a * b;
    }
    throw SeriesError("ring_op: bad op");
}

Series ring_scale(const Series& f, const GRat& c) { return f.scaled(c); }

namespace {

// exact division of multivariate polynomials (as term maps) by lead reduction
bool poly_divide(const std::map<Expo, GRat>& num, const std::map<Expo, GRat>& den,
                 std::map<Expo, GRat>& quot) {
    std::map<Expo, GRat> rem = num;
    auto lead = den.rbegin();  // largest exponent in plain lex map order
    while (!rem.empty()) {
        auto lt = rem.rbegin();
        Expo q(lt->first.size());
        bool divisible = true;
        for (size_t i = 0; i < q.size(); ++i) {
            if (lt->first[i] < lead->first[i]) {
                divisible = false;
                break;
            }
            q[i] = lt->first[i] - lead->first[i];
        }
        if (!divisible) return false;
        GRat qc = lt->second / lead->second;
        quot[q] = qc;
        for (const auto& [e, c] : den) {
            Expo pe(q.size());
            for (size_t i = 0; i < q.size(); ++i) pe[i] = e[i] + q[i];
            auto it = rem.find(pe);
            GRat nc = (it == rem.end() ? GRat(0) : it->second) - qc * c;
            if (it != rem.end()) rem.erase(it);
            if (!nc.is_zero()) rem.emplace(pe, nc);
        }
    }
    return true;
}

}  // namespace

Series divide_exact(const Series& a, const Series& b) {
    if (a.vars() != b.vars()) throw SeriesError("divide_exact: variable-set mismatch");
    if (b.is_zero()) throw SeriesError("divide_exact: division by zero series");
    const int v = b.valuation();
    Series blow = b.homogeneous_part(v);
    const int out_order = std::max(std::min(a.order(), b.order()) - v, 0);
    if (a.valuation() < v) throw SeriesError("divide_exact: numerator valuation too small");

    Series q = Series::zero(a.vars(), out_order);
    Series rem = a.truncated(std::min(a.order(), out_order + v));
    for (int k = 0; k < out_order; ++k) {
        Series blk = rem.homogeneous_part(k + v);
        if (blk.is_zero()) continue;
        std::map<Expo, GRat> quot;
        if (!poly_divide(blk.terms(), blow.terms(), quot))
            throw SeriesError("divide_exact: nonzero division remainder at degree " + std::to_string(k + v));
        Series qk(a.vars(), out_order);
        for (const auto& [e, c] : quot) qk = qk + Series::monomial(a.vars(), out_order, e, c);
        q = q + qk;
        rem = rem - (qk.extended_exactly(rem.order()) * b.truncated(rem.order()));
    }
    if (!rem.is_zero()) throw SeriesError("divide_exact: nonzero division remainder");
    return q;
}

SeriesVector implicit_solve(const SeriesVector& F, const std::vector<std::string>& y_vars) {
    if (F.empty()) return {};
    require_uniform(F, "implicit_solve");
    const auto& vars = F[0].vars();
    const int order = F[0].order();
    const size_t d = y_vars.size();
    if (F.size() != d) throw SeriesError("implicit_solve: need as many equations as unknowns");

    std::vector<int> y_idx;
    std::vector<std::string> x_vars;
    for (const auto& yn : y_vars) {
        int i = F[0].var_index(yn);
        if (i < 0) throw SeriesError("implicit_solve: unknown variable " + yn);
        y_idx.push_back(i);
    }
    for (const auto& v : vars)
        if (std::find(y_vars.begin(), y_vars.end(), v) == y_vars.end()) x_vars.push_back(v);

    for (const auto& f : F)
        if (!f.constant_term().is_zero())
            throw SeriesError("implicit_solve: inconsistent system, F(0,0) != 0");

    // constant Jacobian dF/dy at the origin
    std::vector<std::vector<GRat>> J(d, std::vector<GRat>(d));
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c) J[r][c] = F[r].derive(y_idx[c]).constant_term();

    // invert by Gauss-Jordan
    std::vector<std::vector<GRat>> inv(d, std::vector<GRat>(d));
    for (size_t i = 0; i < d; ++i) inv[i][i] = GRat(1);
    for (size_t col = 0; col < d; ++col) {
        size_t piv = col;
        while (piv < d && J[piv][col].is_zero()) ++piv;
        if (piv == d) throw SeriesError("implicit_solve: singular Jacobian at origin");
        std::swap(J[piv], J[col]);
        std::swap(inv[piv], inv[col]);
        GRat p = J[col][col].inv();
        for (size_t c = 0; c < d; ++c) {
            J[col][c] *= p;
            inv[col][c] *= p;
        }
        for (size_t r = 0; r < d; ++r) {
            if (r == col || J[r][col].is_zero()) continue;
            GRat f = J[r][col];
            for (size_t c = 0; c < d; ++c) {
                J[r][c] -= f * J[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }

    // Newton sweeps with the constant Jacobian inverse; each sweep gains at
    // least one degree of agreement.
    SeriesVector y(d, Series::zero(x_vars, order));
    for (int sweep = 0; sweep < order; ++sweep) {
        // residual F(x, y(x))
        std::vector<Series> subs;
        subs.reserve(vars.size());
        for (const auto& v : vars) {
            auto yit = std::find(y_vars.begin(), y_vars.end(), v);
            if (yit == y_vars.end()) {
                subs.push_back(Series::variable(x_vars, order, v));
            } else {
                subs.push_back(y[static_cast<size_t>(yit - y_vars.begin())]);
            }
        }
        SeriesVector R(d);
        bool all_zero = true;
        for (size_t r = 0; r < d; ++r) {
            R[r] = F[r].composed(subs);
            all_zero = all_zero && R[r].is_zero();
        }
        if (all_zero) break;
        for (size_t r = 0; r < d; ++r) {
            Series delta = Series::zero(x_vars, order);
            for (size_t c = 0; c < d; ++c) delta = delta + R[c].scaled(inv[r][c]);
            y[r] = y[r] - delta;
        }
    }
    return y;
}

}  // namespace crsegre
