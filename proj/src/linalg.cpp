#include "crsegre/linalg.hpp"

#include <algorithm>
#include <unordered_map>

#include "crsegre/rng.hpp"

namespace crsegre {

namespace {

void check_square(const SeriesMatrix& m, const char* what) {
    for (const auto& row : m)
        if (row.size() != m.size()) throw SeriesError(std::string(what) + ": matrix not square");
}

// determinant of the submatrix given by rows 0..k-1 of `rows` and the column
// subset encoded in `mask`, by expansion along the last selected row
Series det_rec(const SeriesMatrix& m, const std::vector<int>& rows, unsigned mask,
               std::unordered_map<unsigned, Series>& memo, const Series& zero) {
    int k = __builtin_popcount(mask);
    if (k == 0) {
        Series one = Series::constant(zero.vars(), zero.order(), GRat(1));
        return one;
    }
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const int row = rows[static_cast<size_t>(k - 1)];
    Series acc = zero;
    int pos = 0;
    for (unsigned c = 0; c < 32; ++c) {
        if (!(mask & (1u << c))) continue;
        unsigned sub = mask & ~(1u << c);
        const Series& entry = m[static_cast<size_t>(row)][c];
        if (!entry.is_zero()) {
            Series minor = det_rec(m, rows, sub, memo, zero);
            Series term = entry * minor;
            // cofactor sign for expansion along the last row of the k x k block
            acc = ((k - 1 + pos) % 2 == 0) ? acc + term : acc - term;
        }
        ++pos;
    }
    memo.emplace(mask, acc);
    return acc;
}

}  // namespace

Series det(const SeriesMatrix& m) {
    check_square(m, "det");
    if (m.empty()) throw SeriesError("det: empty matrix");
    const Series zero = Series::zero(m[0][0].vars(), m[0][0].order());
    std::vector<int> rows(m.size());
    for (size_t i = 0; i < m.size(); ++i) rows[i] = static_cast<int>(i);
    std::unordered_map<unsigned, Series> memo;
    return det_rec(m, rows, (1u << m.size()) - 1u, memo, zero);
}

SeriesMatrix adjugate(const SeriesMatrix& m) {
    check_square(m, "adjugate");
    const size_t n = m.size();
    const Series zero = Series::zero(m[0][0].vars(), m[0][0].order());
    SeriesMatrix adj(n, std::vector<Series>(n, zero));
    if (n == 1) {
        adj[0][0] = Series::constant(m[0][0].vars(), m[0][0].order(), GRat(1));
        return adj;
    }
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < n; ++c) {
            SeriesMatrix minor;
            for (size_t i = 0; i < n; ++i) {
                if (i == r) continue;
                std::vector<Series> row;
                for (size_t j = 0; j < n; ++j) {
                    if (j == c) continue;
                    row.push_back(m[i][j]);
                }
                minor.push_back(std::move(row));
            }
            Series cof = det(minor);
            if ((r + c) % 2 == 1) cof = -cof;
            adj[c][r] = cof;  // transpose of cofactors
        }
    }
    return adj;
}

int rank(RatMatrix m) {
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        GRat p = m[r][c].inv();
        for (size_t j = c; j < cols; ++j) m[r][j] *= p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            GRat f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

RatMatrix eval_matrix(const SeriesMatrix& m, const std::vector<GRat>& point) {
    RatMatrix out(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        out[i].reserve(m[i].size());
        for (const auto& s : m[i]) out[i].push_back(s.eval(point));
    }
    return out;
}

namespace {

// does any r x r minor survive as a nonzero series?
bool some_minor_nonzero(const SeriesMatrix& m, int r) {
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    std::vector<int> rsel(static_cast<size_t>(r)), csel(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) rsel[static_cast<size_t>(i)] = i;
    auto next_subset = [](std::vector<int>& s, int n) {
        int k = static_cast<int>(s.size());
        int i = k - 1;
        while (i >= 0 && s[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) return false;
        ++s[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) s[static_cast<size_t>(j)] = s[static_cast<size_t>(j - 1)] + 1;
        return true;
    };
    do {
        for (int i = 0; i < r; ++i) csel[static_cast<size_t>(i)] = i;
        do {
            SeriesMatrix sub;
            bool has_zero_row = false;
            for (int i = 0; i < r; ++i) {
                std::vector<Series> row;
                bool all_zero = true;
                for (int j = 0; j < r; ++j) {
                    row.push_back(m[static_cast<size_t>(rsel[static_cast<size_t>(i)])]
                                   [static_cast<size_t>(csel[static_cast<size_t>(j)])]);
                    all_zero = all_zero && row.back().is_zero();
                }
                if (all_zero) {
                    has_zero_row = true;
                    break;
                }
                sub.push_back(std::move(row));
            }
            if (!has_zero_row && !det(sub).is_zero()) return true;
        } while (next_subset(csel, cols));
    } while (next_subset(rsel, rows));
    return false;
}

}  // namespace

int generic_rank(const SeriesMatrix& m, std::uint64_t seed) {
    if (m.empty() || m[0].empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    const int cap = std::min(rows, cols);
    const auto& vars = m[0][0].vars();

    Rng rng(seed);
    int lower = 0;
    for (int trial = 0; trial < 8 && lower < cap; ++trial) {
        std::vector<GRat> point;
        point.reserve(vars.size());
        for (size_t i = 0; i < vars.size(); ++i) point.push_back(rng.small_grat());
        lower = std::max(lower, rank(eval_matrix(m, point)));
    }
    // a nonzero evaluation certifies a nonvanishing minor, so `lower` is firm;
    // climbing past it needs the exact minor search
    int r = lower;
    while (r < cap && some_minor_nonzero(m, r + 1)) ++r;
    return r;
}

SeriesVector solve_cramer(const SeriesMatrix& m, const SeriesVector& rhs) {
    check_square(m, "solve_cramer");
    if (m.size() != rhs.size()) throw SeriesError("solve_cramer: shape mismatch");
    Series d = det(m);
    if (d.is_zero()) throw SeriesError("solve_cramer: singular matrix");
    SeriesMatrix adj = adjugate(m);
    SeriesVector x;
    x.reserve(rhs.size());
    for (size_t i = 0; i < rhs.size(); ++i) {
        Series acc = Series::zero(rhs[0].vars(), rhs[0].order());
        for (size_t j = 0; j < rhs.size(); ++j) acc = acc + adj[i][j] * rhs[j];
        x.push_back(divide_exact(acc, d));
    }
    return x;
}

}  // namespace crsegre

namespace crsegre {

Series bareiss_det(SeriesMatrix m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw SeriesError("bareiss_det: matrix not square");
    if (n == 0) throw SeriesError("bareiss_det: empty matrix");

    // stamp a safe order: the determinant degree is bounded by the sum over
    // rows of the maximal entry degree, and intermediate numerators are
    // products of two such minors, so double the bound
    int degsum = 0;
    for (const auto& row : m) {
        int rowmax = 0;
        for (const auto& e : row) {
            for (const auto& [expo, c] : e.terms()) {
                int d = 0;
                for (auto x : expo) d += static_cast<int>(x);
                rowmax = std::max(rowmax, d);
            }
        }
        degsum += rowmax;
    }
    const int bound = 2 * degsum + 2;
    for (auto& row : m)
        for (auto& e : row) e = e.extended_exactly(std::max(e.order(), bound));

    const auto& vars = m[0][0].vars();
    Series prev = Series::constant(vars, bound, GRat(1));
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        // pivot search
        size_t pr = k, pc = k;
        bool found = false;
        for (size_t i = k; i < n && !found; ++i)
            for (size_t j = k; j < n && !found; ++j)
                if (!m[i][j].is_zero()) {
                    pr = i;
                    pc = j;
                    found = true;
                }
        if (!found) return Series::zero(vars, bound);
        if (pr != k) {
            std::swap(m[pr], m[k]);
            sign = -sign;
        }
        if (pc != k) {
            for (auto& row : m) std::swap(row[pc], row[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Series num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                // quotients are exact minors of degree < bound: re-stamp so
                // later products stay complete
                m[i][j] = num.is_zero() ? num : divide_exact(num, prev).extended_exactly(bound);
            }
            m[i][k] = Series::zero(vars, bound);
        }
        prev = m[k][k];
    }
    Series d = m[n - 1][n - 1];
    return sign < 0 ? -d : d;
}

int degree_in(const Series& f, const std::string& var) {
    int vi = f.var_index(var);
    if (vi < 0) throw SeriesError("degree_in: unknown variable " + var);
    int deg = -1;
    for (const auto& [e, c] : f.terms()) deg = std::max(deg, static_cast<int>(e[static_cast<size_t>(vi)]));
    return deg;  // -1 for the zero series
}

namespace {

// coefficients of f as a polynomial in `var`; coefficient k does not involve var
std::vector<Series> univariate_coeffs(const Series& f, const std::string& var, int deg) {
    int vi = f.var_index(var);
    std::vector<Series> out(static_cast<size_t>(deg + 1), Series::zero(f.vars(), f.order()));
    for (const auto& [e, c] : f.terms()) {
        Expo r = e;
        int k = static_cast<int>(r[static_cast<size_t>(vi)]);
        r[static_cast<size_t>(vi)] = 0;
        out[static_cast<size_t>(k)] = out[static_cast<size_t>(k)] + Series::monomial(f.vars(), f.order(), r, c);
    }
    return out;
}

}  // namespace

Series resultant_in(const Series& f, const Series& g, const std::string& var) {
    const int df = degree_in(f, var);
    const int dg = degree_in(g, var);
    if (df < 0 || dg < 0) throw SeriesError("resultant_in: zero input polynomial");
    if (df == 0 && dg == 0) throw SeriesError("resultant_in: neither input involves the variable");
    auto total_deg = [](const Series& s) {
        int d = 0;
        for (const auto& [e, c] : s.terms()) {
            int t = 0;
            for (auto x : e) t += static_cast<int>(x);
            d = std::max(d, t);
        }
        return d;
    };
    if (df == 0) return f.extended_exactly(total_deg(f) * dg + 1).pow(static_cast<unsigned>(dg));
    if (dg == 0) return g.extended_exactly(total_deg(g) * df + 1).pow(static_cast<unsigned>(df));

    std::vector<Series> fc = univariate_coeffs(f, var, df);
    std::vector<Series> gc = univariate_coeffs(g, var, dg);
    const size_t size = static_cast<size_t>(df + dg);
    SeriesMatrix syl(size, std::vector<Series>(size, Series::zero(f.vars(), f.order())));
    for (int r = 0; r < dg; ++r)
        for (int k = 0; k <= df; ++k)
            syl[static_cast<size_t>(r)][static_cast<size_t>(r + k)] = fc[static_cast<size_t>(df - k)];
    for (int r = 0; r < df; ++r)
        for (int k = 0; k <= dg; ++k)
            syl[static_cast<size_t>(dg + r)][static_cast<size_t>(r + k)] = gc[static_cast<size_t>(dg - k)];
    return bareiss_det(std::move(syl));
}

}  // namespace crsegre
