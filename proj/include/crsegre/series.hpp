#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "crsegre/rational.hpp"

namespace crsegre {

/// Exponent multiindex, one entry per variable of the owning series.
using Expo = std::vector<std::uint32_t>;

struct SeriesError : std::runtime_error {
    explicit SeriesError(const std::string& what) : std::runtime_error(what) {}
};

/// Sparse truncated multivariate formal power series over the Gaussian
/// rationals. Terms of total degree >= order are not represented: a series
/// "of order N" carries exact coefficients for all monomials of degree < N
/// and says nothing above. Immutable in spirit: all operations return new
/// values.
class Series {
public:
    Series() : order_(0) {}
    Series(std::vector<std::string> vars, int order);

    static Series zero(const std::vector<std::string>& vars, int order);
    static Series constant(const std::vector<std::string>& vars, int order, const GRat& c);
    static Series variable(const std::vector<std::string>& vars, int order, const std::string& name);
    /// Single monomial c * prod vars^expo.
    static Series monomial(const std::vector<std::string>& vars, int order, const Expo& e, const GRat& c);

    const std::vector<std::string>& vars() const { return vars_; }
    int order() const { return order_; }
    const std::map<Expo, GRat>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    /// Lowest total degree of a nonzero term; order() if zero.
    int valuation() const;
    GRat constant_term() const;
    GRat coeff(const Expo& e) const;
    int var_index(const std::string& name) const;

    Series operator-() const;
    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    Series scaled(const GRat& c) const;
    Series pow(unsigned k) const;

    /// Termwise partial derivative; output order drops by one.
    Series derive(const std::string& var) const;
    Series derive(int var_index) const;

    /// Restrict to degrees < new_order (new_order <= order).
    Series truncated(int new_order) const;
    /// Caller asserts the series is an exact polynomial with no discarded
    /// tail; re-stamps it with a higher order.
    Series extended_exactly(int new_order) const;

    /// Reinterpret over a superset variable list (injective name mapping).
    Series embedded(const std::vector<std::string>& new_vars) const;
    Series renamed(const std::vector<std::string>& new_names) const;

    /// Full substitution: every variable of *this gets a series over a common
    /// target variable list. Substituted series must have zero constant term.
    /// Result order = min(order, substitution orders).
    Series composed(const std::vector<Series>& subs) const;

    /// Multiplicative inverse of a unit (nonzero constant term); same order.
    Series inverted_unit() const;

    /// Exact value of the truncation polynomial at a rational point.
    GRat eval(const std::vector<GRat>& point) const;

    /// Coefficientwise complex conjugation.
    Series conjugated() const;

    /// Homogeneous part of total degree k.
    Series homogeneous_part(int k) const;

    friend bool operator==(const Series& a, const Series& b);
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    /// Deterministic text form, graded-lex term order.
    std::string str() const;

private:
    void insert_term(const Expo& e, const GRat& c);
    static void require_same_frame(const Series& a, const Series& b, const char* op);

    std::vector<std::string> vars_;
    int order_ = 0;
    std::map<Expo, GRat> terms_;
};

std::ostream& operator<<(std::ostream& os, const Series& s);

/// Fixed-length vector of series sharing variables and order.
using SeriesVector = std::vector<Series>;

void require_uniform(const SeriesVector& v, const char* what);

/// Checked ring entry point: enforces the shared vars+order contract.
enum class RingOp { Add, Sub, Mul };
Series ring_op(const Series& a, const Series& b, RingOp which);

/// c * f with the same contract.
Series ring_scale(const Series& f, const GRat& c);

/// Exact truncated division: find c with b*c == a (mod order). The quotient
/// is found degree by degree against the lowest homogeneous block of b; a
/// nonzero remainder at any degree throws. Result order = a.order - val(b).
Series divide_exact(const Series& a, const Series& b);

/// Solve F(x, y(x)) == 0 mod order for y with y(0) = 0, where the trailing
/// |y_vars| variables of F's frame are the unknowns. Requires F(0,0) = 0 and
/// an invertible constant Jacobian dF/dy(0,0). Newton lifting, one degree of
/// agreement gained per sweep.
SeriesVector implicit_solve(const SeriesVector& F, const std::vector<std::string>& y_vars);

}  // namespace crsegre
