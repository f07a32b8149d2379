#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace crsegre {

/// Exact Gaussian rational: re + im*i with arbitrary-precision rational parts.
/// Parts are kept canonical (lowest terms, positive denominator) by GMP.
class GRat {
public:
    GRat() : re_(0), im_(0) {}
    GRat(long n) : re_(n), im_(0) {}
    GRat(long num, long den);
    GRat(mpq_class re, mpq_class im);

    static GRat i() { return GRat(mpq_class(0), mpq_class(1)); }
    static GRat from_parts(long re_num, long re_den, long im_num, long im_den);

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }

    GRat conj() const { return GRat(re_, -im_); }
    GRat inv() const;

    GRat operator-() const { return GRat(-re_, -im_); }
    GRat& operator+=(const GRat& o);
    GRat& operator-=(const GRat& o);
    GRat& operator*=(const GRat& o);
    GRat& operator/=(const GRat& o);

    friend GRat operator+(GRat a, const GRat& b) { return a += b; }
    friend GRat operator-(GRat a, const GRat& b) { return a -= b; }
    friend GRat operator*(GRat a, const GRat& b) { return a *= b; }
    friend GRat operator/(GRat a, const GRat& b) { return a /= b; }

    friend bool operator==(const GRat& a, const GRat& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GRat& a, const GRat& b) { return !(a == b); }
    friend bool operator<(const GRat& a, const GRat& b);

    /// Canonical text form, e.g. "1", "-2/3", "i", "(1/2-3/4*i)".
    std::string str() const;

private:
    mpq_class re_, im_;
};

std::ostream& operator<<(std::ostream& os, const GRat& q);

}  // namespace crsegre
