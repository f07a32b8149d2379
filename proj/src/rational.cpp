#include "crsegre/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace crsegre {

GRat::GRat(long num, long den) : re_(num, den), im_(0) {
    if (den == 0) throw std::domain_error("GRat: zero denominator");
    re_.canonicalize();
}

GRat::GRat(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

GRat GRat::from_parts(long re_num, long re_den, long im_num, long im_den) {
    if (re_den == 0 || im_den == 0) throw std::domain_error("GRat: zero denominator");
    mpq_class r(re_num, re_den), i(im_num, im_den);
    r.canonicalize();
    i.canonicalize();
    return GRat(r, i);
}

GRat GRat::inv() const {
    if (is_zero()) throw std::domain_error("GRat: division by zero");
    mpq_class n = re_ * re_ + im_ * im_;
    return GRat(re_ / n, -im_ / n);
}

GRat& GRat::operator+=(const GRat& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GRat& GRat::operator-=(const GRat& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GRat& GRat::operator*=(const GRat& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

GRat& GRat::operator/=(const GRat& o) { return *this *= o.inv(); }

bool operator<(const GRat& a, const GRat& b) {
    int c = cmp(a.re_, b.re_);
    if (c != 0) return c < 0;
    return cmp(a.im_, b.im_) < 0;
}

std::string GRat::str() const {
    auto rat = [](const mpq_class& q) { return q.get_str(); };
    if (im_ == 0) return rat(re_);
    std::string im_part;
    if (im_ == 1)
        im_part = "i";
    else if (im_ == -1)
        im_part = "-i";
    else
        im_part = rat(im_) + "*i";
    if (re_ == 0) return im_part;
    std::string s = "(" + rat(re_);
    if (im_part[0] != '-') s += "+";
    s += im_part + ")";
    return s;
}

std::ostream& operator<<(std::ostream& os, const GRat& q) { return os << q.str(); }

}  // namespace crsegre
