#include "crsegre/parse.hpp"

#include <cctype>

namespace crsegre {

namespace {

class ExprParser {
public:
    ExprParser(const std::string& text, const std::vector<std::string>& vars, int order, int line,
               int col_offset)
        : text_(text), vars_(vars), order_(order), line_(line), col_offset_(col_offset) {}

    Series parse() {
        Series acc = Series::zero(vars_, order_);
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (get() == '-');
        for (;;) {
            Series t = term();
            acc = neg ? acc - t : acc + t;
            skip_ws();
            if (pos_ >= text_.size()) break;
            char c = get();
            if (c == '+')
                neg = false;
            else if (c == '-')
                neg = true;
            else
                fail("expected '+' or '-'");
        }
        return acc;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, static_cast<int>(pos_) + 1 + col_offset_);
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    long integer() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            get();
        }
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (get() - '0');
        return neg ? -v : v;
    }

    // a | a/b | a/b*i | i, with leading sign already consumed by caller
    GRat simple_coeff() {
        skip_ws();
        if (peek() == 'i' && !is_ident_char(peek_at(1))) {
            get();
            return GRat::i();
        }
        long num = integer();
        long den = 1;
        if (peek() == '/') {
            get();
            den = integer();
            if (den == 0) fail("zero denominator");
        }
        GRat q(num, den);
        size_t save = pos_;
        skip_ws();
        if (peek() == '*') {
            get();
            skip_ws();
            if (peek() == 'i' && !is_ident_char(peek_at(1))) {
                get();
                return q * GRat::i();
            }
            pos_ = save;  // the '*' belonged to a variable factor
        } else {
            pos_ = save;
        }
        return q;
    }

    char peek_at(size_t off) const {
        return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
    }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    Series term() {
        skip_ws();
        GRat coeff(1);
        bool have_coeff = false;
        if (peek() == '(') {
            get();
            bool neg = false;
            if (peek() == '+' || peek() == '-') neg = (get() == '-');
            GRat a = simple_coeff();
            if (neg) a = -a;
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                bool n2 = (get() == '-');
                GRat b = simple_coeff();
                a = n2 ? a - b : a + b;
            }
            skip_ws();
            if (get() != ')') fail("expected ')'");
            coeff = a;
            have_coeff = true;
        } else if (std::isdigit(static_cast<unsigned char>(peek())) ||
                   (peek() == 'i' && !is_ident_char(peek_at(1)))) {
            coeff = simple_coeff();
            have_coeff = true;
        }

        Series acc = Series::constant(vars_, order_, coeff);
        bool any_factor = false;
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                size_t save = pos_;
                get();
                skip_ws();
                if (!std::isalpha(static_cast<unsigned char>(peek()))) {
                    pos_ = save;
                    break;
                }
            }
            if (!std::isalpha(static_cast<unsigned char>(peek()))) break;
            std::string name;
            while (is_ident_char(peek())) name += get();
            int vi = -1;
            for (size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) vi = static_cast<int>(i);
            if (vi < 0) fail("unknown variable '" + name + "'");
            unsigned k = 1;
            skip_ws();
            if (peek() == '^') {
                get();
                long e = integer();
                if (e < 0) fail("negative exponent");
                k = static_cast<unsigned>(e);
            }
            acc = acc * Series::variable(vars_, order_, name).pow(k);
            any_factor = true;
        }
        if (!have_coeff && !any_factor) fail("expected term");
        return acc;
    }

    const std::string& text_;
    const std::vector<std::string>& vars_;
    int order_;
    int line_;
    int col_offset_;
    size_t pos_ = 0;
};

}  // namespace

Series parse_series(const std::string& text, const std::vector<std::string>& vars, int order,
                    int line_hint, int col_offset) {
    ExprParser p(text, vars, order, line_hint, col_offset);
    return p.parse();
}

}  // namespace crsegre
