#include "hogm/parse.hpp"

#include <cctype>
#include <cstdlib>

namespace hogm {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        skip_ws();
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool accept(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                e = Expr::sum({e, parse_term()});
            } else if (accept('-')) {
                e = Expr::sum({e, Expr::negate(parse_term())});
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                e = Expr::product({e, parse_factor()});
            } else if (accept('/')) {
                Expr d = parse_factor();
                e = divide(e, d);
            } else {
                return e;
            }
        }
    }

    static Expr divide(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant() && a.number().exact() && b.number().exact() &&
            !b.number().rat().is_zero()) {
            if (auto inv = rat_inv(b.number().rat())) {
                if (auto q = rat_mul(a.number().rat(), *inv)) return Expr::constant(*q);
            }
        }
        return Expr::product({a, Expr::pow(b, -1)});
    }

    Expr parse_factor() {
        skip_ws();
        if (accept('-')) return Expr::negate(parse_factor());
        Expr a = parse_atom();
        skip_ws();
        if (accept('^')) return Expr::pow(a, parse_signed_integer());
        return a;
    }

    int parse_signed_integer() {
        skip_ws();
        bool negative = accept('-');
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1'000'000) fail("exponent too large");
            ++pos_;
        }
        return static_cast<int>(negative ? -v : v);
    }

    Expr parse_atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail("expected number, variable, function, or '('");
    }

    long long parse_plain_integer(const char* what) {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(std::string("expected ") + what);
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1'000'000) fail(std::string(what) + " too large");
            ++pos_;
        }
        return v;
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        bool has_fraction = false;
        if (peek() == '.') {
            has_fraction = true;
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        bool has_exponent = false;
        if (peek() == 'e' || peek() == 'E') {
            std::size_t mark = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                has_exponent = true;
                while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            } else {
                pos_ = mark;  // the 'e' belongs to something else
            }
        }
        std::string token(text_.substr(start, pos_ - start));
        if (token.empty() || token == ".") fail("malformed number");
        if (!has_exponent) {
            // store exact rational: digits.digits == mantissa / 10^k
            std::string digits;
            long long scale = 1;
            bool past_dot = false;
            bool fits = true;
            for (char ch : token) {
                if (ch == '.') {
                    past_dot = true;
                    continue;
                }
                if (digits.size() >= 18) {
                    fits = false;
                    break;
                }
                digits.push_back(ch);
                if (past_dot) scale *= 10;
            }
            if (fits) {
                long long mant = digits.empty() ? 0 : std::strtoll(digits.c_str(), nullptr, 10);
                return Expr::constant(Rational(mant, scale));
            }
        }
        (void)has_fraction;
        return Expr::constant(std::strtod(token.c_str(), nullptr));
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
        std::string name(text_.substr(start, pos_ - start));

        if (name == "sin" || name == "cos" || name == "exp" || name == "ln" || name == "sqrt") {
            Func f = name == "sin"   ? Func::Sin
                     : name == "cos" ? Func::Cos
                     : name == "exp" ? Func::Exp
                     : name == "ln"  ? Func::Ln
                                     : Func::Sqrt;
            expect('(');
            Expr arg = parse_expr();
            expect(')');
            return Expr::call(f, arg);
        }
        if (name == "q" || name == "p" || name == "v") {
            long long index = parse_plain_integer("variable index");
            if (index == 0) fail("variable index 0");
            expect('_');
            long long level = parse_plain_integer("variable level");
            VarKind k = name == "q" ? VarKind::Q : name == "p" ? VarKind::P : VarKind::V;
            return Expr::variable(VarRef{k, static_cast<int>(index), static_cast<int>(level)});
        }
        if (name == "lam") {
            long long index = parse_plain_integer("multiplier index");
            if (index == 0) fail("variable index 0");
            return Expr::variable(lamvar(static_cast<int>(index)));
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace hogm
