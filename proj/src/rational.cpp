#include "hogm/rational.hpp"

#include <cstdlib>
#include <stdexcept>

namespace hogm {

namespace {

using i128 = __int128;

bool fits64(i128 v) {
    return v >= i128(INT64_MIN) && v <= i128(INT64_MAX);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::optional<Rational> make_checked(i128 n, i128 d) {
    if (d == 0) return std::nullopt;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (!fits64(n) || !fits64(d)) return std::nullopt;
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    return r;
}

}  // namespace

Rational::Rational(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    auto r = make_checked(i128(n), i128(d));
    if (!r) throw std::invalid_argument("rational does not fit int64 after reduction");
    *this = *r;
}

std::string Rational::to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::optional<Rational> rat_add(const Rational& a, const Rational& b) {
    return make_checked(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}

std::optional<Rational> rat_mul(const Rational& a, const Rational& b) {
    return make_checked(i128(a.num) * b.num, i128(a.den) * b.den);
}

std::optional<Rational> rat_neg(const Rational& a) {
    if (a.num == INT64_MIN) return std::nullopt;
    Rational r = a;
    r.num = -r.num;
    return r;
}

std::optional<Rational> rat_inv(const Rational& a) {
    if (a.num == 0) return std::nullopt;
    return make_checked(i128(a.den), i128(a.num));
}

std::optional<Rational> rat_pow(const Rational& a, int e) {
    if (e == 0) return Rational(1);
    Rational base = a;
    if (e < 0) {
        auto inv = rat_inv(a);
        if (!inv) return std::nullopt;
        base = *inv;
        e = -e;
    }
    Rational acc(1);
    while (e > 0) {
        if (e & 1) {
            auto m = rat_mul(acc, base);
            if (!m) return std::nullopt;
            acc = *m;
        }
        e >>= 1;
        if (e) {
            auto s = rat_mul(base, base);
            if (!s) return std::nullopt;
            base = *s;
        }
    }
    return acc;
}

int rat_cmp(const Rational& a, const Rational& b) {
    i128 lhs = i128(a.num) * b.den;
    i128 rhs = i128(b.num) * a.den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

}  // namespace hogm
