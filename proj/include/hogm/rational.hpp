#ifndef HOGM_RATIONAL_HPP
#define HOGM_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

namespace hogm {

// Exact rational with int64 numerator/denominator. Arithmetic goes through
// __int128 and reports failure instead of overflowing, so callers can degrade
// to floating point.
struct Rational {
    long long num = 0;
    long long den = 1;  // always > 0, gcd(|num|, den) == 1

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d);

    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool is_integer() const { return den == 1; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

std::optional<Rational> rat_add(const Rational& a, const Rational& b);
std::optional<Rational> rat_mul(const Rational& a, const Rational& b);
std::optional<Rational> rat_neg(const Rational& a);
std::optional<Rational> rat_inv(const Rational& a);  // nullopt for 0
std::optional<Rational> rat_pow(const Rational& a, int e);
int rat_cmp(const Rational& a, const Rational& b);

}  // namespace hogm

#endif
