#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace zetafrac {

using BigInt = mpz_class;

// Raised when an operation's preconditions are violated (zero denominator,
// non-coprime base, exponent out of range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Rounding { Down, Up, TowardZero };

// Exact rational number kept in canonical form: den > 0 and
// gcd(|num|, den) = 1 after every operation.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    explicit Rational(const BigInt& value) : value_(value) {}
    Rational(const BigInt& num, const BigInt& den);

    // Skips the gcd reduction. The caller guarantees den > 0 and
    // gcd(num, den) = 1; used on the scan path where both are huge.
    static Rational from_coprime(const BigInt& num, const BigInt& den);

    // Parses "a", "a/b" or a plain decimal such as "1e-9" or "0.125".
    static Rational parse(const std::string& text);

    // 2^e for any signed e.
    static Rational pow2(long e);

    BigInt num() const { return value_.get_num(); }
    BigInt den() const { return value_.get_den(); }
    const mpq_class& raw() const { return value_; }

    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return value_.get_den() == 1; }

    BigInt floor() const;
    BigInt ceil() const;
    Rational frac() const { return *this - Rational(floor()); }
    Rational abs() const;
    Rational reciprocal() const;
    Rational pow(unsigned long e) const;

    // Outward/inward rounding to a dyadic grid of spacing 2^-bits.
    Rational round_to_bits(unsigned long bits, Rounding mode) const;

    double to_double() const { return value_.get_d(); }
    // log2(|x|) for x != 0, accurate to about 1e-15 absolute even for
    // values far outside the double range.
    double log2_abs() const;

    std::string to_string() const;  // "num/den" or "num"
    // Decimal string with `digits` significant digits, rounded as requested.
    // Uses plain notation for moderate magnitudes and "d.ddd...e±X" otherwise.
    std::string to_decimal(int digits = 60, Rounding mode = Rounding::TowardZero) const;

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(mpq_class(-value_)); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    explicit Rational(mpq_class&& v) : value_(std::move(v)) {}
    mpq_class value_;
};

Rational rat(const BigInt& num, const BigInt& den);

BigInt pow(const BigInt& base, unsigned long e);
std::string to_string(const BigInt& x);
BigInt parse_bigint(const std::string& text);

// Exact decomposition p^n = int_part * q^n + frac_num, 0 <= frac_num < q^n,
// so that frac_num / q^n is the fractional part of (p/q)^n.
struct RationalPower {
    BigInt p;
    BigInt q;
    unsigned long n = 0;
    BigInt int_part;
    BigInt frac_num;
    BigInt q_pow;  // q^n

    Rational frac() const { return Rational::from_coprime(frac_num, q_pow); }
    Rational value() const { return Rational(int_part) + frac(); }
};

// Requires gcd(p, q) = 1 and p > q >= 1.
RationalPower pow_decompose(const BigInt& p, const BigInt& q, unsigned long n);

// Only the numerator of {(p/q)^n}: p^n mod q^n by square-and-multiply.
BigInt pow_frac_num(const BigInt& p, const BigInt& q, unsigned long n);

// {(p/q)^n} < bound, decided by exact cross-multiplication.
bool frac_lt(const RationalPower& rp, const Rational& bound);

}  // namespace zetafrac
