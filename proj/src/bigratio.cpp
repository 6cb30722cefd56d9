#include "zetafrac/bigratio.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>

namespace zetafrac {

namespace {

BigInt pow10(unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt ceil_div(const BigInt& a, const BigInt& b)
{
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den)
{
    if (den == 0) {
        throw DomainError("rational with zero denominator");
    }
    value_.get_num() = num;
    value_.get_den() = den;
    value_.canonicalize();
}

Rational Rational::from_coprime(const BigInt& num, const BigInt& den)
{
    assert(den > 0);
    if (num == 0) {
        return Rational();
    }
    mpq_class v;
    v.get_num() = num;
    v.get_den() = den;
    return Rational(std::move(v));
}

Rational Rational::parse(const std::string& text)
{
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(c);
        }
    }
    if (s.empty()) {
        throw DomainError("empty rational literal");
    }
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        return Rational(parse_bigint(s.substr(0, slash)), parse_bigint(s.substr(slash + 1)));
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    std::string digits;
    long exponent = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) {
                --exponent;
            }
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            try {
                std::size_t used = 0;
                exponent += std::stol(s.substr(i + 1), &used);
                if (used != s.size() - i - 1) {
                    throw DomainError("bad exponent");
                }
            } catch (const std::logic_error&) {
                throw DomainError("malformed rational literal: " + text);
            }
            i = s.size();
            break;
        } else {
            throw DomainError("malformed rational literal: " + text);
        }
    }
    if (!seen_digit) {
        throw DomainError("malformed rational literal: " + text);
    }
    BigInt mant(digits, 10);
    if (negative) {
        mant = -mant;
    }
    if (exponent >= 0) {
        return Rational(BigInt(mant * pow10(static_cast<unsigned long>(exponent))));
    }
    return Rational(mant, pow10(static_cast<unsigned long>(-exponent)));
}

Rational Rational::pow2(long e)
{
    BigInt p = 1;
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
    return e < 0 ? Rational(BigInt(1), p) : Rational(p);
}

BigInt Rational::floor() const
{
    return floor_div(value_.get_num(), value_.get_den());
}

BigInt Rational::ceil() const
{
    return ceil_div(value_.get_num(), value_.get_den());
}

Rational Rational::abs() const
{
    return sign() < 0 ? -*this : *this;
}

Rational Rational::reciprocal() const
{
    if (is_zero()) {
        throw DomainError("reciprocal of zero");
    }
    mpq_class r;
    mpq_inv(r.get_mpq_t(), value_.get_mpq_t());
    return Rational(std::move(r));
}

Rational Rational::pow(unsigned long e) const
{
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), value_.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), value_.get_den_mpz_t(), e);
    return Rational(std::move(r));
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b.is_zero()) {
        throw DomainError("division by zero");
    }
    return Rational(mpq_class(a.value_ / b.value_));
}

Rational Rational::round_to_bits(unsigned long bits, Rounding mode) const
{
    BigInt scaled = value_.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits);
    BigInt q;
    switch (mode) {
    case Rounding::Down: q = floor_div(scaled, value_.get_den()); break;
    case Rounding::Up: q = ceil_div(scaled, value_.get_den()); break;
    case Rounding::TowardZero: mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), value_.get_den_mpz_t()); break;
    }
    BigInt den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    return Rational(q, den);
}

double Rational::log2_abs() const
{
    if (is_zero()) {
        return -HUGE_VAL;
    }
    long en = 0;
    long ed = 0;
    const double mn = mpz_get_d_2exp(&en, value_.get_num_mpz_t());
    const double md = mpz_get_d_2exp(&ed, value_.get_den_mpz_t());
    return std::log2(std::fabs(mn)) - std::log2(md) + static_cast<double>(en - ed);
}

std::string Rational::to_string() const
{
    if (is_integer()) {
        return value_.get_num().get_str();
    }
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int digits, Rounding mode) const
{
    if (digits < 1) {
        throw DomainError("to_decimal needs at least one digit");
    }
    if (is_zero()) {
        return "0";
    }
    const bool negative = sign() < 0;
    const Rational mag = abs();

    // Decimal exponent of the leading digit, first estimated then fixed up
    // exactly so that 10^e <= mag < 10^(e+1).
    long e = static_cast<long>(std::floor(mag.log2_abs() * 0.30102999566398120));
    auto ten_pow = [](long k) {
        return k >= 0 ? Rational(pow10(static_cast<unsigned long>(k)))
                      : Rational(BigInt(1), pow10(static_cast<unsigned long>(-k)));
    };
    while (ten_pow(e) > mag) {
        --e;
    }
    while (ten_pow(e + 1) <= mag) {
        ++e;
    }

    const Rational scaled = mag * ten_pow(digits - 1 - e);
    bool round_up_mag = false;
    switch (mode) {
    case Rounding::Down: round_up_mag = negative; break;
    case Rounding::Up: round_up_mag = !negative; break;
    case Rounding::TowardZero: round_up_mag = false; break;
    }
    BigInt d = round_up_mag ? scaled.ceil() : scaled.floor();
    if (d == pow10(static_cast<unsigned long>(digits))) {
        d /= 10;
        ++e;
    }
    std::string ds = d.get_str();
    while (ds.size() > 1 && ds.back() == '0') {
        ds.pop_back();
    }

    std::string out = negative ? "-" : "";
    if (e >= -7 && e < 21) {
        if (e >= 0) {
            const auto int_len = static_cast<std::size_t>(e + 1);
            if (ds.size() <= int_len) {
                out += ds + std::string(int_len - ds.size(), '0');
            } else {
                out += ds.substr(0, int_len) + "." + ds.substr(int_len);
            }
        } else {
            out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
        }
    } else {
        out += ds.substr(0, 1);
        if (ds.size() > 1) {
            out += "." + ds.substr(1);
        }
        out += (e < 0 ? "e-" : "e+") + std::to_string(e < 0 ? -e : e);
    }
    return out;
}

Rational rat(const BigInt& num, const BigInt& den)
{
    return Rational(num, den);
}

BigInt pow(const BigInt& base, unsigned long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

std::string to_string(const BigInt& x)
{
    return x.get_str();
}

BigInt parse_bigint(const std::string& text)
{
    BigInt r;
    std::string s = text;
    if (!s.empty() && s.front() == '+') {
        s.erase(0, 1);
    }
    if (s.empty() || r.set_str(s, 10) != 0) {
        throw DomainError("malformed integer: " + text);
    }
    return r;
}

namespace {

void check_power_base(const BigInt& p, const BigInt& q)
{
    if (q < 1 || p <= q) {
        throw DomainError("rational power needs p > q >= 1");
    }
    BigInt g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) {
        throw DomainError("rational power needs gcd(p, q) = 1");
    }
}

}  // namespace

BigInt pow_frac_num(const BigInt& p, const BigInt& q, unsigned long n)
{
    check_power_base(p, q);
    const BigInt modulus = pow(q, n);
    if (modulus == 1) {
        return 0;
    }
    BigInt r;
    mpz_powm_ui(r.get_mpz_t(), p.get_mpz_t(), n, modulus.get_mpz_t());
    return r;
}

RationalPower pow_decompose(const BigInt& p, const BigInt& q, unsigned long n)
{
    check_power_base(p, q);
    RationalPower rp;
    rp.p = p;
    rp.q = q;
    rp.n = n;
    rp.q_pow = pow(q, n);
    if (rp.q_pow == 1) {
        rp.frac_num = 0;
    } else {
        mpz_powm_ui(rp.frac_num.get_mpz_t(), p.get_mpz_t(), n, rp.q_pow.get_mpz_t());
    }
    // p^n - frac_num is an exact multiple of q^n.
    BigInt shifted = pow(p, n) - rp.frac_num;
    mpz_divexact(rp.int_part.get_mpz_t(), shifted.get_mpz_t(), rp.q_pow.get_mpz_t());
    return rp;
}

bool frac_lt(const RationalPower& rp, const Rational& bound)
{
    if (bound.sign() < 0) {
        throw DomainError("frac_lt bound must be non-negative");
    }
    return rp.frac_num * bound.den() < bound.num() * rp.q_pow;
}

}  // namespace zetafrac
