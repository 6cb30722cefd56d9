#include "zetafrac/series.hpp"

#include <algorithm>
#include <cmath>

namespace zetafrac {

namespace {

// Largest head cutoff / prime bound the schedules will ask for. Past this
// point only the precision keeps growing.
constexpr std::uint64_t kMaxScheduledTerms = std::uint64_t{1} << 20;

BigInt one_shifted(unsigned long bits)
{
    BigInt r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
    return r;
}

BigInt ui_pow(std::uint64_t base, unsigned long e)
{
    BigInt b;
    mpz_set_ui(b.get_mpz_t(), base);
    return pow(b, e);
}

// floor(2^bits / d) and ceil(2^bits / d).
void dyadic_bracket(const BigInt& scale, const BigInt& d, BigInt& lo, BigInt& hi)
{
    BigInt q;
    BigInt r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scale.get_mpz_t(), d.get_mpz_t());
    lo += q;
    hi += q;
    if (r != 0) {
        hi += 1;
    }
}

// (s-1) * base^(s-1), the reciprocal of the integral int_base^inf t^-s dt.
BigInt tail_denominator(std::uint64_t base, unsigned long s)
{
    BigInt d = ui_pow(base, s - 1);
    d *= static_cast<unsigned long>(s - 1);
    return d;
}

void check_exponent(unsigned long s)
{
    if (s < 2) {
        throw DomainError("series exponent must be an integer s >= 2");
    }
}

std::uint64_t mul_capped(std::uint64_t base, unsigned round)
{
    std::uint64_t v = base;
    for (unsigned i = 0; i < round && v < kMaxScheduledTerms; ++i) {
        v *= 2;
    }
    return std::max(base, std::min(v, kMaxScheduledTerms));
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes) : limit_(limit), primes_(std::move(primes))
{
}

PrimeTable PrimeTable::prefix(std::uint64_t new_limit) const
{
    if (new_limit > limit_) {
        throw DomainError("prime table prefix beyond its limit");
    }
    auto end = std::upper_bound(primes_.begin(), primes_.end(), new_limit);
    return PrimeTable(new_limit, std::vector<std::uint64_t>(primes_.begin(), end));
}

PrimeTable sieve(std::uint64_t limit)
{
    std::vector<std::uint64_t> primes;
    if (limit < 2) {
        return PrimeTable(limit, std::move(primes));
    }
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) {
            continue;
        }
        primes.push_back(i);
        if (i <= limit / i) {
            for (std::uint64_t j = i * i; j <= limit; j += i) {
                composite[j] = true;
            }
        }
    }
    return PrimeTable(limit, std::move(primes));
}

Enclosure zeta_minus1(const SeriesRequest& req)
{
    check_exponent(req.s);
    if (req.terms < 2) {
        throw DomainError("series cutoff must be at least 2");
    }
    const unsigned long s = req.s;
    const std::uint64_t m = req.terms;

    if (req.precision_bits == 0) {
        Rational head;
        for (std::uint64_t i = 2; i <= m; ++i) {
            head += Rational(BigInt(1), ui_pow(i, s));
        }
        return Enclosure(head + Rational(BigInt(1), tail_denominator(m + 1, s)),
                         head + Rational(BigInt(1), tail_denominator(m, s)));
    }

    const unsigned long bits = req.precision_bits;
    const BigInt scale = one_shifted(bits);
    BigInt lo = 0;
    BigInt hi = 0;
    for (std::uint64_t i = 2; i <= m; ++i) {
        const BigInt term_den = ui_pow(i, s);
        if (mpz_sizeinbase(term_den.get_mpz_t(), 2) > bits + 1) {
            // This and every later term lies in (0, 2^-bits): contributes
            // nothing below and one grid step each above.
            hi += BigInt(static_cast<unsigned long>(m - i + 1));
            break;
        }
        dyadic_bracket(scale, term_den, lo, hi);
    }
    BigInt tail_lo = 0;
    BigInt tail_hi = 0;
    BigInt unused = 0;
    dyadic_bracket(scale, tail_denominator(m + 1, s), tail_lo, unused);
    unused = 0;
    dyadic_bracket(scale, tail_denominator(m, s), unused, tail_hi);
    // The first term 2^-s is a lower bound that survives any grid.
    return Enclosure(std::max(Rational(BigInt(lo + tail_lo), scale), Rational::pow2(-static_cast<long>(s))),
                     Rational(BigInt(hi + tail_hi), scale));
}

Enclosure prime_zeta(const SeriesRequest& req, const PrimeTable& table)
{
    check_exponent(req.s);
    if (table.limit() < 5) {
        throw DomainError("prime table must reach at least 5");
    }
    const unsigned long s = req.s;
    const std::uint64_t limit = table.limit();

    if (req.precision_bits == 0) {
        Rational head;
        for (std::uint64_t p : table.primes()) {
            head += Rational(BigInt(1), ui_pow(p, s));
        }
        return Enclosure(head, head + Rational(BigInt(1), tail_denominator(limit, s)));
    }

    const unsigned long bits = req.precision_bits;
    const BigInt scale = one_shifted(bits);
    BigInt lo = 0;
    BigInt hi = 0;
    const auto& primes = table.primes();
    for (std::size_t idx = 0; idx < primes.size(); ++idx) {
        const BigInt term_den = ui_pow(primes[idx], s);
        if (mpz_sizeinbase(term_den.get_mpz_t(), 2) > bits + 1) {
            hi += BigInt(static_cast<unsigned long>(primes.size() - idx));
            break;
        }
        dyadic_bracket(scale, term_den, lo, hi);
    }
    BigInt tail_hi = 0;
    BigInt unused = 0;
    dyadic_bracket(scale, tail_denominator(limit, s), unused, tail_hi);
    return Enclosure(std::max(Rational(lo, scale), Rational::pow2(-static_cast<long>(s))),
                     Rational(BigInt(hi + tail_hi), scale));
}

Enclosure widen_float(long double value, long double rel_err)
{
    auto exact = [](long double v) {
        if (v == 0.0L) {
            return Rational();
        }
        int e = 0;
        const long double m = std::frexp(v, &e);
        // 64-bit mantissa: scaling by 2^64 yields an exact integer.
        const long double scaled = std::ldexp(std::fabs(m), 64);
        BigInt mant;
        mpz_set_ui(mant.get_mpz_t(), static_cast<unsigned long>(scaled));
        Rational r = Rational(mant) * Rational::pow2(e - 64);
        return v < 0 ? -r : r;
    };
    const Rational v = exact(value);
    const Rational slack = v.abs() * exact(rel_err);
    return Enclosure(v - slack, v + slack);
}

namespace {

constexpr long double kTermRelErr = 0x1p-60L;
constexpr long double kUnitRoundoff = 0x1p-63L;

void check_real_exponent(long double s)
{
    if (!(s > 1.0L) || !std::isfinite(s)) {
        throw DomainError("real series exponent must satisfy s > 1");
    }
}

Enclosure float_tail(long double s, long double lower_base, long double upper_base, bool zero_lower)
{
    const long double t_lo = zero_lower ? 0.0L : std::pow(lower_base, 1.0L - s) / (s - 1.0L);
    const long double t_hi = std::pow(upper_base, 1.0L - s) / (s - 1.0L);
    const Enclosure lo = widen_float(t_lo, 4 * kTermRelErr);
    const Enclosure hi = widen_float(t_hi, 4 * kTermRelErr);
    return Enclosure(lo.lo(), hi.hi());
}

}  // namespace

Enclosure zeta_minus1_float(long double s, std::uint64_t terms)
{
    check_real_exponent(s);
    if (terms < 2) {
        throw DomainError("series cutoff must be at least 2");
    }
    long double sum = 0.0L;
    for (std::uint64_t i = terms; i >= 2; --i) {
        sum += std::pow(static_cast<long double>(i), -s);
    }
    const auto n = static_cast<long double>(terms);
    const Enclosure head = widen_float(sum, kTermRelErr + 2 * n * kUnitRoundoff);
    return head + float_tail(s, n + 1.0L, n, false);
}

Enclosure prime_zeta_float(long double s, const PrimeTable& table)
{
    check_real_exponent(s);
    if (table.limit() < 5) {
        throw DomainError("prime table must reach at least 5");
    }
    long double sum = 0.0L;
    const auto& primes = table.primes();
    for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
        sum += std::pow(static_cast<long double>(*it), -s);
    }
    const auto count = static_cast<long double>(primes.size());
    const Enclosure head = widen_float(sum, kTermRelErr + 2 * count * kUnitRoundoff);
    return head + float_tail(s, 0.0L, static_cast<long double>(table.limit()), true);
}

ZetaSchedule::ZetaSchedule(unsigned long n, unsigned long base_bits)
    : n_(n), base_bits_(base_bits != 0 ? base_bits : 3 * n + 128)
{
    check_exponent(n);
}

SeriesRequest ZetaSchedule::request(unsigned round) const
{
    return SeriesRequest{n_, mul_capped(std::max<std::uint64_t>(16, n_), round), bits(round)};
}

PrimeZetaSchedule::PrimeZetaSchedule(unsigned long s, unsigned long base_bits)
    : s_(s), base_bits_(base_bits != 0 ? base_bits : 3 * s + 128)
{
    check_exponent(s);
}

std::uint64_t PrimeZetaSchedule::limit(unsigned round) const
{
    return mul_capped(1000, round);
}

Enclosure PrimeZetaSchedule::at(unsigned round) const
{
    return prime_zeta(SeriesRequest{s_, 0, bits(round)}, sieve(limit(round)));
}

BigInt cf_second_term(unsigned long n, unsigned max_rounds, unsigned long precision_bits)
{
    if (n < 2) {
        throw DomainError("cf_second_term needs n >= 2");
    }
    const ZetaSchedule schedule(n, precision_bits);
    const Refine refine = [&schedule](const Enclosure&, unsigned round) { return reciprocal(schedule.at(round)); };
    return certified_floor(reciprocal(schedule.at(0)), refine, max_rounds).value;
}

}  // namespace zetafrac
