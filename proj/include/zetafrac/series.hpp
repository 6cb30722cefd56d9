#pragma once

#include <cstdint>
#include <vector>

#include "zetafrac/bigratio.hpp"
#include "zetafrac/enclosure.hpp"

namespace zetafrac {

// s is the integer exponent, terms the cutoff M of the exactly summed head.
// precision_bits == 0 keeps every term as an exact rational; otherwise each
// term is rounded outward onto the dyadic grid 2^-precision_bits, which
// keeps the endpoints small while preserving containment.
struct SeriesRequest {
    unsigned long s = 2;
    std::uint64_t terms = 16;
    unsigned long precision_bits = 0;
};

class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes);

    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }

    // The table restricted to primes <= new_limit (new_limit <= limit()).
    PrimeTable prefix(std::uint64_t new_limit) const;

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
};

// All primes <= limit by the array-marking sieve of Eratosthenes.
PrimeTable sieve(std::uint64_t limit);

// Enclosure of zeta(s) - 1 = sum_{i>=2} i^-s. The head sum_{i=2}^{M} is
// summed exactly, the tail is bracketed by the integrals
// int_{M+1}^inf t^-s dt <= tail <= int_M^inf t^-s dt.
Enclosure zeta_minus1(const SeriesRequest& req);

// Enclosure of P(s) = sum over primes p^-s. Primes up to table.limit() = L
// are summed; the remaining tail is non-negative and below
// sum_{n>L} n^-s < L^(1-s)/(s-1). req.terms is ignored.
Enclosure prime_zeta(const SeriesRequest& req, const PrimeTable& table);

// Real exponents under the float contract: terms are evaluated in long
// double with a per-term relative error budget of 2^-60, and the budget
// (plus summation error) is folded into a widened enclosure. Weaker than
// the integer-exponent path; suitable for s >= 2 with moderate magnitude.
Enclosure zeta_minus1_float(long double s, std::uint64_t terms);
Enclosure prime_zeta_float(long double s, const PrimeTable& table);

// Exact rational enclosure of a long double value carrying a relative
// error of at most rel_err.
Enclosure widen_float(long double value, long double rel_err);

// Deterministic refinement schedule for zeta(n) - 1. Round r uses
// M = max(16, n) * 2^r terms and base_bits + 64 r bits, where base_bits
// defaults to 3n + 128 (enough for the floor and the fractional-part
// sandwiches around 1/(zeta(n)-1) ~ 2^n).
class ZetaSchedule {
public:
    explicit ZetaSchedule(unsigned long n, unsigned long base_bits = 0);

    unsigned long n() const { return n_; }
    SeriesRequest request(unsigned round) const;
    Enclosure at(unsigned round) const { return zeta_minus1(request(round)); }
    unsigned long bits(unsigned round) const { return base_bits_ + 64UL * round; }

private:
    unsigned long n_;
    unsigned long base_bits_;
};

// Same idea for P(s): L = 1000 * 2^r primes bound, same precision growth.
class PrimeZetaSchedule {
public:
    explicit PrimeZetaSchedule(unsigned long s, unsigned long base_bits = 0);

    Enclosure at(unsigned round) const;
    unsigned long bits(unsigned round) const { return base_bits_ + 64UL * round; }
    std::uint64_t limit(unsigned round) const;

private:
    unsigned long s_;
    unsigned long base_bits_;
};

// Second term a1 = floor(1/(zeta(n)-1)) of the continued fraction of
// zeta(n), certified. Throws StraddlesInteger if the refinement budget is
// exhausted without excluding every integer.
BigInt cf_second_term(unsigned long n, unsigned max_rounds = kDefaultMaxRounds, unsigned long precision_bits = 0);

}  // namespace zetafrac
