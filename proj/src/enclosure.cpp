#include "zetafrac/enclosure.hpp"

#include <algorithm>
#include <array>

namespace zetafrac {

Enclosure::Enclosure(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (hi_ < lo_) {
        throw DomainError("enclosure with lo > hi");
    }
}

Enclosure Enclosure::simplified(unsigned long bits) const
{
    auto too_fine = [bits](const Rational& r) {
        return mpz_sizeinbase(r.raw().get_den_mpz_t(), 2) > bits + 1;
    };
    if (!too_fine(lo_) && !too_fine(hi_)) {
        return *this;
    }
    return Enclosure(lo_.round_to_bits(bits, Rounding::Down), hi_.round_to_bits(bits, Rounding::Up));
}

Enclosure operator+(const Enclosure& a, const Enclosure& b)
{
    return Enclosure(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Enclosure operator-(const Enclosure& a, const Enclosure& b)
{
    return Enclosure(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Enclosure operator*(const Enclosure& a, const Enclosure& b)
{
    // Fast path for the common all-positive case.
    if (a.lo_.sign() >= 0 && b.lo_.sign() >= 0) {
        return Enclosure(a.lo_ * b.lo_, a.hi_ * b.hi_);
    }
    std::array<Rational, 4> p{a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return Enclosure(*mn, *mx);
}

Enclosure operator*(const Enclosure& a, const Rational& b)
{
    if (b.sign() >= 0) {
        return Enclosure(a.lo_ * b, a.hi_ * b);
    }
    return Enclosure(a.hi_ * b, a.lo_ * b);
}

Enclosure reciprocal(const Enclosure& a)
{
    if (a.contains_zero()) {
        throw DomainError("reciprocal of an enclosure containing zero");
    }
    return Enclosure(a.hi().reciprocal(), a.lo().reciprocal());
}

Enclosure intersect(const Enclosure& a, const Enclosure& b)
{
    const Rational& lo = std::max(a.lo(), b.lo());
    const Rational& hi = std::min(a.hi(), b.hi());
    if (hi < lo) {
        throw std::logic_error("disjoint enclosures of one value");
    }
    return Enclosure(lo, hi);
}

StraddlesInteger::StraddlesInteger(Enclosure last)
    : std::runtime_error("enclosure straddles an integer: [" + last.lo().to_decimal(30, Rounding::Down) + ", " +
                         last.hi().to_decimal(30, Rounding::Up) + "]"),
      last_(std::move(last))
{
}

std::optional<BigInt> try_floor(const Enclosure& a)
{
    // An integer endpoint counts as straddling: the value could be that integer.
    if (a.lo().is_integer()) {
        return std::nullopt;
    }
    BigInt f = a.lo().floor();
    if (a.hi().floor() != f) {
        return std::nullopt;
    }
    return f;
}

FloorCertificate certified_floor(const Enclosure& a, const Refine& refine, unsigned max_rounds)
{
    Enclosure current = a;
    for (unsigned round = 0;; ++round) {
        if (auto f = try_floor(current)) {
            return FloorCertificate{std::move(*f), current};
        }
        if (round == max_rounds || !refine) {
            throw StraddlesInteger(current);
        }
        current = intersect(current, refine(current, round + 1));
    }
}

std::pair<FloorCertificate, Enclosure> fractional_part(const Enclosure& a, const Refine& refine, unsigned max_rounds)
{
    FloorCertificate cert = certified_floor(a, refine, max_rounds);
    Enclosure frac = cert.witness - Rational(cert.value);
    return {std::move(cert), std::move(frac)};
}

}  // namespace zetafrac
