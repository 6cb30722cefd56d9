#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "zetafrac/bigratio.hpp"

namespace zetafrac {

// Closed interval [lo, hi] with exact rational endpoints. Every producing
// operation guarantees that if the inputs contain their true values, the
// output contains the true value of the result.
class Enclosure {
public:
    Enclosure() = default;
    Enclosure(Rational lo, Rational hi);

    static Enclosure point(const Rational& v) { return Enclosure(v, v); }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
    bool contains(const Enclosure& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    // lower < every point < upper
    bool strictly_inside(const Rational& lower, const Rational& upper) const { return lower < lo_ && hi_ < upper; }

    // Rounds lo down and hi up onto the grid 2^-bits, but only when an
    // endpoint denominator has outgrown that grid. Containment is preserved.
    Enclosure simplified(unsigned long bits) const;

    friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
    Enclosure operator-() const { return Enclosure(-hi_, -lo_); }

    friend Enclosure operator+(const Enclosure& a, const Rational& b) { return Enclosure(a.lo_ + b, a.hi_ + b); }
    friend Enclosure operator-(const Enclosure& a, const Rational& b) { return Enclosure(a.lo_ - b, a.hi_ - b); }
    friend Enclosure operator*(const Enclosure& a, const Rational& b);

    friend bool operator==(const Enclosure&, const Enclosure&) = default;

private:
    Rational lo_;
    Rational hi_;
};

// [1/hi, 1/lo] for intervals that exclude zero.
Enclosure reciprocal(const Enclosure& a);

// Intersection of two enclosures of the same value. Disjoint inputs mean
// one of them was not a valid enclosure, which is a logic error.
Enclosure intersect(const Enclosure& a, const Enclosure& b);

struct FloorCertificate {
    BigInt value;
    Enclosure witness;  // floor(witness.lo) == floor(witness.hi) == value
};

// The enclosure still contains an integer after the refinement budget ran
// out; the enclosed value may itself be that integer.
class StraddlesInteger : public std::runtime_error {
public:
    explicit StraddlesInteger(Enclosure last);
    const Enclosure& last() const { return last_; }

private:
    Enclosure last_;
};

// refine(current, round) returns a tighter enclosure of the same value;
// round counts from 1. Must be a pure function of its arguments.
using Refine = std::function<Enclosure(const Enclosure&, unsigned)>;

inline constexpr unsigned kDefaultMaxRounds = 64;

// Decides floor(v) once no integer lies inside the enclosure, calling
// refine at most max_rounds times. Each refined enclosure is intersected
// with the previous one so widths never grow.
FloorCertificate certified_floor(const Enclosure& a, const Refine& refine, unsigned max_rounds = kDefaultMaxRounds);

// floor(witness) == value, or nullopt if an integer lies inside.
std::optional<BigInt> try_floor(const Enclosure& a);

// Floor certificate plus an enclosure of v - floor(v), a subset of [0, 1].
std::pair<FloorCertificate, Enclosure> fractional_part(const Enclosure& a, const Refine& refine,
                                                        unsigned max_rounds = kDefaultMaxRounds);

}  // namespace zetafrac
