#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zetafrac/bigratio.hpp"
#include "zetafrac/enclosure.hpp"

namespace zetafrac {

// Three-valued outcome of a certified check, plus two bookkeeping states.
enum class Verdict {
    True,           // certified: the enclosure lies strictly inside the claimed window
    False,          // certified contradiction
    Inconclusive,   // refinement budget exhausted before separation
    NotApplicable,  // the claim's "n large enough" hypothesis does not hold
    Skipped,        // the claim's hypothesis is not met (e.g. k = 1 for the Egyptian check)
};

std::string_view to_string(Verdict v);

struct EvalOptions {
    unsigned max_rounds = kDefaultMaxRounds;
    unsigned long precision_bits = 0;  // 0 = automatic (3n + 128)
};

// Outcome of checking one claim at one exponent. `value` is the certified
// enclosure of the checked quantity, `lower`/`upper` the open window it must
// lie in (enclosures because the real-exponent path only encloses them).
struct ClaimResult {
    std::string claim;
    long n = 0;
    std::string exponent;  // textual exponent when non-integer, else empty
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Enclosure> value;
    std::optional<Enclosure> lower;
    std::optional<Enclosure> upper;
    std::optional<long> k;
    std::optional<long> m;
    std::string detail;
};

// A certified FALSE: a proved statement was contradicted, which can only
// mean an implementation bug. Carries the full evidence.
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(ClaimResult evidence);
    const ClaimResult& evidence() const { return evidence_; }

private:
    ClaimResult evidence_;
};

// eps_x(s) = (2x)^s ((2/3)^s + (1/2)^s)^2
Rational epsilon(const Rational& x, unsigned long s);
inline Rational epsilon(unsigned long s) { return epsilon(Rational(1), s); }

// delta(s) = 2^s ((2/3)^s + (2/5)^s)^2 - (4/5)^s
Rational delta(unsigned long s);

// Long-double versions for real exponents, each with relative error well
// under 2^-56.
long double epsilon_real(long double s);
long double delta_real(long double s);

// The auxiliary function from the lower zeta bound's proof:
//   f(x) = 5^x / (6^x - 4^x - 3^x) * ((16^x + 9^x) / 12^x + 2) - (x+4)/(x-1)
// evaluated exactly at integer x >= 2.
Rational lower_bound_witness(unsigned long n);

struct KRecord {
    unsigned long n = 0;
    long k = 0;
    BigInt floor_lhs;  // floor(1/(zeta(n)-1))
    BigInt floor_pow;  // floor((4/3)^n)
    Enclosure recip_enclosure;     // of 1/(zeta(n)-1)
    Enclosure frac_sum_enclosure;  // of {1/(zeta(n)-1)} + {(4/3)^n}
    Rational epsilon_n;
    Verdict sandwich = Verdict::Inconclusive;  // frac sum in (k-1, k-1+eps(n))
};

struct MRecord {
    unsigned long n = 0;
    std::optional<long> m;
    Enclosure sum_enclosure;  // of {1/(zeta(n)-1)} + {(2/3)^n/(zeta(n)-1)}
    Verdict verdict = Verdict::Inconclusive;
    Rational window_lo;  // the window matched by m (when certified)
    Rational window_hi;
};

struct GeneralKResult {
    long k = 0;
    bool applicable = false;
    ClaimResult result;
};

// floor(1/(zeta(n)-1)) = 2^n - floor((4/3)^n) - k with k in {1, 2}.
// Throws IntegrityError if the certified k falls outside {1, 2} or the
// fractional-part sandwich is certified false.
KRecord classify_k(unsigned long n, const EvalOptions& opts = {});

// 1 < 1/(zeta(n)-1) - 2^n + (4/3)^n + 2 < 1 + eps(n). claim is "prop2.1"
// (lower side only), "prop2.2" (upper side only) or "prop2.1+prop2.2".
ClaimResult check_zeta_sandwich(unsigned long n, const EvalOptions& opts = {},
                                std::string_view claim = "prop2.1+prop2.2");

// 0 < 1/P(s) - 2^s + (4/3)^s < delta(s); claims "prop2.4" (lower),
// "prop2.3" (upper) or "prop2.3+prop2.4". Needs s >= 4.
ClaimResult check_prime_sandwich(unsigned long s, const EvalOptions& opts = {},
                                 std::string_view claim = "prop2.3+prop2.4");

// 1 - eps(s) < 1/P(s) - 1/(zeta(s)-1) < 1 + delta(s) for integer s >= 7.
ClaimResult check_prime_gap(unsigned long s, const EvalOptions& opts = {});

// Same bound at a real exponent s >= 7 under the float contract.
ClaimResult check_prime_gap_real(long double s, const std::string& text);

// For 1/2 < x < 3/4: with k = floor(x^n/(zeta(n)-1)) - floor((2x)^n),
//   -(4x/3)^n - x^n - k < {x^n/(zeta(n)-1)} - {(2x)^n} < eps_x(n) - (4x/3)^n - x^n - k.
// Applicable (k forced into {-1, 0}) once (4x/3)^n + x^n < 1 and
// eps_x(n) < (4x/3)^n + x^n.
GeneralKResult classify_general_k(const Rational& x, unsigned long n, const EvalOptions& opts = {});

// Which of the three windows holds {1/(zeta(n)-1)} + {(2/3)^n/(zeta(n)-1)}.
MRecord classify_m(unsigned long n, const EvalOptions& opts = {});

// TRUE when k(n) = 2 and 1/(zeta(n)-1) is certified to avoid every integer;
// SKIPPED when k(n) = 1; INCONCLUSIVE when no integer could be excluded.
ClaimResult check_egypt(unsigned long n, const EvalOptions& opts = {});

// Claim-id dispatch used by range checks: prop2.1, prop2.2, prop2.3,
// prop2.4, prop3.3, prop3.5, thm1, thm1.5, thm1.6.
const std::vector<std::string>& claim_ids();
bool is_claim_id(std::string_view id);
// Smallest exponent for which the claim is defined.
unsigned long claim_min_n(std::string_view id);
ClaimResult check_claim(std::string_view id, unsigned long n, const EvalOptions& opts = {},
                        const Rational& x = Rational(BigInt(2), BigInt(3)));

// Conversions of records into claim results for reporting.
ClaimResult to_claim(const KRecord& rec, std::string_view claim);
ClaimResult to_claim(const MRecord& rec);

}  // namespace zetafrac
