#include "zetafrac/theorems.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "zetafrac/series.hpp"

namespace zetafrac {

namespace {

const Rational kOne(1);
const Rational kTwo(2);

Rational ratio(long a, long b)
{
    return Rational(BigInt(a), BigInt(b));
}

Rational two_pow(unsigned long n)
{
    return Rational::pow2(static_cast<long>(n));
}

// Judges an enclosure against the open window (lower, upper); either side
// may be absent. FALSE only when the enclosure lies wholly on the wrong side.
Verdict judge(const Enclosure& e, const std::optional<Rational>& lower, const std::optional<Rational>& upper)
{
    bool certified = true;
    if (lower) {
        if (e.hi() <= *lower) {
            return Verdict::False;
        }
        certified = certified && e.lo() > *lower;
    }
    if (upper) {
        if (e.lo() >= *upper) {
            return Verdict::False;
        }
        certified = certified && e.hi() < *upper;
    }
    return certified ? Verdict::True : Verdict::Inconclusive;
}

// Successive enclosures of zeta(n) - 1, each intersected with the previous.
class ZetaRefiner {
public:
    ZetaRefiner(unsigned long n, unsigned long bits) : schedule_(n, bits) {}

    const Enclosure& at(unsigned round)
    {
        Enclosure next = schedule_.at(round);
        current_ = current_ ? intersect(*current_, next) : std::move(next);
        return *current_;
    }

private:
    ZetaSchedule schedule_;
    std::optional<Enclosure> current_;
};

class PrimeRefiner {
public:
    PrimeRefiner(unsigned long s, unsigned long bits) : schedule_(s, bits) {}

    const Enclosure& at(unsigned round)
    {
        Enclosure next = schedule_.at(round);
        current_ = current_ ? intersect(*current_, next) : std::move(next);
        return *current_;
    }

private:
    PrimeZetaSchedule schedule_;
    std::optional<Enclosure> current_;
};

struct Sides {
    bool lower = true;
    bool upper = true;
};

Sides sides_for(std::string_view claim, std::string_view lower_id, std::string_view upper_id)
{
    if (claim == lower_id) {
        return {true, false};
    }
    if (claim == upper_id) {
        return {false, true};
    }
    return {true, true};
}

// Runs eval(round) for round = 0..max_rounds until the value is certified
// inside (or outside) the window. eval returns nullopt when the quantity is
// not yet computable at that round (e.g. an uncertified floor).
template <class Eval>
ClaimResult certify_window(ClaimResult base, Eval&& eval, const std::optional<Rational>& lower,
                           const std::optional<Rational>& upper, unsigned max_rounds)
{
    if (lower) {
        base.lower = Enclosure::point(*lower);
    }
    if (upper) {
        base.upper = Enclosure::point(*upper);
    }
    for (unsigned round = 0; round <= max_rounds; ++round) {
        std::optional<Enclosure> value = eval(round);
        if (!value) {
            continue;
        }
        base.value = std::move(value);
        const Verdict v = judge(*base.value, lower, upper);
        if (v == Verdict::True) {
            base.verdict = v;
            return base;
        }
        if (v == Verdict::False) {
            base.verdict = v;
            throw IntegrityError(std::move(base));
        }
    }
    base.verdict = Verdict::Inconclusive;
    return base;
}

ClaimResult make_claim(std::string_view claim, unsigned long n)
{
    ClaimResult r;
    r.claim = std::string(claim);
    r.n = static_cast<long>(n);
    return r;
}

std::string integrity_message(const ClaimResult& r)
{
    std::string msg = "integrity error: claim " + r.claim + " certified FALSE at n=" + std::to_string(r.n);
    if (r.k) {
        msg += " (k=" + std::to_string(*r.k) + ")";
    }
    if (r.value) {
        msg += " enclosure [" + r.value->lo().to_decimal(40, Rounding::Down) + ", " +
               r.value->hi().to_decimal(40, Rounding::Up) + "]";
    }
    if (!r.detail.empty()) {
        msg += ": " + r.detail;
    }
    return msg;
}

}  // namespace

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::True: return "TRUE";
    case Verdict::False: return "FALSE";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::NotApplicable: return "NOT-APPLICABLE";
    case Verdict::Skipped: return "SKIPPED";
    }
    return "?";
}

IntegrityError::IntegrityError(ClaimResult evidence)
    : std::runtime_error(integrity_message(evidence)), evidence_(std::move(evidence))
{
}

Rational epsilon(const Rational& x, unsigned long s)
{
    if (x.sign() <= 0) {
        throw DomainError("epsilon_x needs x > 0");
    }
    const Rational inner = ratio(2, 3).pow(s) + ratio(1, 2).pow(s);
    return (kTwo * x).pow(s) * inner * inner;
}

Rational delta(unsigned long s)
{
    const Rational inner = ratio(2, 3).pow(s) + ratio(2, 5).pow(s);
    return two_pow(s) * inner * inner - ratio(4, 5).pow(s);
}

long double epsilon_real(long double s)
{
    const long double inner = std::pow(2.0L / 3.0L, s) + std::pow(0.5L, s);
    return std::pow(2.0L, s) * inner * inner;
}

long double delta_real(long double s)
{
    const long double inner = std::pow(2.0L / 3.0L, s) + std::pow(0.4L, s);
    return std::pow(2.0L, s) * inner * inner - std::pow(0.8L, s);
}

Rational lower_bound_witness(unsigned long n)
{
    if (n < 2) {
        throw DomainError("lower_bound_witness needs n >= 2");
    }
    auto p = [n](long b) { return Rational(pow(BigInt(b), n)); };
    const Rational lead = p(5) / (p(6) - p(4) - p(3));
    const Rational mid = (p(16) + p(9)) / p(12) + kTwo;
    const auto x = static_cast<long>(n);
    return lead * mid - ratio(x + 4, x - 1);
}

KRecord classify_k(unsigned long n, const EvalOptions& opts)
{
    if (n < 2) {
        throw DomainError("classify_k needs n >= 2");
    }
    const RationalPower pw = pow_decompose(BigInt(4), BigInt(3), n);
    const Rational pow_frac = pw.frac();
    const BigInt two_n = pow(BigInt(2), n);

    KRecord rec;
    rec.n = n;
    rec.floor_pow = pw.int_part;
    rec.epsilon_n = epsilon(n);

    ZetaRefiner zeta(n, opts.precision_bits);
    std::optional<Enclosure> last;
    bool floor_known = false;
    for (unsigned round = 0; round <= opts.max_rounds; ++round) {
        Enclosure recip = reciprocal(zeta.at(round));
        auto f = try_floor(recip);
        last = recip;
        if (!f) {
            continue;
        }
        const BigInt k = two_n - rec.floor_pow - *f;
        if (!floor_known) {
            if (k != 1 && k != 2) {
                ClaimResult evidence = make_claim("thm1", n);
                evidence.verdict = Verdict::False;
                evidence.value = recip;
                evidence.k = k.get_si();
                evidence.detail = "k outside {1, 2}";
                throw IntegrityError(std::move(evidence));
            }
            floor_known = true;
            rec.floor_lhs = *f;
            rec.k = k.get_si();
        }
        rec.recip_enclosure = recip;
        rec.frac_sum_enclosure = (recip - Rational(*f)) + pow_frac;
        const Rational lower(rec.k - 1);
        const Verdict v = judge(rec.frac_sum_enclosure, lower, lower + rec.epsilon_n);
        if (v == Verdict::False) {
            ClaimResult evidence = to_claim(rec, "prop3.3");
            evidence.verdict = Verdict::False;
            throw IntegrityError(std::move(evidence));
        }
        if (v == Verdict::True) {
            rec.sandwich = v;
            return rec;
        }
    }
    if (!floor_known) {
        throw StraddlesInteger(*last);
    }
    rec.sandwich = Verdict::Inconclusive;
    return rec;
}

ClaimResult check_zeta_sandwich(unsigned long n, const EvalOptions& opts, std::string_view claim)
{
    if (n < 2) {
        throw DomainError("zeta sandwich needs n >= 2");
    }
    const Sides sides = sides_for(claim, "prop2.1", "prop2.2");
    const Rational shift = ratio(4, 3).pow(n) - two_pow(n) + kTwo;
    ZetaRefiner zeta(n, opts.precision_bits);
    auto eval = [&](unsigned round) -> std::optional<Enclosure> { return reciprocal(zeta.at(round)) + shift; };
    return certify_window(make_claim(claim, n), eval, sides.lower ? std::optional<Rational>(kOne) : std::nullopt,
                          sides.upper ? std::optional<Rational>(kOne + epsilon(n)) : std::nullopt, opts.max_rounds);
}

ClaimResult check_prime_sandwich(unsigned long s, const EvalOptions& opts, std::string_view claim)
{
    const Sides sides = sides_for(claim, "prop2.4", "prop2.3");
    if (s < 4 && !(claim == "prop2.3" && s >= 2)) {
        throw DomainError("prime sandwich needs s >= 4");
    }
    const Rational shift = ratio(4, 3).pow(s) - two_pow(s);
    PrimeRefiner prime(s, opts.precision_bits);
    auto eval = [&](unsigned round) -> std::optional<Enclosure> { return reciprocal(prime.at(round)) + shift; };
    return certify_window(make_claim(claim, s), eval, sides.lower ? std::optional<Rational>(Rational()) : std::nullopt,
                          sides.upper ? std::optional<Rational>(delta(s)) : std::nullopt, opts.max_rounds);
}

ClaimResult check_prime_gap(unsigned long s, const EvalOptions& opts)
{
    if (s < 7) {
        throw DomainError("prime gap bound needs s >= 7");
    }
    ZetaRefiner zeta(s, opts.precision_bits);
    PrimeRefiner prime(s, opts.precision_bits);
    auto eval = [&](unsigned round) -> std::optional<Enclosure> {
        return reciprocal(prime.at(round)) - reciprocal(zeta.at(round));
    };
    return certify_window(make_claim("thm1.6", s), eval, kOne - epsilon(s), kOne + delta(s), opts.max_rounds);
}

ClaimResult check_prime_gap_real(long double s, const std::string& text)
{
    if (!(s >= 7.0L) || !std::isfinite(s)) {
        throw DomainError("prime gap bound needs s >= 7");
    }
    constexpr std::uint64_t kTerms = 2000;
    constexpr long double kBoundRelErr = 0x1p-56L;
    const Enclosure zeta = zeta_minus1_float(s, kTerms);
    const Enclosure prime = prime_zeta_float(s, sieve(kTerms));

    ClaimResult r;
    r.claim = "thm1.6";
    r.n = static_cast<long>(std::floor(s));
    r.exponent = text;
    r.value = reciprocal(prime) - reciprocal(zeta);
    r.lower = Enclosure::point(kOne) - widen_float(epsilon_real(s), kBoundRelErr);
    r.upper = Enclosure::point(kOne) + widen_float(delta_real(s), kBoundRelErr);
    r.detail = "float contract";
    if (r.lower->hi() < r.value->lo() && r.value->hi() < r.upper->lo()) {
        r.verdict = Verdict::True;
    } else if (r.value->hi() <= r.lower->lo() || r.value->lo() >= r.upper->hi()) {
        r.verdict = Verdict::False;
        throw IntegrityError(std::move(r));
    } else {
        r.verdict = Verdict::Inconclusive;
    }
    return r;
}

GeneralKResult classify_general_k(const Rational& x, unsigned long n, const EvalOptions& opts)
{
    if (!(ratio(1, 2) < x && x < ratio(3, 4))) {
        throw DomainError("classify_general_k needs 1/2 < x < 3/4");
    }
    if (n < 2) {
        throw DomainError("classify_general_k needs n >= 2");
    }
    const Rational xn = x.pow(n);
    const Rational two_x_n = (kTwo * x).pow(n);
    const BigInt floor_two_x_n = two_x_n.floor();
    const Rational frac_two_x_n = two_x_n - Rational(floor_two_x_n);
    const Rational offset = (ratio(4, 3) * x).pow(n) + xn;
    const Rational eps_x = epsilon(x, n);

    GeneralKResult out;
    out.applicable = offset < kOne && eps_x < offset;
    out.result = make_claim("prop3.5", n);
    out.result.detail = "x=" + x.to_string();

    ZetaRefiner zeta(n, opts.precision_bits);
    bool decided = false;
    for (unsigned round = 0; round <= opts.max_rounds && !decided; ++round) {
        const Enclosure scaled = reciprocal(zeta.at(round)) * xn;
        const auto f = try_floor(scaled);
        if (!f) {
            continue;
        }
        const BigInt k = *f - floor_two_x_n;
        out.k = k.get_si();
        out.result.k = out.k;
        const Rational kr(out.k);
        out.result.value = (scaled - Rational(*f)) - frac_two_x_n;
        out.result.lower = Enclosure::point(-offset - kr);
        out.result.upper = Enclosure::point(eps_x - offset - kr);
        if (out.applicable && k != 0 && k != -1) {
            out.result.verdict = Verdict::False;
            out.result.detail += "; k outside {-1, 0}";
            throw IntegrityError(out.result);
        }
        const Verdict v = judge(*out.result.value, -offset - kr, eps_x - offset - kr);
        if (v == Verdict::False) {
            out.result.verdict = v;
            throw IntegrityError(out.result);
        }
        if (v == Verdict::True) {
            out.result.verdict = v;
            decided = true;
        }
    }
    if (!decided) {
        out.result.verdict = n < 10 ? Verdict::NotApplicable : Verdict::Inconclusive;
    }
    if (!out.applicable) {
        out.result.detail += std::string("; n below the large-n regime, inequality ") +
                             std::string(to_string(out.result.verdict));
        out.result.verdict = Verdict::NotApplicable;
    }
    return out;
}

MRecord classify_m(unsigned long n, const EvalOptions& opts)
{
    if (n < 2) {
        throw DomainError("classify_m needs n >= 2");
    }
    const Rational x = ratio(2, 3).pow(n);
    const Rational offset = ratio(8, 9).pow(n) + x;
    const Rational eps_sum = epsilon(n) + epsilon(ratio(2, 3), n);
    // Same large-n condition as classify_general_k at x = 2/3.
    const bool applicable = offset < kOne && epsilon(ratio(2, 3), n) < offset;

    MRecord rec;
    rec.n = n;
    ZetaRefiner zeta(n, opts.precision_bits);
    for (unsigned round = 0; round <= opts.max_rounds; ++round) {
        const Enclosure recip = reciprocal(zeta.at(round));
        const Enclosure scaled = recip * x;
        const auto fa = try_floor(recip);
        const auto fb = try_floor(scaled);
        if (!fa || !fb) {
            continue;
        }
        rec.sum_enclosure = (recip - Rational(*fa)) + (scaled - Rational(*fb));
        // Windows overlap for small n; the floors pick the one that the two
        // component sandwiches place the sum in.
        const BigInt m = pow(BigInt(2), n) - 1 - *fa - *fb;
        if (m < 0 || m > 2) {
            rec.verdict = applicable ? Verdict::False : Verdict::NotApplicable;
            if (applicable) {
                ClaimResult evidence = to_claim(rec);
                evidence.detail = "m=" + to_string(m) + " outside {0, 1, 2}";
                throw IntegrityError(std::move(evidence));
            }
            return rec;
        }
        const Rational mr(m);
        rec.m = m.get_si();
        rec.window_lo = std::max(Rational(), mr - offset);
        rec.window_hi = std::min(kTwo, mr + eps_sum - offset);
        const Verdict v = judge(rec.sum_enclosure, rec.window_lo, rec.window_hi);
        if (v == Verdict::True) {
            rec.verdict = v;
            return rec;
        }
        if (v == Verdict::False) {
            rec.verdict = v;
            ClaimResult evidence = to_claim(rec);
            evidence.detail = "sum outside window m=" + to_string(m);
            throw IntegrityError(std::move(evidence));
        }
    }
    rec.verdict = applicable ? Verdict::Inconclusive : Verdict::NotApplicable;
    return rec;
}

ClaimResult check_egypt(unsigned long n, const EvalOptions& opts)
{
    ClaimResult r = make_claim("egypt", n);
    try {
        const KRecord rec = classify_k(n, opts);
        r.k = rec.k;
        r.value = rec.recip_enclosure;
        if (rec.k == 1) {
            r.verdict = Verdict::Skipped;
            r.detail = "k=1, hypothesis not met";
        } else {
            r.verdict = Verdict::True;
            r.detail = "1/(zeta(n)-1) avoids every integer";
        }
    } catch (const StraddlesInteger& e) {
        r.verdict = Verdict::Inconclusive;
        r.value = e.last();
        r.detail = "enclosure still contains an integer";
    }
    return r;
}

ClaimResult to_claim(const KRecord& rec, std::string_view claim)
{
    ClaimResult r = make_claim(claim, rec.n);
    r.k = rec.k;
    if (claim == "prop3.3") {
        r.verdict = rec.sandwich;
        r.value = rec.frac_sum_enclosure;
        r.lower = Enclosure::point(Rational(rec.k - 1));
        r.upper = Enclosure::point(Rational(rec.k - 1) + rec.epsilon_n);
    } else {
        r.verdict = Verdict::True;
        r.value = rec.recip_enclosure;
        r.detail = "floor=" + to_string(rec.floor_lhs) + " floor_pow=" + to_string(rec.floor_pow);
    }
    return r;
}

ClaimResult to_claim(const MRecord& rec)
{
    ClaimResult r = make_claim("thm1.5", rec.n);
    r.m = rec.m;
    r.verdict = rec.verdict;
    r.value = rec.sum_enclosure;
    if (rec.m) {
        r.lower = Enclosure::point(rec.window_lo);
        r.upper = Enclosure::point(rec.window_hi);
    }
    return r;
}

const std::vector<std::string>& claim_ids()
{
    static const std::vector<std::string> ids{"prop2.1", "prop2.2", "prop2.3", "prop2.4", "prop3.3",
                                              "prop3.5", "thm1",    "thm1.5",  "thm1.6"};
    return ids;
}

bool is_claim_id(std::string_view id)
{
    const auto& ids = claim_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

unsigned long claim_min_n(std::string_view id)
{
    if (id == "prop2.4") {
        return 4;
    }
    if (id == "thm1.6") {
        return 7;
    }
    return 2;
}

ClaimResult check_claim(std::string_view id, unsigned long n, const EvalOptions& opts, const Rational& x)
{
    if (!is_claim_id(id)) {
        throw DomainError("unknown claim id: " + std::string(id));
    }
    if (n < claim_min_n(id)) {
        throw DomainError("claim " + std::string(id) + " needs n >= " + std::to_string(claim_min_n(id)));
    }
    if (id == "prop2.1" || id == "prop2.2") {
        return check_zeta_sandwich(n, opts, id);
    }
    if (id == "prop2.3" || id == "prop2.4") {
        return check_prime_sandwich(n, opts, id);
    }
    if (id == "prop3.5") {
        return classify_general_k(x, n, opts).result;
    }
    if (id == "thm1.5") {
        return to_claim(classify_m(n, opts));
    }
    if (id == "thm1.6") {
        return check_prime_gap(n, opts);
    }
    // thm1, prop3.3
    try {
        return to_claim(classify_k(n, opts), id);
    } catch (const StraddlesInteger& e) {
        ClaimResult r = make_claim(id, n);
        r.verdict = Verdict::Inconclusive;
        r.value = e.last();
        r.detail = "floor of 1/(zeta(n)-1) not certified";
        return r;
    }
}

}  // namespace zetafrac
