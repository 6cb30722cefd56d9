#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "zetafrac/series.hpp"
#include "zetafrac/theorems.hpp"

using namespace zetafrac;

namespace {

double mid(const Enclosure& e)
{
    return ((e.lo() + e.hi()) * rat(1, 2)).to_double();
}

// The enclosure meets [v - 1e-20, v + 1e-20] for an oracle value v given to
// 25 significant digits (50-digit mpmath).
bool holds(const Enclosure& e, const char* v)
{
    const Rational x = Rational::parse(v);
    const Rational slack = Rational::parse("1e-20");
    return e.lo() <= x + slack && x - slack <= e.hi();
}

// Direct evaluation with the small-integer formula, no shared helpers.
Rational delta_by_hand(unsigned long s)
{
    const Rational a = rat(pow(BigInt(2), s), pow(BigInt(3), s));
    const Rational b = rat(pow(BigInt(2), s), pow(BigInt(5), s));
    const Rational c = rat(pow(BigInt(4), s), pow(BigInt(5), s));
    return Rational(pow(BigInt(2), s)) * (a + b) * (a + b) - c;
}

}  // namespace

TEST_CASE("epsilon values")
{
    CHECK(epsilon(2) == rat(625, 324));
    CHECK(epsilon(Rational(1), 0) == Rational(4));
    CHECK(epsilon(176) < rat(1, 1000000000));
    CHECK(epsilon(175) > rat(1, 1000000000));
    CHECK(epsilon(7).to_double() == doctest::Approx(0.563330).epsilon(1e-5));
    CHECK_THROWS_AS(epsilon(Rational(0), 3), DomainError);
}

TEST_CASE("epsilon scaling identity")
{
    auto gen = oracle::rng(21);
    std::uniform_int_distribution<long> num(1, 40);
    std::uniform_int_distribution<long> den(1, 40);
    std::uniform_int_distribution<unsigned long> exp(0, 50);
    for (int i = 0; i < 200; ++i) {
        const Rational x = rat(num(gen), den(gen));
        const Rational y = rat(num(gen), den(gen));
        const unsigned long s = exp(gen);
        REQUIRE(epsilon(x * y, s) == x.pow(s) * epsilon(y, s));
    }
    for (unsigned long s = 0; s <= 60; ++s) {
        REQUIRE(epsilon(rat(2, 3), s) == rat(2, 3).pow(s) * epsilon(s));
    }
}

TEST_CASE("delta values")
{
    CHECK(delta(0) == Rational(3));
    CHECK(delta(4).to_double() == doctest::Approx(0.38699812).epsilon(1e-7));
    CHECK(delta(7).to_double() == doctest::Approx(0.25363906).epsilon(1e-7));
    for (unsigned long s = 0; s <= 40; ++s) {
        REQUIRE(delta(s) == delta_by_hand(s));
    }
}

TEST_CASE("real-exponent bounds track the exact ones")
{
    for (unsigned long s = 2; s <= 200; s += 3) {
        const long double e = epsilon_real(static_cast<long double>(s));
        const long double d = delta_real(static_cast<long double>(s));
        REQUIRE(static_cast<double>(e) == doctest::Approx(epsilon(s).to_double()).epsilon(1e-14));
        REQUIRE(static_cast<double>(d) == doctest::Approx(delta(s).to_double()).epsilon(1e-12));
    }
}

TEST_CASE("bounds vanish monotonically")
{
    for (unsigned long s = 2; s < 500; ++s) {
        REQUIRE(epsilon(s + 1) < epsilon(s));
        REQUIRE(delta(s + 1) < delta(s));
    }
    CHECK(epsilon(500).sign() > 0);
    CHECK(delta(500).sign() > 0);
}

TEST_CASE("lower-bound proof function is positive")
{
    for (unsigned long n = 7; n <= 100; ++n) {
        REQUIRE(lower_bound_witness(n).sign() > 0);
    }
    CHECK(lower_bound_witness(2).to_double() == doctest::Approx(3.864).epsilon(1e-3));
}

TEST_CASE("classify_k examples")
{
    const KRecord r2 = classify_k(2);
    CHECK(r2.k == 2);
    CHECK(r2.floor_lhs == 1);
    CHECK(r2.floor_pow == 1);
    CHECK(classify_k(4).k == 1);
    CHECK(classify_k(17).k == 1);
    CHECK(classify_k(18).k == 2);
    CHECK_THROWS_AS(classify_k(1), DomainError);
}

TEST_CASE("classify_k identity and fractional sandwich")
{
    for (unsigned long n = 2; n <= 300; ++n) {
        const KRecord r = classify_k(n);
        REQUIRE(r.floor_lhs + r.floor_pow + r.k == pow(BigInt(2), n));
        REQUIRE((r.k == 1 || r.k == 2));
        REQUIRE(r.sandwich == Verdict::True);
        REQUIRE(r.frac_sum_enclosure.strictly_inside(Rational(r.k - 1), Rational(r.k - 1) + epsilon(n)));
        REQUIRE(r.floor_lhs == cf_second_term(n));
    }
}

TEST_CASE("zeta sandwich")
{
    const ClaimResult r2 = check_zeta_sandwich(2);
    CHECK(r2.verdict == Verdict::True);
    CHECK(holds(*r2.value, "1.328323874508208218064265"));

    const ClaimResult r7 = check_zeta_sandwich(7);
    CHECK(r7.verdict == Verdict::True);
    CHECK(holds(*r7.value, "1.262385064609096685424325"));
    CHECK(r7.value->strictly_inside(Rational(1), Rational(1) + epsilon(7)));

    CHECK(check_zeta_sandwich(40, {}, "prop2.1").verdict == Verdict::True);
    CHECK(check_zeta_sandwich(40, {}, "prop2.2").verdict == Verdict::True);
}

TEST_CASE("prime sandwich")
{
    CHECK(check_prime_sandwich(4).verdict == Verdict::True);
    const ClaimResult r7 = check_prime_sandwich(7);
    CHECK(r7.verdict == Verdict::True);
    CHECK(holds(*r7.value, "0.2086072101197094120292887"));
    CHECK(r7.value->hi() < delta(7));
    CHECK(check_prime_sandwich(50).verdict == Verdict::True);
    CHECK(check_prime_sandwich(2, {}, "prop2.3").verdict == Verdict::True);
    CHECK_THROWS_AS(check_prime_sandwich(3), DomainError);
    CHECK_THROWS_AS(check_prime_sandwich(3, {}, "prop2.4"), DomainError);
}

TEST_CASE("prime gap")
{
    const ClaimResult g7 = check_prime_gap(7);
    CHECK(g7.verdict == Verdict::True);
    // 1/P(7) - 1/(zeta(7)-1) from the two oracle values.
    const mpq_class p = oracle::decimal(oracle::kPrimeZeta_7);
    const mpq_class z = oracle::decimal(oracle::kZetaMinus1_7);
    const double want = mpq_class(1 / p - 1 / z).get_d();
    CHECK(want == doctest::Approx(0.9462221455).epsilon(1e-9));
    CHECK(holds(*g7.value, "0.9462221455106127266049639"));
    CHECK(Rational::parse("0.9") < g7.value->lo());
    CHECK(g7.value->hi() < Rational(1));

    for (unsigned long s = 20; s <= 60; ++s) {
        const ClaimResult g = check_prime_gap(s);
        REQUIRE(g.verdict == Verdict::True);
        REQUIRE(std::abs(mid(*g.value) - 1.0) < 0.01);
    }
    CHECK_THROWS_AS(check_prime_gap(6), DomainError);
}

TEST_CASE("prime gap at real exponents")
{
    CHECK(check_prime_gap_real(7.0L, "7").verdict == Verdict::True);
    const ClaimResult r = check_prime_gap_real(7.5L, "7.5");
    CHECK(r.verdict == Verdict::True);
    const double want = 1.0 / 0.0057944677261930332824 - 1.0 / 0.0058267275365228077022;
    CHECK(mid(*r.value) == doctest::Approx(want).epsilon(1e-12));
    CHECK(holds(*r.value, "0.9554842900229986726691068"));
    CHECK(r.exponent == "7.5");
    CHECK_THROWS_AS(check_prime_gap_real(6.5L, "6.5"), DomainError);
}

TEST_CASE("classify_general_k")
{
    const GeneralKResult a = classify_general_k(rat(2, 3), 20);
    CHECK(a.applicable);
    CHECK((a.k == -1 || a.k == 0));
    CHECK(a.result.verdict == Verdict::True);

    const GeneralKResult b = classify_general_k(rat(3, 5), 30);
    CHECK(b.result.verdict == Verdict::True);

    const GeneralKResult small = classify_general_k(rat(2, 3), 2);
    CHECK_FALSE(small.applicable);
    CHECK(small.result.verdict == Verdict::NotApplicable);

    CHECK_THROWS_AS(classify_general_k(rat(1, 2), 20), DomainError);
    CHECK_THROWS_AS(classify_general_k(rat(3, 4), 20), DomainError);

    for (unsigned long n = 10; n <= 120; ++n) {
        const GeneralKResult g = classify_general_k(rat(7, 10), n);
        if (g.applicable) {
            REQUIRE((g.k == -1 || g.k == 0));
            REQUIRE(g.result.verdict == Verdict::True);
        }
    }
}

TEST_CASE("classify_m")
{
    const MRecord r50 = classify_m(50);
    CHECK(r50.m == 1);
    CHECK(r50.verdict == Verdict::True);
    for (unsigned long n = 100; n <= 200; n += 10) {
        const MRecord r = classify_m(n);
        REQUIRE(r.m == 1);
        REQUIRE(r.sum_enclosure.strictly_inside(r.window_lo, r.window_hi));
        REQUIRE(r.sum_enclosure.strictly_inside(Rational(0), Rational(2)));
    }
}

TEST_CASE("classify_m exceptional cases below twenty")
{
    // Cross-checked with a 200-digit mpmath evaluation of both fractional parts.
    for (unsigned long n = 2; n < 20; ++n) {
        const MRecord r = classify_m(n);
        REQUIRE(r.verdict == Verdict::True);
        const long want = (n == 2 || n == 3 || n == 9) ? 2 : 1;
        REQUIRE(r.m == want);
    }
}

TEST_CASE("check_egypt")
{
    CHECK(check_egypt(2).verdict == Verdict::True);
    const ClaimResult r6 = check_egypt(6);
    CHECK(r6.verdict == Verdict::True);
    CHECK(holds(*r6.value, "57.65994499106684555614587"));
    CHECK(check_egypt(4).verdict == Verdict::Skipped);
    CHECK(check_egypt(4).claim == "egypt");
}

TEST_CASE("claim dispatch")
{
    CHECK(claim_ids().size() == 9);
    CHECK(is_claim_id("thm1.6"));
    CHECK_FALSE(is_claim_id("thm9"));
    CHECK(check_claim("thm1", 13).k == 1);
    CHECK(check_claim("prop3.3", 13).verdict == Verdict::True);
    CHECK(check_claim("prop3.5", 30, {}, rat(3, 5)).detail.find("x=3/5") != std::string::npos);
    CHECK_THROWS_AS(check_claim("thm9", 5), DomainError);
    CHECK_THROWS_AS(check_claim("thm1.6", 6), DomainError);
    CHECK_THROWS_AS(check_claim("prop2.4", 3), DomainError);
}

TEST_CASE("exhausted budget is inconclusive, not an error")
{
    EvalOptions starved;
    starved.max_rounds = 0;
    starved.precision_bits = 2;
    const ClaimResult r = check_claim("thm1", 30, starved);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK(r.value.has_value());
}

TEST_CASE("integrity errors carry the evidence")
{
    ClaimResult bad;
    bad.claim = "thm1";
    bad.n = 7;
    bad.verdict = Verdict::False;
    bad.k = 3;
    const IntegrityError e(bad);
    CHECK(e.evidence().k == 3);
    CHECK(std::string(e.what()).find("thm1") != std::string::npos);
}
