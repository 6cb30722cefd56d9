#include "zetafrac/report.hpp"

namespace zetafrac {

nlohmann::ordered_json enclosure_json(const Enclosure& e, int digits)
{
    return {{"lo", e.lo().to_decimal(digits, Rounding::Down)}, {"hi", e.hi().to_decimal(digits, Rounding::Up)}};
}

nlohmann::ordered_json to_json(const ClaimResult& r)
{
    nlohmann::ordered_json j;
    j["n"] = r.n;
    if (!r.exponent.empty()) {
        j["exponent"] = r.exponent;
    }
    j["claim_id"] = r.claim;
    j["verdict"] = std::string(to_string(r.verdict));
    if (r.k) {
        j["k"] = *r.k;
    }
    if (r.m) {
        j["m"] = *r.m;
    }
    if (r.value) {
        j["lo"] = r.value->lo().to_decimal(kDecimalDigits, Rounding::Down);
        j["hi"] = r.value->hi().to_decimal(kDecimalDigits, Rounding::Up);
    }
    // The claimed open window; its outer edges are rounded outward.
    if (r.lower) {
        j["bound_lo"] = r.lower->lo().to_decimal(kDecimalDigits, Rounding::Down);
    }
    if (r.upper) {
        j["bound_hi"] = r.upper->hi().to_decimal(kDecimalDigits, Rounding::Up);
    }
    if (!r.detail.empty()) {
        j["detail"] = r.detail;
    }
    return j;
}

std::string to_text(const ClaimResult& r)
{
    std::string line = r.claim + " n=" + (r.exponent.empty() ? std::to_string(r.n) : r.exponent) + " " +
                       std::string(to_string(r.verdict));
    if (r.k) {
        line += " k=" + std::to_string(*r.k);
    }
    if (r.m) {
        line += " m=" + std::to_string(*r.m);
    }
    if (r.value) {
        line += " value in [" + r.value->lo().to_decimal(20, Rounding::Down) + ", " +
                r.value->hi().to_decimal(20, Rounding::Up) + "]";
    }
    if (r.lower || r.upper) {
        line += " window (" + (r.lower ? r.lower->lo().to_decimal(20, Rounding::Down) : std::string("-inf")) + ", " +
                (r.upper ? r.upper->hi().to_decimal(20, Rounding::Up) : std::string("+inf")) + ")";
    }
    if (!r.detail.empty()) {
        line += " (" + r.detail + ")";
    }
    return line;
}

}  // namespace zetafrac
