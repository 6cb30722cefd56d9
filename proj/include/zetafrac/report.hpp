#pragma once

#include <string>

#include <json.hpp>

#include "zetafrac/theorems.hpp"

namespace zetafrac {

// Significant digits used for every decimal rendering of an enclosure.
inline constexpr int kDecimalDigits = 60;

// {"lo": ..., "hi": ...} with lo rounded down and hi rounded up, so the
// decimal interval still contains the exact one.
nlohmann::ordered_json enclosure_json(const Enclosure& e, int digits = kDecimalDigits);

// One JSON object per claim result:
//   n, claim_id, verdict, [k], [m], [exponent], [lo, hi], [bound_lo, bound_hi], [detail]
nlohmann::ordered_json to_json(const ClaimResult& r);

// Single human-readable line.
std::string to_text(const ClaimResult& r);

}  // namespace zetafrac
