#pragma once

/* Four-valued anticipatory verdicts for a monitored prefix:
 *
 *   ps  satisfied now and under every continuation
 *   cs  satisfied now, some continuation violates
 *   cv  violated now, some continuation satisfies
 *   pv  violated now and under every continuation
 *
 * ps/pv are permanent — once emitted they can never be revised. */

#include <cstdint>

namespace rvmon {

enum class Verdict : uint8_t { PS, CS, CV, PV };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PS: return "ps";
    case Verdict::CS: return "cs";
    case Verdict::CV: return "cv";
    case Verdict::PV: return "pv";
  }
  return "?";
}

}  // namespace rvmon
