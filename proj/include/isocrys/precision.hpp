#pragma once

#include <cstdlib>
#include <string>

#include "isocrys/errors.hpp"

namespace isocrys {

inline constexpr int kDefaultPrecisionCeiling = 1024;

// ISOCRYS_PRECISION_CEILING, or the default when unset or malformed.
inline int precision_ceiling() {
  const char* s = std::getenv("ISOCRYS_PRECISION_CEILING");
  if (!s) return kDefaultPrecisionCeiling;
  try {
    int v = std::stoi(s);
    return v > 0 ? v : kDefaultPrecisionCeiling;
  } catch (...) {
    return kDefaultPrecisionCeiling;
  }
}

// Runs body(precision), doubling the precision after each PrecisionFailure
// until the ceiling is passed.
template <class F>
auto with_escalation(int start, F&& body, int ceiling = precision_ceiling()) -> decltype(body(start)) {
  for (int prec = start;; prec *= 2) {
    try {
      return body(prec);
    } catch (const PrecisionFailure&) {
      if (prec * 2 > ceiling) throw;
    }
  }
}

}  // namespace isocrys
