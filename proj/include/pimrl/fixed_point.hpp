#pragma once

// Decimal fixed point: a real v is carried as the integer v * scale.
// Ingestion rounds to nearest (ties to even); products inside the kernels are
// descaled by truncating division.

#include <cmath>
#include <cstdint>
#include <limits>

#include "pimrl/error.hpp"

namespace pimrl {

inline constexpr std::int64_t kDefaultScaleFactor = 10'000;

inline std::int32_t to_fixed(double v, std::int64_t scale) {
  if (scale < 1) throw DomainError("to_fixed: scale factor must be >= 1");
  const double scaled = v * static_cast<double>(scale);
  // nearbyint honours the default FE_TONEAREST mode: ties go to even.
  const double rounded = std::nearbyint(scaled);
  if (!(std::fabs(rounded) < 2147483648.0) || rounded == -2147483648.0)
    throw RangeError("to_fixed: scaled value out of signed 32-bit range");
  return static_cast<std::int32_t>(rounded);
}

inline double from_fixed(std::int32_t i, std::int64_t scale) noexcept {
  return static_cast<double>(i) / static_cast<double>(scale);
}

// Narrowing that refuses to wrap.
inline std::int32_t checked_int32(std::int64_t v) {
  if (v > std::numeric_limits<std::int32_t>::max() || v < -std::numeric_limits<std::int32_t>::max())
    throw RangeError("fixed-point Q update left the signed 32-bit range");
  return static_cast<std::int32_t>(v);
}

}  // namespace pimrl
