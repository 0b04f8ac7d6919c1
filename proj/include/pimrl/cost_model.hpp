#pragma once

// Parametric timing model for the simulated cores and the host links.
// Kernel time comes from tallied operation counts; transfers are affine in
// the byte count.

#include <cmath>
#include <cstdint>

#include "pimrl/error.hpp"

namespace pimrl {

struct OpCounts {
  std::uint64_t int_add = 0;
  std::uint64_t int_mul32 = 0;
  std::uint64_t fp_add = 0;
  std::uint64_t fp_mul = 0;

  constexpr OpCounts& operator+=(const OpCounts& o) noexcept {
    int_add += o.int_add;
    int_mul32 += o.int_mul32;
    fp_add += o.fp_add;
    fp_mul += o.fp_mul;
    return *this;
  }
  friend constexpr OpCounts operator+(OpCounts a, const OpCounts& b) noexcept { return a += b; }
  friend constexpr OpCounts operator-(OpCounts a, const OpCounts& b) noexcept {
    return {a.int_add - b.int_add, a.int_mul32 - b.int_mul32, a.fp_add - b.fp_add, a.fp_mul - b.fp_mul};
  }
  friend constexpr OpCounts operator*(OpCounts a, std::uint64_t k) noexcept {
    return {a.int_add * k, a.int_mul32 * k, a.fp_add * k, a.fp_mul * k};
  }
  friend constexpr bool operator==(const OpCounts&, const OpCounts&) = default;
};

struct CostModel {
  // Cycles per operation. 32-bit integer multiply is emulated with
  // shift-and-add; floating point is emulated entirely in software.
  std::uint64_t cycles_int_add = 1;
  std::uint64_t cycles_int_mul32 = 32;
  std::uint64_t cycles_fp_add = 80;
  std::uint64_t cycles_fp_mul = 120;
  double core_freq_hz = 425e6;
  double xfer_latency_s = 2e-6;
  double xfer_bandwidth_Bps = 1073741824.0;  // 1 GiB/s

  // Besides positivity: fp_mul > int_mul32 > int_add, and fp_add > int_add
  // (both floating-point ops go through the emulation library).
  void validate() const {
    if (cycles_int_add == 0 || cycles_int_mul32 == 0 || cycles_fp_add == 0 || cycles_fp_mul == 0)
      throw ConfigError("cost model: cycle costs must be positive");
    if (!(core_freq_hz > 0) || !(xfer_latency_s > 0) || !(xfer_bandwidth_Bps > 0))
      throw ConfigError("cost model: frequency, latency and bandwidth must be positive");
    if (!(cycles_fp_mul > cycles_int_mul32 && cycles_int_mul32 > cycles_int_add))
      throw ConfigError("cost model: requires fp_mul > int_mul32 > int_add");
    if (!(cycles_fp_add > cycles_int_add)) throw ConfigError("cost model: requires fp_add > int_add");
  }

  friend constexpr bool operator==(const CostModel&, const CostModel&) = default;
};

constexpr std::uint64_t kernel_cycles(const OpCounts& c, const CostModel& m) noexcept {
  return c.int_add * m.cycles_int_add + c.int_mul32 * m.cycles_int_mul32 + c.fp_add * m.cycles_fp_add +
         c.fp_mul * m.cycles_fp_mul;
}

inline double cycles_to_seconds(std::uint64_t cycles, const CostModel& m) noexcept {
  return static_cast<double>(cycles) / m.core_freq_hz;
}

inline double transfer_seconds(std::uint64_t bytes, const CostModel& m) noexcept {
  return m.xfer_latency_s + static_cast<double>(bytes) / m.xfer_bandwidth_Bps;
}

}  // namespace pimrl
