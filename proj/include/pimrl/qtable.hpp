#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "pimrl/error.hpp"
#include "pimrl/fixed_point.hpp"

namespace pimrl {

enum class DType : std::uint8_t { FP32, INT32 };

inline std::string_view dtype_name(DType d) noexcept { return d == DType::INT32 ? "int32" : "fp32"; }

// Dense, row-major |S| x |A| table. T is float (FP32) or std::int32_t
// (INT32, values scaled by the run's scale factor).
template <class T>
class QTable {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, std::int32_t>);

 public:
  using value_type = T;
  static constexpr DType dtype = std::is_same_v<T, float> ? DType::FP32 : DType::INT32;

  QTable() = default;
  QTable(std::uint32_t n_states, std::uint32_t n_actions, T fill = T{})
      : n_states_(n_states), n_actions_(n_actions),
        values_(static_cast<std::size_t>(n_states) * n_actions, fill) {}

  std::uint32_t n_states() const noexcept { return n_states_; }
  std::uint32_t n_actions() const noexcept { return n_actions_; }

  T& operator()(std::uint32_t s, std::uint32_t a) noexcept {
    return values_[static_cast<std::size_t>(s) * n_actions_ + a];
  }
  T operator()(std::uint32_t s, std::uint32_t a) const noexcept {
    return values_[static_cast<std::size_t>(s) * n_actions_ + a];
  }

  std::span<const T> row(std::uint32_t s) const noexcept {
    return std::span<const T>(values_).subspan(static_cast<std::size_t>(s) * n_actions_, n_actions_);
  }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  bool same_shape(const QTable& o) const noexcept {
    return n_states_ == o.n_states_ && n_actions_ == o.n_actions_;
  }

  // Exact element comparison (float tables compare by value, so +0 == -0).
  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::uint32_t n_states_ = 0;
  std::uint32_t n_actions_ = 0;
  std::vector<T> values_;
};

using FloatQTable = QTable<float>;
using FixedQTable = QTable<std::int32_t>;

inline FloatQTable descale(const FixedQTable& q, std::int64_t scale) {
  FloatQTable out(q.n_states(), q.n_actions());
  auto dst = out.values();
  auto src = q.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(from_fixed(src[i], scale));
  return out;
}

inline FixedQTable rescale(const FloatQTable& q, std::int64_t scale) {
  FixedQTable out(q.n_states(), q.n_actions());
  auto dst = out.values();
  auto src = q.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = to_fixed(src[i], scale);
  return out;
}

}  // namespace pimrl
