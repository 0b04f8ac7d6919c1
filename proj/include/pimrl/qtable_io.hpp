#pragma once

// Q-table file: magic "SWQT" | n_states u32 | n_actions u32 | reserved u32 |
// n_states * n_actions little-endian f32, row-major.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pimrl/detail/byte_io.hpp"
#include "pimrl/error.hpp"
#include "pimrl/qtable.hpp"

namespace pimrl {

inline constexpr std::size_t kQTableHeaderBytes = 16;

inline std::vector<std::byte> encode_qtable(const FloatQTable& q) {
  std::vector<std::byte> out;
  out.reserve(kQTableHeaderBytes + 4 * q.values().size());
  for (char c : {'S', 'W', 'Q', 'T'}) out.push_back(static_cast<std::byte>(c));
  detail::put_le<std::uint32_t>(out, q.n_states());
  detail::put_le<std::uint32_t>(out, q.n_actions());
  detail::put_le<std::uint32_t>(out, 0);
  for (float v : q.values()) detail::put_f32(out, v);
  return out;
}

inline FloatQTable decode_qtable(std::span<const std::byte> in) {
  if (in.size() < kQTableHeaderBytes) throw FormatError("qtable: truncated header", in.size());
  if (in[0] != std::byte{'S'} || in[1] != std::byte{'W'} || in[2] != std::byte{'Q'} || in[3] != std::byte{'T'})
    throw FormatError("qtable: bad magic, expected \"SWQT\"", 0);
  const auto n_states = detail::get_le<std::uint32_t>(in, 4);
  const auto n_actions = detail::get_le<std::uint32_t>(in, 8);
  if (n_states == 0 || n_actions == 0) throw FormatError("qtable: empty dimensions", 4);
  const std::uint64_t expected = kQTableHeaderBytes + 4ULL * n_states * n_actions;
  if (in.size() < expected) throw FormatError("qtable: truncated payload", in.size());
  if (in.size() > expected) throw FormatError("qtable: trailing bytes after payload", expected);
  FloatQTable q(n_states, n_actions);
  auto dst = q.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = detail::get_f32(in, kQTableHeaderBytes + 4 * i);
  return q;
}

inline void write_qtable(const FloatQTable& q, const std::string& path) { detail::write_file(path, encode_qtable(q)); }

inline FloatQTable read_qtable(const std::string& path) { return decode_qtable(detail::read_file(path)); }

}  // namespace pimrl
