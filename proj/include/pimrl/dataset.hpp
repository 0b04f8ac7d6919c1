#pragma once

// Offline experience dataset, its binary file format and the contiguous
// per-core partitioning.
//
// File layout (little-endian):
//   magic "SWRL" | version u16 = 1 | env u8 | reserved u8 | n_states u32 |
//   n_actions u32 | count u64 | seed u64 | count x (state u32, action u32,
//   reward f32 bits u32, next_state u32)

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pimrl/detail/byte_io.hpp"
#include "pimrl/envs.hpp"
#include "pimrl/error.hpp"

namespace pimrl {

struct Transition {
  std::uint32_t state = 0;
  std::uint32_t action = 0;
  float reward = 0.0F;
  std::uint32_t next_state = 0;

  // Bitwise on the reward so that -0.0 and NaN payloads compare faithfully.
  friend bool operator==(const Transition& a, const Transition& b) noexcept {
    return a.state == b.state && a.action == b.action && a.next_state == b.next_state &&
           std::bit_cast<std::uint32_t>(a.reward) == std::bit_cast<std::uint32_t>(b.reward);
  }
};

struct Dataset {
  EnvSpec spec;
  std::vector<Transition> transitions;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return transitions.size(); }

  void validate() const {
    if (transitions.empty()) throw DomainError("dataset is empty");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      const Transition& t = transitions[i];
      if (t.state >= spec.n_states || t.next_state >= spec.n_states || t.action >= spec.n_actions)
        throw DomainError("transition " + std::to_string(i) + " out of range for environment");
    }
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct Chunk {
  std::uint32_t core_id = 0;
  std::span<const Transition> transitions;
};

inline constexpr std::size_t kDatasetHeaderBytes = 32;
inline constexpr std::size_t kTransitionBytes = 16;

// [begin, end) of core `core` when `len` items are split over `n_cores`; the
// first len % n_cores cores take one extra item.
struct ChunkBounds {
  std::size_t begin = 0;
  std::size_t end = 0;
};

constexpr ChunkBounds chunk_bounds(std::size_t len, std::size_t n_cores, std::size_t core) noexcept {
  const std::size_t base = len / n_cores;
  const std::size_t extra = len % n_cores;
  const std::size_t begin = core * base + (core < extra ? core : extra);
  return {begin, begin + base + (core < extra ? 1 : 0)};
}

inline std::vector<Chunk> partition(const Dataset& dataset, std::uint32_t n_cores) {
  if (n_cores == 0) throw ConfigError("partition: need at least one core");
  if (dataset.transitions.empty()) throw ConfigError("partition: dataset is empty");
  if (n_cores > dataset.size())
    throw ConfigError("partition: " + std::to_string(n_cores) + " cores exceed dataset length " +
                      std::to_string(dataset.size()));
  std::vector<Chunk> chunks;
  chunks.reserve(n_cores);
  const std::span<const Transition> all(dataset.transitions);
  for (std::uint32_t k = 0; k < n_cores; ++k) {
    const auto [begin, end] = chunk_bounds(all.size(), n_cores, k);
    chunks.push_back({k, all.subspan(begin, end - begin)});
  }
  return chunks;
}

inline std::vector<std::byte> encode_dataset(const Dataset& dataset) {
  std::vector<std::byte> out;
  out.reserve(kDatasetHeaderBytes + kTransitionBytes * dataset.size());
  for (char c : {'S', 'W', 'R', 'L'}) out.push_back(static_cast<std::byte>(c));
  detail::put_le<std::uint16_t>(out, 1);
  detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(dataset.spec.kind));
  detail::put_le<std::uint8_t>(out, 0);
  detail::put_le<std::uint32_t>(out, dataset.spec.n_states);
  detail::put_le<std::uint32_t>(out, dataset.spec.n_actions);
  detail::put_le<std::uint64_t>(out, dataset.size());
  detail::put_le<std::uint64_t>(out, dataset.seed);
  for (const Transition& t : dataset.transitions) {
    detail::put_le(out, t.state);
    detail::put_le(out, t.action);
    detail::put_f32(out, t.reward);
    detail::put_le(out, t.next_state);
  }
  return out;
}

inline Dataset decode_dataset(std::span<const std::byte> in) {
  if (in.size() < kDatasetHeaderBytes) throw FormatError("dataset: truncated header", in.size());
  if (in[0] != std::byte{'S'} || in[1] != std::byte{'W'} || in[2] != std::byte{'R'} || in[3] != std::byte{'L'})
    throw FormatError("dataset: bad magic, expected \"SWRL\"", 0);
  if (const auto version = detail::get_le<std::uint16_t>(in, 4); version != 1)
    throw FormatError("dataset: unsupported version " + std::to_string(version), 4);
  const auto env = detail::get_le<std::uint8_t>(in, 6);
  if (env > 1) throw FormatError("dataset: unknown environment id " + std::to_string(env), 6);

  Dataset d;
  d.spec = EnvSpec::of(static_cast<EnvKind>(env));
  if (detail::get_le<std::uint32_t>(in, 8) != d.spec.n_states)
    throw FormatError("dataset: n_states does not match environment", 8);
  if (detail::get_le<std::uint32_t>(in, 12) != d.spec.n_actions)
    throw FormatError("dataset: n_actions does not match environment", 12);
  const auto count = detail::get_le<std::uint64_t>(in, 16);
  d.seed = detail::get_le<std::uint64_t>(in, 24);
  if (count == 0) throw FormatError("dataset: empty dataset", 16);

  const std::uint64_t payload = in.size() - kDatasetHeaderBytes;
  if (payload / kTransitionBytes < count)
    throw FormatError("dataset: truncated, header declares " + std::to_string(count) + " records", in.size());
  if (payload != count * kTransitionBytes)
    throw FormatError("dataset: trailing bytes after last record", kDatasetHeaderBytes + count * kTransitionBytes);

  d.transitions.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t off = kDatasetHeaderBytes + i * kTransitionBytes;
    Transition& t = d.transitions[i];
    t.state = detail::get_le<std::uint32_t>(in, off);
    t.action = detail::get_le<std::uint32_t>(in, off + 4);
    t.reward = detail::get_f32(in, off + 8);
    t.next_state = detail::get_le<std::uint32_t>(in, off + 12);
    if (t.state >= d.spec.n_states || t.next_state >= d.spec.n_states || t.action >= d.spec.n_actions)
      throw FormatError("dataset: record " + std::to_string(i) + " out of range for environment", off);
  }
  return d;
}

inline void write_dataset(const Dataset& dataset, const std::string& path) {
  detail::write_file(path, encode_dataset(dataset));
}

inline Dataset read_dataset(const std::string& path) { return decode_dataset(detail::read_file(path)); }

// FNV-1a over the encoded file image.
inline std::uint64_t dataset_checksum(const Dataset& dataset) {
  return detail::fnv1a64(encode_dataset(dataset));
}

}  // namespace pimrl
