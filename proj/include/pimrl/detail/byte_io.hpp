#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

namespace pimrl::detail {

// Little-endian encoding independent of host byte order.
template <class UInt>
void put_le(std::vector<std::byte>& out, UInt v) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

template <class UInt>
UInt get_le(std::span<const std::byte> in, std::size_t offset) {
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    v |= static_cast<UInt>(std::to_integer<unsigned>(in[offset + i])) << (8 * i);
  return v;
}

inline void put_f32(std::vector<std::byte>& out, float f) { put_le(out, std::bit_cast<std::uint32_t>(f)); }

inline float get_f32(std::span<const std::byte> in, std::size_t offset) {
  return std::bit_cast<float>(get_le<std::uint32_t>(in, offset));
}

inline std::vector<std::byte> read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  const auto size = static_cast<std::size_t>(is.tellg());
  std::vector<std::byte> bytes(size);
  is.seekg(0);
  if (size > 0 && !is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size)))
    throw std::system_error(errno, std::generic_category(), "cannot read " + path);
  return bytes;
}

inline void write_file(const std::string& path, std::span<const std::byte> bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::system_error(errno, std::generic_category(), "cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
}

// FNV-1a, 64-bit.
inline std::uint64_t fnv1a64(std::span<const std::byte> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::byte b : bytes) {
    h ^= std::to_integer<std::uint64_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pimrl::detail
