#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pimrl {

// Out-of-range state, action or argument handed to a pure function.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid experiment configuration (tau does not divide episodes, too many cores, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A scaled fixed-point value left the signed 32-bit range.
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

// Malformed dataset or Q-table file. Carries the byte offset of the problem.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace pimrl
