#pragma once

// FrozenLake (4x4, slippery) and Taxi dynamics, following the Gym
// FrozenLake-v1 and Taxi-v3 reference environments.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "pimrl/error.hpp"
#include "pimrl/lcg.hpp"

namespace pimrl {

enum class EnvKind : std::uint8_t { FrozenLake = 0, Taxi = 1 };

struct EnvSpec {
  EnvKind kind = EnvKind::FrozenLake;
  std::uint32_t n_states = 16;
  std::uint32_t n_actions = 4;

  static constexpr EnvSpec frozen_lake() noexcept { return {EnvKind::FrozenLake, 16, 4}; }
  static constexpr EnvSpec taxi() noexcept { return {EnvKind::Taxi, 500, 6}; }
  static constexpr EnvSpec of(EnvKind kind) noexcept {
    return kind == EnvKind::Taxi ? taxi() : frozen_lake();
  }

  friend constexpr bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

inline std::string_view env_name(EnvKind kind) noexcept {
  return kind == EnvKind::Taxi ? "taxi" : "frozen-lake";
}

inline EnvKind parse_env(std::string_view name) {
  if (name == "frozen-lake" || name == "frozenlake" || name == "FrozenLake") return EnvKind::FrozenLake;
  if (name == "taxi" || name == "Taxi") return EnvKind::Taxi;
  throw DomainError("unknown environment '" + std::string(name) + "'");
}

struct StepResult {
  std::uint32_t next_state = 0;
  float reward = 0.0F;
  bool done = false;

  friend constexpr bool operator==(const StepResult&, const StepResult&) = default;
};

namespace frozen_lake {

enum Action : std::uint32_t { Left = 0, Down = 1, Right = 2, Up = 3 };

inline constexpr std::uint32_t kSide = 4;
inline constexpr std::string_view kMap = "SFFF" "FHFH" "FFFH" "HFFG";

constexpr bool is_hole(std::uint32_t s) noexcept { return s < kMap.size() && kMap[s] == 'H'; }
constexpr bool is_goal(std::uint32_t s) noexcept { return s < kMap.size() && kMap[s] == 'G'; }
constexpr bool is_terminal(std::uint32_t s) noexcept { return is_hole(s) || is_goal(s); }

// Executed direction for slip outcome k in {0,1,2}: a-1, a, a+1 (mod 4).
constexpr std::uint32_t slip_direction(std::uint32_t action, std::uint32_t k) noexcept {
  return (action + 3 + k) % 4;
}

// Deterministic move in `direction`; moves off the grid keep position.
inline StepResult move(std::uint32_t state, std::uint32_t direction) {
  if (state >= kSide * kSide) throw DomainError("frozen_lake: state out of range");
  if (direction >= 4) throw DomainError("frozen_lake: action out of range");
  if (is_terminal(state)) throw DomainError("frozen_lake: step from terminal state");
  std::uint32_t row = state / kSide;
  std::uint32_t col = state % kSide;
  switch (direction) {
    case Left: col = col > 0 ? col - 1 : 0; break;
    case Down: row = row + 1 < kSide ? row + 1 : row; break;
    case Right: col = col + 1 < kSide ? col + 1 : col; break;
    case Up: row = row > 0 ? row - 1 : 0; break;
  }
  const std::uint32_t next = row * kSide + col;
  return {next, is_goal(next) ? 1.0F : 0.0F, is_terminal(next)};
}

// Slippery step: the intended direction or either perpendicular, 1/3 each.
inline StepResult step(std::uint32_t state, std::uint32_t action, RngState& rng) {
  if (action >= 4) throw DomainError("frozen_lake: action out of range");
  if (state >= kSide * kSide) throw DomainError("frozen_lake: state out of range");
  if (is_terminal(state)) throw DomainError("frozen_lake: step from terminal state");
  return move(state, slip_direction(action, rand_below(rng, 3)));
}

}  // namespace frozen_lake

namespace taxi {

enum Action : std::uint32_t { South = 0, North = 1, East = 2, West = 3, Pickup = 4, Dropoff = 5 };

struct Position {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend constexpr bool operator==(const Position&, const Position&) = default;
};

struct Decoded {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  std::uint32_t pass_loc = 0;  // 0..3 landmark, 4 = in taxi
  std::uint32_t dest = 0;      // 0..3 landmark
  friend constexpr bool operator==(const Decoded&, const Decoded&) = default;
};

inline constexpr std::uint32_t kInTaxi = 4;
inline constexpr std::array<Position, 4> kLandmarks{{{0, 0}, {0, 4}, {4, 0}, {4, 3}}};  // R G Y B

// Standard Taxi-v3 layout; '|' between cells is a wall, ':' is open.
inline constexpr std::array<std::string_view, 7> kMap{
    "+---------+",
    "|R: | : :G|",
    "| : | : : |",
    "| : : : : |",
    "| | : | : |",
    "|Y| : |B: |",
    "+---------+",
};

inline std::uint32_t encode(std::uint32_t row, std::uint32_t col, std::uint32_t pass_loc, std::uint32_t dest) {
  if (row > 4 || col > 4 || pass_loc > 4 || dest > 3) throw DomainError("taxi::encode: component out of range");
  return ((row * 5 + col) * 5 + pass_loc) * 4 + dest;
}

inline Decoded decode(std::uint32_t state) {
  if (state >= 500) throw DomainError("taxi::decode: state out of range");
  Decoded d;
  d.dest = state % 4;
  state /= 4;
  d.pass_loc = state % 5;
  state /= 5;
  d.col = state % 5;
  d.row = state / 5;
  return d;
}

inline StepResult step(std::uint32_t state, std::uint32_t action) {
  if (action >= 6) throw DomainError("taxi: action out of range");
  auto [row, col, pass_loc, dest] = decode(state);
  const Position taxi_pos{row, col};
  float reward = -1.0F;
  bool done = false;
  switch (action) {
    case South: row = row < 4 ? row + 1 : 4; break;
    case North: row = row > 0 ? row - 1 : 0; break;
    case East:
      if (kMap[1 + row][2 * col + 2] == ':') col = col < 4 ? col + 1 : 4;
      break;
    case West:
      if (kMap[1 + row][2 * col] == ':') col = col > 0 ? col - 1 : 0;
      break;
    case Pickup:
      if (pass_loc < kInTaxi && taxi_pos == kLandmarks[pass_loc]) {
        pass_loc = kInTaxi;
      } else {
        reward = -10.0F;
      }
      break;
    case Dropoff:
      if (taxi_pos == kLandmarks[dest] && pass_loc == kInTaxi) {
        pass_loc = dest;
        done = true;
        reward = 20.0F;
      } else if (pass_loc == kInTaxi) {
        // Dropping at another landmark is legal; anywhere else is not.
        bool at_landmark = false;
        for (std::uint32_t i = 0; i < kLandmarks.size(); ++i) {
          if (taxi_pos == kLandmarks[i]) {
            pass_loc = i;
            at_landmark = true;
          }
        }
        if (!at_landmark) reward = -10.0F;
      } else {
        reward = -10.0F;
      }
      break;
  }
  return {encode(row, col, pass_loc, dest), reward, done};
}

// Start states: passenger waiting at a landmark other than the destination.
inline const std::array<std::uint32_t, 300>& start_states() {
  static const auto table = [] {
    std::array<std::uint32_t, 300> out{};
    std::size_t n = 0;
    for (std::uint32_t s = 0; s < 500; ++s) {
      const Decoded d = decode(s);
      if (d.pass_loc < kInTaxi && d.pass_loc != d.dest) out[n++] = s;
    }
    return out;
  }();
  return table;
}

}  // namespace taxi

// Initial state of a fresh episode: FrozenLake always starts at 0, Taxi
// draws uniformly from its start states.
inline std::uint32_t reset_state(const EnvSpec& spec, RngState& rng) {
  if (spec.kind == EnvKind::FrozenLake) return 0;
  const auto& starts = taxi::start_states();
  return starts[rand_below(rng, static_cast<std::uint32_t>(starts.size()))];
}

inline StepResult env_step(const EnvSpec& spec, std::uint32_t state, std::uint32_t action, RngState& rng) {
  if (spec.kind == EnvKind::FrozenLake) return frozen_lake::step(state, action, rng);
  return taxi::step(state, action);
}

}  // namespace pimrl
