#pragma once

// Per-core update kernels: Q-learning and SARSA in FP32 and scaled INT32,
// epsilon-greedy action selection, and the three sampling orders.
//
// Every kernel has a fixed operation tally per update (see the *_ops
// functions); the simulator charges those tallies against a CostModel.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimrl/cost_model.hpp"
#include "pimrl/dataset.hpp"
#include "pimrl/error.hpp"
#include "pimrl/fixed_point.hpp"
#include "pimrl/lcg.hpp"
#include "pimrl/qtable.hpp"

namespace pimrl {

struct Hyperparams {
  double alpha = 0.1;
  double gamma = 0.95;
  std::uint32_t episodes = 2000;
  std::int64_t scale_factor = kDefaultScaleFactor;
  double epsilon = 0.1;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
    if (scale_factor < 1) throw ConfigError("scale factor must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
    if (episodes == 0) throw ConfigError("episodes must be >= 1");
  }
};

struct Fp32Coeffs {
  float alpha;
  float gamma;

  static Fp32Coeffs from(const Hyperparams& h) noexcept {
    return {static_cast<float>(h.alpha), static_cast<float>(h.gamma)};
  }
};

struct FixedCoeffs {
  std::int64_t alpha;
  std::int64_t gamma;
  std::int64_t scale;

  static FixedCoeffs from(const Hyperparams& h) {
    return {to_fixed(h.alpha, h.scale_factor), to_fixed(h.gamma, h.scale_factor), h.scale_factor};
  }
};

template <class T>
T row_max(std::span<const T> row) noexcept {
  T m = row[0];
  for (std::size_t a = 1; a < row.size(); ++a)
    if (row[a] > m) m = row[a];
  return m;
}

// Argmax with the lowest index winning ties.
template <class T>
std::uint32_t greedy_action(std::span<const T> row) noexcept {
  std::uint32_t best = 0;
  for (std::uint32_t a = 1; a < row.size(); ++a)
    if (row[a] > row[best]) best = a;
  return best;
}

// ---------------------------------------------------------------------------
// FP32

inline float fp32_td_step(float q, float next_value, float reward, Fp32Coeffs c) noexcept {
  const float target = reward + c.gamma * next_value;
  return q + c.alpha * (target - q);
}

inline float q_target_fp32(const Transition& t, const FloatQTable& q, float gamma) noexcept {
  return t.reward + gamma * row_max(q.row(t.next_state));
}

inline void q_update_fp32(FloatQTable& q, const Transition& t, Fp32Coeffs c) noexcept {
  float& cell = q(t.state, t.action);
  cell = fp32_td_step(cell, row_max(q.row(t.next_state)), t.reward, c);
}

inline void q_update_fp32(FloatQTable& q, const Transition& t, const Hyperparams& h) noexcept {
  q_update_fp32(q, t, Fp32Coeffs::from(h));
}

// ---------------------------------------------------------------------------
// INT32 (scaled)
//
// target = r_s + (gamma_s * next_s) / S
// q'     = q_s + (alpha_s * (target - q_s)) / S
// Products in 64 bits, '/' truncates toward zero.

inline std::int32_t fixed_td_step(std::int64_t q_s, std::int64_t next_s, std::int64_t reward_s, FixedCoeffs c) {
  const std::int64_t target = checked_int32(reward_s + (c.gamma * next_s) / c.scale);
  return checked_int32(q_s + (c.alpha * (target - q_s)) / c.scale);
}

inline void q_update_int32(FixedQTable& q, const Transition& t, std::int32_t reward_s, FixedCoeffs c) {
  std::int32_t& cell = q(t.state, t.action);
  cell = fixed_td_step(cell, row_max(q.row(t.next_state)), reward_s, c);
}

inline void q_update_int32(FixedQTable& q, const Transition& t, const Hyperparams& h) {
  q_update_int32(q, t, to_fixed(t.reward, h.scale_factor), FixedCoeffs::from(h));
}

// Alternative INT32 variant: the table holds descaled reals; the operands of
// each update are scaled on the way in and the result descaled on the way out.
inline void q_update_int32_descaled(FloatQTable& q, const Transition& t, std::int32_t reward_s, FixedCoeffs c) {
  float& cell = q(t.state, t.action);
  const std::int32_t next_s = to_fixed(row_max(q.row(t.next_state)), c.scale);
  cell = static_cast<float>(from_fixed(fixed_td_step(to_fixed(cell, c.scale), next_s, reward_s, c), c.scale));
}

// ---------------------------------------------------------------------------
// SARSA

// Exploration is decided by one draw at a resolution of 1e-6.
inline constexpr std::uint32_t kEpsilonResolution = 1'000'000;

struct EpsilonGreedy {
  std::uint32_t threshold = 0;  // explore when draw < threshold

  static EpsilonGreedy from(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
    return {static_cast<std::uint32_t>(std::llround(epsilon * kEpsilonResolution))};
  }
};

struct NextAction {
  std::uint32_t action = 0;
  std::uint32_t draws = 0;  // LCG draws consumed
  bool explored = false;
};

// epsilon = 0 is pure greedy and draws nothing; epsilon = 1 draws the action
// directly; otherwise one decision draw, plus one action draw on exploration.
template <class T>
NextAction sarsa_next_action(const QTable<T>& q, std::uint32_t s_next, EpsilonGreedy eps, RngState& rng) {
  if (eps.threshold == 0) return {greedy_action(q.row(s_next)), 0, false};
  if (eps.threshold >= kEpsilonResolution) return {rand_below(rng, q.n_actions()), 1, true};
  if (rand_below(rng, kEpsilonResolution) < eps.threshold) return {rand_below(rng, q.n_actions()), 2, true};
  return {greedy_action(q.row(s_next)), 1, false};
}

template <class T>
NextAction sarsa_next_action(const QTable<T>& q, std::uint32_t s_next, double epsilon, RngState& rng) {
  if (s_next >= q.n_states()) throw DomainError("sarsa_next_action: state out of range");
  return sarsa_next_action(q, s_next, EpsilonGreedy::from(epsilon), rng);
}

inline NextAction sarsa_update(FloatQTable& q, const Transition& t, Fp32Coeffs c, EpsilonGreedy eps, RngState& rng) {
  const NextAction next = sarsa_next_action(q, t.next_state, eps, rng);
  float& cell = q(t.state, t.action);
  cell = fp32_td_step(cell, q(t.next_state, next.action), t.reward, c);
  return next;
}

inline NextAction sarsa_update(FixedQTable& q, const Transition& t, std::int32_t reward_s, FixedCoeffs c,
                               EpsilonGreedy eps, RngState& rng) {
  const NextAction next = sarsa_next_action(q, t.next_state, eps, rng);
  std::int32_t& cell = q(t.state, t.action);
  cell = fixed_td_step(cell, q(t.next_state, next.action), reward_s, c);
  return next;
}

inline NextAction sarsa_update_descaled(FloatQTable& q, const Transition& t, std::int32_t reward_s, FixedCoeffs c,
                                        EpsilonGreedy eps, RngState& rng) {
  const NextAction next = sarsa_next_action(q, t.next_state, eps, rng);
  float& cell = q(t.state, t.action);
  const std::int32_t next_s = to_fixed(q(t.next_state, next.action), c.scale);
  cell = static_cast<float>(from_fixed(fixed_td_step(to_fixed(cell, c.scale), next_s, reward_s, c), c.scale));
  return next;
}

inline NextAction sarsa_update(FloatQTable& q, const Transition& t, const Hyperparams& h, RngState& rng) {
  return sarsa_update(q, t, Fp32Coeffs::from(h), EpsilonGreedy::from(h.epsilon), rng);
}

inline NextAction sarsa_update(FixedQTable& q, const Transition& t, const Hyperparams& h, RngState& rng) {
  return sarsa_update(q, t, to_fixed(t.reward, h.scale_factor), FixedCoeffs::from(h), EpsilonGreedy::from(h.epsilon),
                      rng);
}

// ---------------------------------------------------------------------------
// Sampling

enum class Sampling : std::uint8_t { SEQ, RAN, STR };

struct SamplingStrategy {
  Sampling kind = Sampling::SEQ;
  std::uint32_t stride = 4;  // STR only

  void validate() const {
    if (kind == Sampling::STR && stride == 0) throw ConfigError("stride must be >= 1");
  }
};

inline std::string_view sampling_name(Sampling s) noexcept {
  switch (s) {
    case Sampling::RAN: return "ran";
    case Sampling::STR: return "str";
    default: return "seq";
  }
}

inline Sampling parse_sampling(std::string_view name) {
  if (name == "seq") return Sampling::SEQ;
  if (name == "ran") return Sampling::RAN;
  if (name == "str") return Sampling::STR;
  throw DomainError("unknown sampling strategy '" + std::string(name) + "'");
}

// Visit order for one episode over a chunk of chunk_len experiences.
//   SEQ: 0, 1, ..., len-1
//   STR: residue classes mod stride in turn: 0, d, 2d, ..., 1, 1+d, ...
//   RAN: len independent rand_below(len) draws (with replacement)
inline void sample_order_into(std::vector<std::uint32_t>& out, const SamplingStrategy& strategy,
                              std::uint32_t chunk_len, RngState& rng) {
  out.clear();
  out.reserve(chunk_len);
  switch (strategy.kind) {
    case Sampling::SEQ:
      for (std::uint32_t i = 0; i < chunk_len; ++i) out.push_back(i);
      break;
    case Sampling::STR:
      for (std::uint32_t p = 0; p < strategy.stride && p < chunk_len; ++p)
        for (std::uint64_t i = p; i < chunk_len; i += strategy.stride) out.push_back(static_cast<std::uint32_t>(i));
      break;
    case Sampling::RAN:
      for (std::uint32_t i = 0; i < chunk_len; ++i) out.push_back(rand_below(rng, chunk_len));
      break;
  }
}

inline std::vector<std::uint32_t> sample_order(const SamplingStrategy& strategy, std::uint32_t chunk_len,
                                               RngState& rng) {
  if (chunk_len == 0) throw DomainError("sample_order: empty chunk");
  strategy.validate();
  std::vector<std::uint32_t> out;
  sample_order_into(out, strategy, chunk_len, rng);
  return out;
}

// ---------------------------------------------------------------------------
// Operation tallies

namespace ops {

// Loop counter, record address, two table addresses.
inline constexpr OpCounts kBookkeeping{.int_add = 4};

// lcg_next is a multiply and a modular reduction; rand_below adds one more
// reduction and a compare.
inline constexpr OpCounts kRandBelow{.int_add = 1, .int_mul32 = 2 + 1};

// A scaled multiply (64-bit product followed by the descale division) is
// charged as one emulated 32-bit multiply.
constexpr OpCounts q_update(DType dtype, std::uint32_t n_actions) noexcept {
  const std::uint64_t compares = n_actions - 1;
  if (dtype == DType::FP32) return kBookkeeping + OpCounts{.fp_add = compares + 3, .fp_mul = 2};
  return kBookkeeping + OpCounts{.int_add = compares + 3, .int_mul32 = 2};
}

// Descale-every-update variant: compares on reals, two scalings in, one out.
constexpr OpCounts q_update_descaled(std::uint32_t n_actions) noexcept {
  return kBookkeeping + OpCounts{.int_add = 3, .int_mul32 = 2, .fp_add = n_actions - 1ULL, .fp_mul = 3};
}

constexpr OpCounts sarsa_update(DType dtype, std::uint32_t n_actions, const NextAction& next, bool descaled) noexcept {
  OpCounts c = kBookkeeping + kRandBelow * next.draws;
  const std::uint64_t compares = next.explored ? 0 : n_actions - 1ULL;
  if (descaled) return c + OpCounts{.int_add = 3, .int_mul32 = 2, .fp_add = compares, .fp_mul = 3};
  if (dtype == DType::FP32) return c + OpCounts{.fp_add = compares + 3, .fp_mul = 2};
  return c + OpCounts{.int_add = compares + 3, .int_mul32 = 2};
}

constexpr OpCounts sampling(const SamplingStrategy& s, std::uint32_t chunk_len) noexcept {
  return s.kind == Sampling::RAN ? kRandBelow * chunk_len : OpCounts{};
}

}  // namespace ops

}  // namespace pimrl
