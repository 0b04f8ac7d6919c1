#pragma once

#include <cstdint>

#include "pimrl/dataset.hpp"
#include "pimrl/envs.hpp"
#include "pimrl/lcg.hpp"

namespace pimrl {

enum class BehaviorKind : std::uint8_t { UniformRandom };

struct BehaviorPolicy {
  BehaviorKind kind = BehaviorKind::UniformRandom;
  std::uint64_t seed = 0;
};

// Logs exactly n_transitions tuples in encounter order. The behavior policy
// draws actions from its own stream; environment noise (slips, Taxi resets)
// uses a stream derived from `seed`. Terminal transitions are logged, then
// the episode restarts.
inline Dataset collect_dataset(const EnvSpec& spec, const BehaviorPolicy& policy, std::uint64_t n_transitions,
                               std::uint64_t seed) {
  if (n_transitions == 0) throw DomainError("collect_dataset: n_transitions must be >= 1");
  RngState policy_rng = derive_stream(policy.seed, 0);
  RngState env_rng = derive_stream(seed, 1);

  Dataset d;
  d.spec = spec;
  d.seed = seed;
  d.transitions.reserve(n_transitions);
  std::uint32_t state = reset_state(spec, env_rng);
  for (std::uint64_t i = 0; i < n_transitions; ++i) {
    const std::uint32_t action = rand_below(policy_rng, spec.n_actions);
    const StepResult r = env_step(spec, state, action, env_rng);
    d.transitions.push_back({state, action, r.reward, r.next_state});
    state = r.done ? reset_state(spec, env_rng) : r.next_state;
  }
  return d;
}

}  // namespace pimrl
