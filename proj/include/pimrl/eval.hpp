#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pimrl/envs.hpp"
#include "pimrl/error.hpp"
#include "pimrl/kernels.hpp"
#include "pimrl/lcg.hpp"
#include "pimrl/qtable.hpp"

namespace pimrl {

struct Policy {
  std::vector<std::uint32_t> actions;  // one per state

  friend bool operator==(const Policy&, const Policy&) = default;
};

inline Policy greedy_policy(const FloatQTable& q) {
  Policy p;
  p.actions.reserve(q.n_states());
  for (std::uint32_t s = 0; s < q.n_states(); ++s) p.actions.push_back(greedy_action(q.row(s)));
  return p;
}

// Gym's TimeLimit values.
constexpr std::uint32_t default_max_steps(EnvKind kind) noexcept { return kind == EnvKind::Taxi ? 200 : 100; }

// Total reward of each of n_episodes rollouts. One LCG stream drives the
// start states and the environment noise across all episodes, in order.
inline std::vector<double> rollout_returns(const Policy& policy, const EnvSpec& spec, std::uint32_t n_episodes,
                                           std::uint32_t max_steps, std::uint64_t seed) {
  if (n_episodes == 0) throw DomainError("evaluate: n_episodes must be >= 1");
  if (policy.actions.size() != spec.n_states) throw DomainError("evaluate: policy size does not match environment");
  for (std::uint32_t a : policy.actions)
    if (a >= spec.n_actions) throw DomainError("evaluate: policy action out of range");

  RngState rng = derive_stream(seed, 0);
  std::vector<double> returns;
  returns.reserve(n_episodes);
  for (std::uint32_t e = 0; e < n_episodes; ++e) {
    std::uint32_t state = reset_state(spec, rng);
    double total = 0.0;
    for (std::uint32_t step = 0; step < max_steps; ++step) {
      const StepResult r = env_step(spec, state, policy.actions[state], rng);
      total += r.reward;
      state = r.next_state;
      if (r.done) break;
    }
    returns.push_back(total);
  }
  return returns;
}

struct EvalSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single episode
};

inline EvalSummary summarize(const std::vector<double>& returns) {
  EvalSummary s;
  double sum = 0.0;
  for (double r : returns) sum += r;
  s.mean = sum / static_cast<double>(returns.size());
  if (returns.size() > 1) {
    double ss = 0.0;
    for (double r : returns) ss += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(returns.size() - 1));
  }
  return s;
}

inline double evaluate(const Policy& policy, const EnvSpec& spec, std::uint32_t n_episodes, std::uint32_t max_steps,
                       std::uint64_t seed) {
  return summarize(rollout_returns(policy, spec, n_episodes, max_steps, seed)).mean;
}

}  // namespace pimrl
