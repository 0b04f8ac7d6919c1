// Collect a FrozenLake dataset, train it on 16 simulated cores and print the
// phase breakdown and greedy-policy reward.

#include <cstdio>

#include "pimrl/pimrl.hpp"

int main() {
  using namespace pimrl;
  const EnvSpec spec = EnvSpec::frozen_lake();
  const Dataset data = collect_dataset(spec, {BehaviorKind::UniformRandom, 1}, 200'000, 1);

  PimConfig cfg;
  cfg.n_cores = 16;
  cfg.tau = 50;
  const SimReport report = run_training(cfg, data);

  std::printf("cpu->pim %.6fs  kernel %.6fs  inter-core %.6fs  pim->cpu %.6fs  (%llu sync rounds)\n",
              report.seconds.cpu_to_pim, report.seconds.kernel, report.seconds.inter_core, report.seconds.pim_to_cpu,
              static_cast<unsigned long long>(report.comm_rounds));
  const double reward = evaluate(greedy_policy(report.qtable_final), spec, 1000, default_max_steps(spec.kind), 42);
  std::printf("greedy policy mean reward over 1000 episodes: %.4f\n", reward);
}
