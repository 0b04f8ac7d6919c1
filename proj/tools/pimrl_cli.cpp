// pimrl: collect offline datasets, run simulated PIM training, evaluate
// policies and sweep core counts.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pimrl/pimrl.hpp"

namespace {

struct TrainOptions {
  std::vector<std::string> datasets;
  std::string env;
  std::uint32_t cores = 0;  // 0: 1 core, or one per dataset in multi-agent mode
  std::string dtype = "fp32";
  std::string sampling = "seq";
  std::uint32_t stride = 4;
  std::uint32_t tau = 50;
  std::uint32_t episodes = 2000;
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 0.1;
  std::int64_t scale_factor = pimrl::kDefaultScaleFactor;
  std::string algo = "q";
  std::string mode = "single";
  std::uint64_t seed = 0;
  bool no_broadcast = false;
  bool descale_every_update = false;
  unsigned threads = 1;
  pimrl::CostModel costs;
  std::string out;
  std::string qtable_out;
};

void add_config_flags(CLI::App* cmd, TrainOptions& o) {
  cmd->add_option("--dataset", o.datasets, "dataset file (repeat once per agent in multi-agent mode)")->required();
  cmd->add_option("--env", o.env, "expected environment (frozen-lake, taxi); checked against the dataset");
  cmd->add_option("--dtype", o.dtype)->check(CLI::IsMember({"fp32", "int32"}))->capture_default_str();
  cmd->add_option("--sampling", o.sampling)->check(CLI::IsMember({"seq", "ran", "str"}))->capture_default_str();
  cmd->add_option("--stride", o.stride)->capture_default_str();
  cmd->add_option("--tau", o.tau, "episodes between Q-table synchronizations")->capture_default_str();
  cmd->add_option("--episodes", o.episodes)->capture_default_str();
  cmd->add_option("--alpha", o.alpha)->capture_default_str();
  cmd->add_option("--gamma", o.gamma)->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "SARSA exploration rate")->capture_default_str();
  cmd->add_option("--scale-factor", o.scale_factor)->capture_default_str();
  cmd->add_option("--algo", o.algo)->check(CLI::IsMember({"q", "sarsa"}))->capture_default_str();
  cmd->add_option("--mode", o.mode)->check(CLI::IsMember({"single", "multi-agent"}))->capture_default_str();
  cmd->add_option("--seed", o.seed)->capture_default_str();
  cmd->add_flag("--no-broadcast", o.no_broadcast, "keep local tables after each sync instead of the average");
  cmd->add_flag("--descale-every-update", o.descale_every_update, "int32: store descaled values after each update");
  cmd->add_option("--threads", o.threads, "host threads for core simulation")->capture_default_str();
  cmd->add_option("--cycles-int-add", o.costs.cycles_int_add)->capture_default_str();
  cmd->add_option("--cycles-int-mul32", o.costs.cycles_int_mul32)->capture_default_str();
  cmd->add_option("--cycles-fp-add", o.costs.cycles_fp_add)->capture_default_str();
  cmd->add_option("--cycles-fp-mul", o.costs.cycles_fp_mul)->capture_default_str();
  cmd->add_option("--core-freq", o.costs.core_freq_hz, "simulated core frequency in Hz")->capture_default_str();
  cmd->add_option("--xfer-latency", o.costs.xfer_latency_s, "per-transfer latency in seconds")->capture_default_str();
  cmd->add_option("--xfer-bandwidth", o.costs.xfer_bandwidth_Bps, "bytes per second")->capture_default_str();
  cmd->add_option("--out", o.out, "CSV report path")->required();
}

pimrl::PimConfig to_config(const TrainOptions& o) {
  pimrl::PimConfig c;
  c.mode = o.mode == "multi-agent" ? pimrl::Mode::MultiAgent : pimrl::Mode::SingleTable;
  c.n_cores = o.cores != 0 ? o.cores
                           : (c.mode == pimrl::Mode::MultiAgent ? static_cast<std::uint32_t>(o.datasets.size()) : 1);
  c.dtype = pimrl::parse_dtype(o.dtype);
  c.algo = pimrl::parse_algo(o.algo);
  c.strategy = {pimrl::parse_sampling(o.sampling), o.stride};
  c.hyper = {o.alpha, o.gamma, o.episodes, o.scale_factor, o.epsilon};
  c.tau = o.tau;
  c.seed = o.seed;
  c.costs = o.costs;
  c.broadcast_after_sync = !o.no_broadcast;
  c.descale_every_update = o.descale_every_update;
  c.threads = o.threads;
  return c;
}

std::vector<pimrl::Dataset> load_datasets(const TrainOptions& o) {
  std::vector<pimrl::Dataset> out;
  for (const std::string& path : o.datasets) {
    try {
      out.push_back(pimrl::read_dataset(path));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
    if (!o.env.empty() && out.back().spec.kind != pimrl::parse_env(o.env))
      throw pimrl::ConfigError(path + ": dataset environment is " + std::string(pimrl::env_name(out.back().spec.kind)) +
                               ", expected " + o.env);
  }
  return out;
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}

int cmd_collect(const std::string& env, std::uint64_t n, std::uint64_t seed, const std::string& out) {
  const pimrl::EnvSpec spec = pimrl::EnvSpec::of(pimrl::parse_env(env));
  const pimrl::Dataset d = pimrl::collect_dataset(spec, {pimrl::BehaviorKind::UniformRandom, seed}, n, seed);
  try {
    pimrl::write_dataset(d, out);
  } catch (const std::exception& e) {
    throw std::runtime_error(out + ": " + e.what());
  }
  std::printf("env=%s count=%" PRIu64 " seed=%" PRIu64 " checksum=%016" PRIx64 "\n",
              std::string(pimrl::env_name(spec.kind)).c_str(), static_cast<std::uint64_t>(d.size()), seed,
              pimrl::dataset_checksum(d));
  return 0;
}

int cmd_train(TrainOptions o) {
  const pimrl::PimConfig cfg = to_config(o);
  const auto datasets = load_datasets(o);
  const std::string env(pimrl::env_name(datasets.front().spec.kind));
  const std::string echo = pimrl::config_echo(cfg, env, joined(o.datasets));
  const std::string table_path = o.qtable_out.empty() ? o.out + ".qtable" : o.qtable_out;

  pimrl::SimReport report;
  if (cfg.mode == pimrl::Mode::MultiAgent) {
    auto result = pimrl::run_multi_agent(cfg, datasets);
    for (std::size_t k = 0; k < result.tables.size(); ++k)
      pimrl::write_qtable(result.tables[k], table_path + "." + std::to_string(k));
    report = std::move(result.report);
  } else {
    if (datasets.size() != 1) throw pimrl::ConfigError("single-table mode takes exactly one --dataset");
    report = pimrl::run_training(cfg, datasets.front());
    pimrl::write_qtable(report.qtable_final, table_path);
  }
  auto os = open_out(o.out);
  pimrl::write_train_csv(os, echo, cfg, report);
  std::printf("comm_rounds=%" PRIu64 " total_seconds=%.9g table=%s\n", report.comm_rounds, report.seconds.total(),
              table_path.c_str());
  return 0;
}

int cmd_eval(const std::string& qtable_path, const std::string& env, std::uint32_t episodes, std::uint32_t max_steps,
             std::uint64_t seed, const std::string& out) {
  const pimrl::EnvSpec spec = pimrl::EnvSpec::of(pimrl::parse_env(env));
  pimrl::FloatQTable q;
  try {
    q = pimrl::read_qtable(qtable_path);
  } catch (const std::exception& e) {
    throw std::runtime_error(qtable_path + ": " + e.what());
  }
  if (q.n_states() != spec.n_states || q.n_actions() != spec.n_actions)
    throw pimrl::ConfigError(qtable_path + ": table shape does not match " + env);
  const std::uint32_t steps = max_steps != 0 ? max_steps : pimrl::default_max_steps(spec.kind);
  const auto summary = pimrl::summarize(pimrl::rollout_returns(pimrl::greedy_policy(q), spec, episodes, steps, seed));
  std::printf("mean_reward=%.6f stddev=%.6f episodes=%u\n", summary.mean, summary.stddev, episodes);
  if (!out.empty()) {
    auto os = open_out(out);
    os.precision(17);
    os << "# config: qtable=" << qtable_path << " env=" << env << " episodes=" << episodes << " max_steps=" << steps
       << " seed=" << seed << '\n'
       << "env,episodes,max_steps,seed,mean_reward,stddev\n"
       << env << ',' << episodes << ',' << steps << ',' << seed << ',' << summary.mean << ',' << summary.stddev << '\n';
  }
  return 0;
}

int cmd_sweep(TrainOptions o, const std::vector<std::uint32_t>& cores) {
  pimrl::PimConfig cfg = to_config(o);
  const auto datasets = load_datasets(o);
  if (datasets.size() != 1) throw pimrl::ConfigError("sweep takes exactly one --dataset");
  const std::string env(pimrl::env_name(datasets.front().spec.kind));
  const auto rows = pimrl::run_sweep(cfg, datasets.front(), cores);
  std::string list;
  for (auto c : cores) list += (list.empty() ? "" : ",") + std::to_string(c);
  auto os = open_out(o.out);
  pimrl::write_sweep_csv(os, pimrl::config_echo(cfg, env, joined(o.datasets)) + " cores_list=" + list, cfg, rows);
  for (const auto& r : rows)
    std::printf("cores=%u total=%.9g kernel_speedup=%.6g total_speedup=%.6g\n", r.cores, r.seconds.total(),
                r.kernel_speedup, r.total_speedup);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated processing-in-memory training for offline tabular RL"};
  app.require_subcommand(1);

  std::string env = "frozen-lake";
  std::uint64_t n_transitions = 1'000'000;
  std::uint64_t seed = 0;
  std::string out;
  auto* collect = app.add_subcommand("collect", "collect an offline dataset with a uniform random policy");
  collect->add_option("--env", env)->check(CLI::IsMember({"frozen-lake", "taxi"}))->capture_default_str();
  collect->add_option("--n,--transitions", n_transitions)->capture_default_str();
  collect->add_option("--seed", seed)->capture_default_str();
  collect->add_option("--out", out)->required();

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "train on the simulated PIM system");
  add_config_flags(train, train_opts);
  train->add_option("--cores", train_opts.cores, "simulated cores (default 1, or one per dataset for multi-agent)");
  train->add_option("--qtable", train_opts.qtable_out, "Q-table output path (default <out>.qtable)");

  std::string qtable_path;
  std::string eval_env = "frozen-lake";
  std::uint32_t eval_episodes = 1000;
  std::uint32_t max_steps = 0;
  std::uint64_t eval_seed = 0;
  std::string eval_out;
  auto* eval = app.add_subcommand("eval", "evaluate the greedy policy of a Q-table");
  eval->add_option("--qtable", qtable_path)->required();
  eval->add_option("--env", eval_env)->check(CLI::IsMember({"frozen-lake", "taxi"}))->capture_default_str();
  eval->add_option("--episodes", eval_episodes)->capture_default_str();
  eval->add_option("--max-steps", max_steps, "episode truncation (default 100 frozen-lake, 200 taxi)");
  eval->add_option("--seed", eval_seed)->capture_default_str();
  eval->add_option("--out", eval_out, "optional CSV output");

  TrainOptions sweep_opts;
  std::vector<std::uint32_t> sweep_cores;
  auto* sweep = app.add_subcommand("sweep", "strong-scaling sweep over core counts");
  add_config_flags(sweep, sweep_opts);
  sweep->add_option("--cores", sweep_cores, "comma-separated core counts")->delimiter(',')->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*collect) return cmd_collect(env, n_transitions, seed, out);
    if (*train) return cmd_train(train_opts);
    if (*eval) return cmd_eval(qtable_path, eval_env, eval_episodes, max_steps, eval_seed, eval_out);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_cores);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
