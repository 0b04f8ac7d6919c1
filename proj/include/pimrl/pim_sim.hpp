#pragma once

// Simulated PIM training run:
//   1. the host partitions the dataset and ships one chunk per core,
//   2. every core trains its local Q-table on its own chunk,
//   3. every tau episodes the tables go to the host, are averaged and
//      (by default) broadcast back,
//   4. the last average is the result.
// The functional result never depends on the CostModel; the model only
// turns tallied operations and moved bytes into simulated seconds.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pimrl/cost_model.hpp"
#include "pimrl/dataset.hpp"
#include "pimrl/error.hpp"
#include "pimrl/kernels.hpp"
#include "pimrl/lcg.hpp"
#include "pimrl/qtable.hpp"

namespace pimrl {

enum class Algo : std::uint8_t { QLearning, Sarsa };
enum class Mode : std::uint8_t { SingleTable, MultiAgent };

inline std::string_view algo_name(Algo a) noexcept { return a == Algo::Sarsa ? "sarsa" : "q"; }
inline std::string_view mode_name(Mode m) noexcept { return m == Mode::MultiAgent ? "multi-agent" : "single"; }

inline Algo parse_algo(std::string_view s) {
  if (s == "q") return Algo::QLearning;
  if (s == "sarsa") return Algo::Sarsa;
  throw DomainError("unknown algorithm '" + std::string(s) + "'");
}

inline DType parse_dtype(std::string_view s) {
  if (s == "fp32") return DType::FP32;
  if (s == "int32") return DType::INT32;
  throw DomainError("unknown dtype '" + std::string(s) + "'");
}

struct PimConfig {
  std::uint32_t n_cores = 1;
  DType dtype = DType::FP32;
  Algo algo = Algo::QLearning;
  SamplingStrategy strategy;
  Hyperparams hyper;
  std::uint32_t tau = 50;
  Mode mode = Mode::SingleTable;
  std::uint64_t seed = 0;
  CostModel costs;
  // Push the averaged table back to every core at each sync.
  bool broadcast_after_sync = true;
  // INT32 only: keep descaled reals in the table and rescale per update.
  bool descale_every_update = false;
  // Host threads used to simulate cores; results do not depend on it.
  unsigned threads = 1;

  void validate() const {
    if (n_cores == 0) throw ConfigError("n_cores must be >= 1");
    if (tau == 0) throw ConfigError("tau must be >= 1");
    hyper.validate();
    strategy.validate();
    costs.validate();
    if (hyper.episodes % tau != 0)
      throw ConfigError("episodes (" + std::to_string(hyper.episodes) + ") must be divisible by tau (" +
                        std::to_string(tau) + ")");
  }
};

struct PhaseSeconds {
  double cpu_to_pim = 0.0;
  double kernel = 0.0;
  double inter_core = 0.0;
  double pim_to_cpu = 0.0;

  double total() const noexcept { return cpu_to_pim + kernel + inter_core + pim_to_cpu; }
  friend bool operator==(const PhaseSeconds&, const PhaseSeconds&) = default;
};

struct PhaseBytes {
  std::uint64_t cpu_to_pim = 0;
  std::uint64_t inter_core = 0;
  std::uint64_t pim_to_cpu = 0;
  friend bool operator==(const PhaseBytes&, const PhaseBytes&) = default;
};

struct SimReport {
  FloatQTable qtable_final;  // empty in multi-agent mode
  std::optional<FixedQTable> qtable_final_scaled;  // INT32 runs: final average in scaled form
  PhaseSeconds seconds;
  PhaseBytes bytes;
  std::uint64_t comm_rounds = 0;
  std::uint64_t kernel_cycles = 0;
  std::vector<OpCounts> per_core_op_counts;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Element-wise mean, accumulated in double from left to right.
inline std::vector<double> aggregate_mean(std::span<const FloatQTable> tables) {
  if (tables.empty()) throw DomainError("aggregate: no tables");
  for (const auto& t : tables)
    if (!t.same_shape(tables[0])) throw DomainError("aggregate: table dimensions differ");
  std::vector<double> mean(tables[0].values().size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    double sum = 0.0;
    for (const auto& t : tables) sum += static_cast<double>(t.values()[i]);
    mean[i] = sum / static_cast<double>(tables.size());
  }
  return mean;
}

inline FloatQTable aggregate(std::span<const FloatQTable> tables) {
  const std::vector<double> mean = aggregate_mean(tables);
  FloatQTable out(tables[0].n_states(), tables[0].n_actions());
  auto dst = out.values();
  for (std::size_t i = 0; i < mean.size(); ++i) dst[i] = static_cast<float>(mean[i]);
  return out;
}

namespace detail {

// Runs fn(i) for i in [0, n) on up to `threads` host threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const auto [begin, end] = chunk_bounds(n, workers, w);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

enum class UpdateKind { Fp32, Int32, Int32Descaled };

template <UpdateKind K>
using TableFor = std::conditional_t<K == UpdateKind::Int32, FixedQTable, FloatQTable>;

template <UpdateKind K>
struct Core {
  std::uint32_t id = 0;
  std::span<const Transition> chunk;
  std::vector<std::int32_t> rewards_scaled;  // INT32 variants, ingested once
  TableFor<K> q;
  RngState rng;
  OpCounts ops;
  std::vector<std::uint32_t> order;
};

template <UpdateKind K>
Core<K> make_core(std::uint32_t id, std::span<const Transition> chunk, const EnvSpec& spec, const PimConfig& cfg,
                  RngState rng) {
  Core<K> core;
  core.id = id;
  core.chunk = chunk;
  core.q = TableFor<K>(spec.n_states, spec.n_actions);
  core.rng = rng;
  if constexpr (K != UpdateKind::Fp32) {
    core.rewards_scaled.reserve(chunk.size());
    for (const Transition& t : chunk) core.rewards_scaled.push_back(to_fixed(t.reward, cfg.hyper.scale_factor));
  }
  return core;
}

template <UpdateKind K>
void run_episodes(Core<K>& core, std::uint32_t n_episodes, const PimConfig& cfg) {
  const auto len = static_cast<std::uint32_t>(core.chunk.size());
  const std::uint32_t n_actions = core.q.n_actions();
  const Fp32Coeffs fc = Fp32Coeffs::from(cfg.hyper);
  const FixedCoeffs ic = FixedCoeffs::from(cfg.hyper);
  const EpsilonGreedy eps = EpsilonGreedy::from(cfg.hyper.epsilon);
  constexpr DType dtype = K == UpdateKind::Fp32 ? DType::FP32 : DType::INT32;
  constexpr bool descaled = K == UpdateKind::Int32Descaled;

  for (std::uint32_t e = 0; e < n_episodes; ++e) {
    if (cfg.strategy.kind == Sampling::RAN || core.order.size() != len)
      sample_order_into(core.order, cfg.strategy, len, core.rng);
    core.ops += ops::sampling(cfg.strategy, len);

    if (cfg.algo == Algo::QLearning) {
      for (std::uint32_t idx : core.order) {
        const Transition& t = core.chunk[idx];
        if constexpr (K == UpdateKind::Fp32) {
          q_update_fp32(core.q, t, fc);
        } else if constexpr (K == UpdateKind::Int32) {
          q_update_int32(core.q, t, core.rewards_scaled[idx], ic);
        } else {
          q_update_int32_descaled(core.q, t, core.rewards_scaled[idx], ic);
        }
      }
      core.ops += (descaled ? ops::q_update_descaled(n_actions) : ops::q_update(dtype, n_actions)) * len;
    } else {
      for (std::uint32_t idx : core.order) {
        const Transition& t = core.chunk[idx];
        NextAction next;
        if constexpr (K == UpdateKind::Fp32) {
          next = sarsa_update(core.q, t, fc, eps, core.rng);
        } else if constexpr (K == UpdateKind::Int32) {
          next = sarsa_update(core.q, t, core.rewards_scaled[idx], ic, eps, core.rng);
        } else {
          next = sarsa_update_descaled(core.q, t, core.rewards_scaled[idx], ic, eps, core.rng);
        }
        core.ops += ops::sarsa_update(dtype, n_actions, next, descaled);
      }
    }
  }
}

template <UpdateKind K>
double host_value(const Core<K>& core, std::size_t i, std::int64_t scale) noexcept {
  if constexpr (K == UpdateKind::Int32) return from_fixed(core.q.values()[i], scale);
  else return static_cast<double>(core.q.values()[i]);
}

// Host-side synchronization: descale, average, optionally broadcast.
template <UpdateKind K>
std::vector<double> average_cores(const std::vector<Core<K>>& cores, std::int64_t scale) {
  const std::size_t n = cores.front().q.values().size();
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& core : cores) sum += host_value(core, i, scale);
    mean[i] = sum / static_cast<double>(cores.size());
  }
  return mean;
}

template <UpdateKind K>
void broadcast(std::vector<Core<K>>& cores, const std::vector<double>& mean, std::int64_t scale) {
  for (auto& core : cores) {
    auto dst = core.q.values();
    for (std::size_t i = 0; i < mean.size(); ++i) {
      if constexpr (K == UpdateKind::Int32) dst[i] = to_fixed(mean[i], scale);
      else dst[i] = static_cast<float>(mean[i]);
    }
  }
}

inline std::uint64_t table_bytes(const EnvSpec& spec) noexcept {
  return std::uint64_t{spec.n_states} * spec.n_actions * 4;
}

template <UpdateKind K>
SimReport train_single_table(const PimConfig& cfg, const Dataset& dataset) {
  const auto chunks = partition(dataset, cfg.n_cores);
  std::vector<Core<K>> cores;
  cores.reserve(chunks.size());
  for (const Chunk& c : chunks)
    cores.push_back(make_core<K>(c.core_id, c.transitions, dataset.spec, cfg, derive_stream(cfg.seed, c.core_id)));

  const CostModel& cm = cfg.costs;
  const std::int64_t scale = cfg.hyper.scale_factor;
  const std::uint64_t rounds = cfg.hyper.episodes / cfg.tau;
  const std::uint64_t all_tables = table_bytes(dataset.spec) * cfg.n_cores;

  SimReport report;
  report.bytes.cpu_to_pim = dataset.size() * kTransitionBytes;
  report.seconds.cpu_to_pim = transfer_seconds(report.bytes.cpu_to_pim, cm);

  std::vector<double> mean;
  std::vector<OpCounts> before(cores.size());
  for (std::uint64_t r = 0; r < rounds; ++r) {
    for (std::size_t k = 0; k < cores.size(); ++k) before[k] = cores[k].ops;
    parallel_for(cores.size(), cfg.threads, [&](std::size_t k) { run_episodes(cores[k], cfg.tau, cfg); });
    // Cores meet at the sync barrier: the slowest one sets the phase time.
    std::uint64_t phase = 0;
    for (std::size_t k = 0; k < cores.size(); ++k)
      phase = std::max(phase, kernel_cycles(cores[k].ops - before[k], cm));
    report.kernel_cycles += phase;

    mean = average_cores(cores, scale);
    if (cfg.broadcast_after_sync) broadcast(cores, mean, scale);
  }

  report.comm_rounds = rounds;
  report.bytes.inter_core = 2 * rounds * all_tables;
  report.seconds.inter_core = static_cast<double>(2 * rounds) * transfer_seconds(all_tables, cm);
  report.bytes.pim_to_cpu = all_tables;
  report.seconds.pim_to_cpu = transfer_seconds(all_tables, cm);
  report.seconds.kernel = cycles_to_seconds(report.kernel_cycles, cm);

  report.qtable_final = FloatQTable(dataset.spec.n_states, dataset.spec.n_actions);
  auto dst = report.qtable_final.values();
  for (std::size_t i = 0; i < mean.size(); ++i) dst[i] = static_cast<float>(mean[i]);
  if constexpr (K == UpdateKind::Int32) {
    FixedQTable scaled(dataset.spec.n_states, dataset.spec.n_actions);
    for (std::size_t i = 0; i < mean.size(); ++i) scaled.values()[i] = to_fixed(mean[i], scale);
    report.qtable_final_scaled = std::move(scaled);
  }
  for (const auto& core : cores) report.per_core_op_counts.push_back(core.ops);
  return report;
}

template <UpdateKind K>
std::vector<FloatQTable> train_agents(const PimConfig& cfg, std::span<const Dataset> datasets, SimReport& report) {
  std::vector<Core<K>> cores;
  cores.reserve(datasets.size());
  for (std::uint32_t k = 0; k < datasets.size(); ++k)
    // Agent k draws exactly like a single-core run seeded with seed + k.
    cores.push_back(make_core<K>(k, datasets[k].transitions, datasets[k].spec, cfg, derive_stream(cfg.seed + k, 0)));

  parallel_for(cores.size(), cfg.threads, [&](std::size_t k) { run_episodes(cores[k], cfg.hyper.episodes, cfg); });

  std::vector<FloatQTable> tables;
  tables.reserve(cores.size());
  for (const auto& core : cores) {
    report.kernel_cycles = std::max(report.kernel_cycles, kernel_cycles(core.ops, cfg.costs));
    report.per_core_op_counts.push_back(core.ops);
    report.bytes.pim_to_cpu += table_bytes(datasets[core.id].spec);
    if constexpr (K == UpdateKind::Int32) tables.push_back(descale(core.q, cfg.hyper.scale_factor));
    else tables.push_back(core.q);
  }
  return tables;
}

template <class Fn>
decltype(auto) dispatch_update_kind(const PimConfig& cfg, Fn&& fn) {
  if (cfg.dtype == DType::FP32) return fn.template operator()<UpdateKind::Fp32>();
  if (cfg.descale_every_update) return fn.template operator()<UpdateKind::Int32Descaled>();
  return fn.template operator()<UpdateKind::Int32>();
}

}  // namespace detail

inline SimReport run_training(const PimConfig& cfg, const Dataset& dataset) {
  cfg.validate();
  if (cfg.mode != Mode::SingleTable) throw ConfigError("run_training expects single-table mode");
  dataset.validate();
  return detail::dispatch_update_kind(
      cfg, [&]<detail::UpdateKind K>() { return detail::train_single_table<K>(cfg, dataset); });
}

struct MultiAgentResult {
  std::vector<FloatQTable> tables;
  SimReport report;
};

// One independent learner per core, each on its own dataset; no
// inter-core phase.
inline MultiAgentResult run_multi_agent(const PimConfig& cfg, std::span<const Dataset> datasets) {
  cfg.validate();
  if (cfg.mode != Mode::MultiAgent) throw ConfigError("run_multi_agent expects multi-agent mode");
  if (datasets.size() != cfg.n_cores)
    throw ConfigError("multi-agent: " + std::to_string(datasets.size()) + " datasets for " +
                      std::to_string(cfg.n_cores) + " cores");
  MultiAgentResult out;
  for (const Dataset& d : datasets) {
    d.validate();
    out.report.bytes.cpu_to_pim += d.size() * kTransitionBytes;
  }
  out.tables = detail::dispatch_update_kind(
      cfg, [&]<detail::UpdateKind K>() { return detail::train_agents<K>(cfg, datasets, out.report); });
  const CostModel& cm = cfg.costs;
  out.report.seconds.cpu_to_pim = transfer_seconds(out.report.bytes.cpu_to_pim, cm);
  out.report.seconds.kernel = cycles_to_seconds(out.report.kernel_cycles, cm);
  out.report.seconds.pim_to_cpu = transfer_seconds(out.report.bytes.pim_to_cpu, cm);
  return out;
}

}  // namespace pimrl
