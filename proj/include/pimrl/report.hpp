#pragma once

// CSV reports for training runs and core-count sweeps. Every report starts
// with a "# config:" comment line holding the full effective configuration.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <ios>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pimrl/dataset.hpp"
#include "pimrl/pim_sim.hpp"

namespace pimrl {

namespace detail {

// Shortest text that reads back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace detail

inline std::string config_echo(const PimConfig& c, const std::string& env, const std::string& dataset_paths) {
  using detail::shortest;
  std::ostringstream os;
  os << "# config: env=" << env << " dataset=" << dataset_paths << " cores=" << c.n_cores
     << " dtype=" << dtype_name(c.dtype) << " algo=" << algo_name(c.algo)
     << " sampling=" << sampling_name(c.strategy.kind) << " stride=" << c.strategy.stride << " tau=" << c.tau
     << " episodes=" << c.hyper.episodes << " alpha=" << shortest(c.hyper.alpha)
     << " gamma=" << shortest(c.hyper.gamma) << " epsilon=" << shortest(c.hyper.epsilon)
     << " scale_factor=" << c.hyper.scale_factor << " mode=" << mode_name(c.mode) << " seed=" << c.seed
     << " broadcast_after_sync=" << c.broadcast_after_sync << " descale_every_update=" << c.descale_every_update
     << " cycles_int_add=" << c.costs.cycles_int_add << " cycles_int_mul32=" << c.costs.cycles_int_mul32
     << " cycles_fp_add=" << c.costs.cycles_fp_add << " cycles_fp_mul=" << c.costs.cycles_fp_mul
     << " core_freq_hz=" << shortest(c.costs.core_freq_hz) << " xfer_latency_s=" << shortest(c.costs.xfer_latency_s)
     << " xfer_bandwidth_Bps=" << shortest(c.costs.xfer_bandwidth_Bps);
  return os.str();
}

inline void write_train_csv(std::ostream& os, const std::string& echo, const PimConfig& c, const SimReport& r) {
  os.precision(std::numeric_limits<double>::max_digits10);
  os << echo << '\n' << "phase,seconds,bytes,comm_rounds,cores,dtype,algo,sampling,episodes,tau,seed\n";
  const auto row = [&](const char* phase, double seconds, std::uint64_t bytes) {
    os << phase << ',' << seconds << ',' << bytes << ',' << r.comm_rounds << ',' << c.n_cores << ','
       << dtype_name(c.dtype) << ',' << algo_name(c.algo) << ',' << sampling_name(c.strategy.kind) << ','
       << c.hyper.episodes << ',' << c.tau << ',' << c.seed << '\n';
  };
  row("cpu_to_pim", r.seconds.cpu_to_pim, r.bytes.cpu_to_pim);
  row("kernel", r.seconds.kernel, 0);
  row("inter_core", r.seconds.inter_core, r.bytes.inter_core);
  row("pim_to_cpu", r.seconds.pim_to_cpu, r.bytes.pim_to_cpu);
}

struct SweepRow {
  std::uint32_t cores = 0;
  PhaseSeconds seconds;
  std::uint64_t comm_rounds = 0;
  double kernel_speedup = 1.0;
  double total_speedup = 1.0;
};

// Strong scaling: the same dataset and configuration trained at each core
// count; speedups are relative to the smallest count.
inline std::vector<SweepRow> run_sweep(const PimConfig& base, const Dataset& dataset,
                                       const std::vector<std::uint32_t>& core_counts) {
  if (core_counts.empty()) throw ConfigError("sweep: no core counts given");
  for (std::uint32_t n : core_counts)
    if (n == 0 || n > dataset.size())
      throw ConfigError("sweep: core count " + std::to_string(n) + " outside [1, dataset length]");

  std::vector<SweepRow> rows;
  for (std::uint32_t n : core_counts) {
    PimConfig cfg = base;
    cfg.n_cores = n;
    const SimReport r = run_training(cfg, dataset);
    rows.push_back({n, r.seconds, r.comm_rounds});
  }
  const auto smallest = std::min_element(rows.begin(), rows.end(),
                                         [](const SweepRow& a, const SweepRow& b) { return a.cores < b.cores; });
  const PhaseSeconds ref = smallest->seconds;
  for (SweepRow& row : rows) {
    row.kernel_speedup = ref.kernel / row.seconds.kernel;
    row.total_speedup = ref.total() / row.seconds.total();
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::string& echo, const PimConfig& c,
                            const std::vector<SweepRow>& rows) {
  os.precision(std::numeric_limits<double>::max_digits10);
  os << echo << '\n'
     << "cores,cpu_to_pim,kernel,inter_core,pim_to_cpu,total,comm_rounds,kernel_speedup,total_speedup,"
        "dtype,algo,sampling,episodes,tau,seed\n";
  for (const SweepRow& r : rows) {
    os << r.cores << ',' << r.seconds.cpu_to_pim << ',' << r.seconds.kernel << ',' << r.seconds.inter_core << ','
       << r.seconds.pim_to_cpu << ',' << r.seconds.total() << ',' << r.comm_rounds << ',' << r.kernel_speedup << ','
       << r.total_speedup << ',' << dtype_name(c.dtype) << ',' << algo_name(c.algo) << ','
       << sampling_name(c.strategy.kind) << ',' << c.hyper.episodes << ',' << c.tau << ',' << c.seed << '\n';
  }
}

}  // namespace pimrl
