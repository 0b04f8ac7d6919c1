// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Usage: acceptance <work-dir>

#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pimrl/pimrl.hpp"
#include "reference_trainer.hpp"

using namespace pimrl;
namespace fs = std::filesystem;

namespace {

fs::path g_work;
int g_failures = 0;

void report(const char* id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void check(const char* id, const char* title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail << " (" << std::fixed;
  detail.precision(1);
  detail << secs << " s)";
  report(id, title, ok, detail.str());
}

std::string path(const std::string& name) { return (g_work / name).string(); }

int cli(const std::string& args) {
  const std::string cmd = std::string(PIMRL_CLI_PATH) + " " + args + " > " + path("cli_stdout.txt") + " 2> " +
                          path("cli_stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

unsigned host_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

PimConfig frozen_lake_config() {
  PimConfig c;
  c.n_cores = 16;
  c.hyper.alpha = 0.1;
  c.hyper.gamma = 0.95;
  c.hyper.episodes = 2000;
  c.tau = 50;
  c.seed = 1;
  c.threads = host_threads();
  return c;
}

double eval_mean(const FloatQTable& q) {
  return evaluate(greedy_policy(q), EnvSpec::frozen_lake(), 1000, default_max_steps(EnvKind::FrozenLake), 1);
}

const Dataset& quality_dataset() {
  static const Dataset d = collect_dataset(EnvSpec::frozen_lake(), {BehaviorKind::UniformRandom, 1}, 200'000, 1);
  return d;
}

double g_q_mean = std::nan("");

bool quality_q(std::ostringstream& out) {
  const SimReport r = run_training(frozen_lake_config(), quality_dataset());
  g_q_mean = eval_mean(r.qtable_final);
  out << "mean reward " << g_q_mean << " (required [0.60, 0.80])";
  return g_q_mean >= 0.60 && g_q_mean <= 0.80;
}

bool quality_sarsa(std::ostringstream& out) {
  PimConfig c = frozen_lake_config();
  c.algo = Algo::Sarsa;
  c.hyper.epsilon = 0.1;
  const double mean = eval_mean(run_training(c, quality_dataset()).qtable_final);
  const double gap = std::fabs(mean - g_q_mean);
  out << "mean reward " << mean << " (required [0.58, 0.80]), |sarsa - q| = " << gap << " (required <= 0.08)";
  return mean >= 0.58 && mean <= 0.80 && gap <= 0.08;
}

bool oracle_equivalence(std::ostringstream& out) {
  const Dataset d = collect_dataset(EnvSpec::frozen_lake(), {BehaviorKind::UniformRandom, 5}, 1000, 5);
  int matched = 0;
  int total = 0;
  for (Algo algo : {Algo::QLearning, Algo::Sarsa}) {
    for (DType dtype : {DType::FP32, DType::INT32}) {
      for (Sampling s : {Sampling::SEQ, Sampling::RAN, Sampling::STR}) {
        PimConfig c;
        c.algo = algo;
        c.dtype = dtype;
        c.strategy = {s, 4};
        c.hyper.episodes = 10;
        c.tau = 10;
        c.seed = 17;
        const SimReport r = run_training(c, d);

        oracle::ReferenceRun run;
        run.sarsa = algo == Algo::Sarsa;
        run.int32 = dtype == DType::INT32;
        run.sampling = s == Sampling::SEQ ? 0 : s == Sampling::RAN ? 1 : 2;
        run.episodes = 10;
        run.seed = 17;
        const oracle::ReferenceResult ref = oracle::reference_train(d, run);

        bool same = false;
        if (dtype == DType::FP32) {
          const auto v = r.qtable_final.values();
          same = v.size() == ref.fp.size() && std::equal(v.begin(), v.end(), ref.fp.begin(), [](float a, float b) {
                   return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
                 });
        } else {
          const auto v = r.qtable_final_scaled->values();
          same = v.size() == ref.fixed.size() && std::equal(v.begin(), v.end(), ref.fixed.begin());
        }
        ++total;
        if (same) ++matched;
        else out << "mismatch " << algo_name(algo) << "/" << dtype_name(dtype) << "/" << sampling_name(s) << "; ";
      }
    }
  }
  out << matched << "/" << total << " combinations exact";
  return matched == total;
}

bool fixed_point_fidelity(std::ostringstream& out) {
  const Dataset d = collect_dataset(EnvSpec::frozen_lake(), {BehaviorKind::UniformRandom, 3}, 10'000, 3);
  PimConfig c;
  c.hyper.episodes = 200;
  c.tau = 200;
  c.seed = 3;
  const FloatQTable fp = run_training(c, d).qtable_final;
  c.dtype = DType::INT32;
  const FloatQTable in = run_training(c, d).qtable_final;

  double max_diff = 0;
  for (std::size_t i = 0; i < fp.values().size(); ++i)
    max_diff = std::max(max_diff, std::fabs(double{fp.values()[i]} - double{in.values()[i]}));
  std::vector<bool> visited(16, false);
  for (const Transition& t : d.transitions) visited[t.state] = true;
  int n_visited = 0;
  int agree = 0;
  for (std::uint32_t s = 0; s < 16; ++s) {
    if (!visited[s]) continue;
    ++n_visited;
    if (greedy_action(fp.row(s)) == greedy_action(in.row(s))) ++agree;
  }
  const double agreement = static_cast<double>(agree) / n_visited;
  out << "max |int32 - fp32| = " << max_diff << " (required <= 0.02), argmax agreement " << agree << "/"
      << n_visited << " (required >= 95%)";
  return max_diff <= 0.02 && agreement >= 0.95;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool strong_scaling(std::ostringstream& out) {
  if (cli("collect --env frozen-lake --n 128000 --seed 2 --out " + path("scaling.bin")) != 0)
    throw std::runtime_error("collect failed");
  if (cli("sweep --dataset " + path("scaling.bin") + " --cores 8,16,32,64,128 --threads " +
          std::to_string(host_threads()) + " --out " + path("scaling.csv")) != 0)
    throw std::runtime_error("sweep failed: " + slurp(path("cli_stderr.txt")));
  const auto rows = read_csv_rows(path("scaling.csv"));
  // header + 5 rows; columns: cores,cpu_to_pim,kernel,inter_core,pim_to_cpu,total,...
  if (rows.size() != 6) throw std::runtime_error("unexpected sweep CSV shape");
  bool exact = true;
  out << "kernel ratios";
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i - 1][2]) / std::stod(rows[i][2]);
    out << " " << ratio;
    exact = exact && ratio == 2.0;
  }
  const double total_speedup = std::stod(rows[1][5]) / std::stod(rows[5][5]);
  out << " (required exactly 2); total speedup at 16x cores " << total_speedup << " (required (8, 16])";
  return exact && total_speedup > 8.0 && total_speedup <= 16.0;
}

bool cost_asymmetry(std::ostringstream& out) {
  const Dataset d = collect_dataset(EnvSpec::frozen_lake(), {BehaviorKind::UniformRandom, 8}, 10'000, 8);
  std::mt19937_64 gen(2024);
  int violations = 0;
  int runs = 0;
  auto kernel = [&](PimConfig c, DType dtype) {
    c.dtype = dtype;
    return run_training(c, d).seconds.kernel;
  };
  for (int i = 0; i < 40; ++i) {
    // Random model satisfying the ordering: int_add < int_mul32 < fp_mul, int_add < fp_add.
    CostModel m;
    m.cycles_int_add = std::uniform_int_distribution<std::uint64_t>(1, 50)(gen);
    m.cycles_int_mul32 = m.cycles_int_add + std::uniform_int_distribution<std::uint64_t>(1, 200)(gen);
    m.cycles_fp_mul = m.cycles_int_mul32 + std::uniform_int_distribution<std::uint64_t>(1, 500)(gen);
    m.cycles_fp_add = m.cycles_int_add + std::uniform_int_distribution<std::uint64_t>(1, 500)(gen);
    m.core_freq_hz = std::uniform_real_distribution<double>(1e8, 2e9)(gen);
    PimConfig c;
    c.costs = m;
    c.n_cores = 1U << (i % 5);
    c.algo = i % 2 == 0 ? Algo::QLearning : Algo::Sarsa;
    c.strategy = {static_cast<Sampling>(i % 3), 4};
    c.hyper.episodes = 20;
    c.tau = 10;
    c.seed = static_cast<std::uint64_t>(i);
    ++runs;
    if (!(kernel(c, DType::FP32) > kernel(c, DType::INT32))) ++violations;
  }
  PimConfig c = frozen_lake_config();
  c.hyper.episodes = 200;
  const double ratio = kernel(c, DType::FP32) / kernel(c, DType::INT32);
  out << violations << "/" << runs << " random cost models with fp32 <= int32; default ratio " << ratio
      << " (required [2, 20])";
  return violations == 0 && ratio >= 2.0 && ratio <= 20.0;
}

bool sync_accounting(std::ostringstream& out) {
  const Dataset d = collect_dataset(EnvSpec::frozen_lake(), {BehaviorKind::UniformRandom, 4}, 4000, 4);
  PimConfig c = frozen_lake_config();
  const SimReport a = run_training(c, d);
  c.tau = 25;
  const SimReport b = run_training(c, d);
  out << "comm_rounds " << a.comm_rounds << " (required 40); inter_core tau=50 " << a.seconds.inter_core
      << " s, tau=25 " << b.seconds.inter_core << " s";
  return a.comm_rounds == 40 && b.seconds.inter_core == 2 * a.seconds.inter_core;
}

bool multi_agent(std::ostringstream& out) {
  std::vector<Dataset> datasets;
  for (std::uint64_t k = 0; k < 8; ++k)
    datasets.push_back(
        collect_dataset(EnvSpec::frozen_lake(), {BehaviorKind::UniformRandom, 40 + k}, 10'000, 40 + k));
  PimConfig c;
  c.mode = Mode::MultiAgent;
  c.n_cores = 8;
  c.hyper.episodes = 200;
  c.tau = 50;
  c.seed = 9;
  c.threads = host_threads();
  const MultiAgentResult ma = run_multi_agent(c, datasets);
  int equal = 0;
  for (std::uint32_t k = 0; k < 8; ++k) {
    PimConfig single = c;
    single.mode = Mode::SingleTable;
    single.n_cores = 1;
    single.seed = c.seed + k;
    const FloatQTable ref = run_training(single, datasets[k]).qtable_final;
    const auto a = ma.tables[k].values();
    const auto b = ref.values();
    if (std::equal(a.begin(), a.end(), b.begin(), b.end(), [](float x, float y) {
          return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y);
        }))
      ++equal;
  }
  out << equal << "/8 agent tables bit-identical; inter_core " << ma.report.seconds.inter_core << " s";
  return equal == 8 && ma.report.seconds.inter_core == 0.0;
}

bool determinism(std::ostringstream& out) {
  const std::vector<std::string> commands = {
      "collect --env taxi --n 5000 --seed 3 --out {}taxi.bin",
      "collect --env frozen-lake --n 5000 --seed 3 --out {}fl.bin",
      "train --dataset {}fl.bin --cores 4 --episodes 100 --sampling ran --out {}q.csv",
      "train --dataset {}taxi.bin --cores 8 --episodes 100 --dtype int32 --algo sarsa --sampling str --threads 4 "
      "--out {}s.csv",
      "train --mode multi-agent --dataset {}fl.bin --dataset {}taxi.bin --episodes 100 --out {}m.csv",
      "sweep --dataset {}fl.bin --cores 1,2,4 --episodes 100 --out {}sweep.csv",
      "eval --env frozen-lake --qtable {}q.csv.qtable --episodes 200 --out {}eval.csv",
  };
  const std::vector<std::string> artifacts = {"taxi.bin", "fl.bin",        "q.csv",         "q.csv.qtable",
                                              "s.csv",    "s.csv.qtable",  "m.csv",         "m.csv.qtable.0",
                                              "m.csv.qtable.1", "sweep.csv", "eval.csv"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    // Same paths both times: the reports echo them.
    const std::string prefix = path("det_");
    if (pass == 1)
      for (const auto& a : artifacts) fs::remove(prefix + a);
    for (std::string cmd : commands) {
      for (std::size_t pos; (pos = cmd.find("{}")) != std::string::npos;) cmd.replace(pos, 2, prefix);
      if (cli(cmd) != 0) throw std::runtime_error("command failed: " + cmd);
    }
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
      const std::string bytes = slurp(prefix + artifacts[i]);
      if (bytes.empty()) throw std::runtime_error("missing artifact " + artifacts[i]);
      if (pass == 0) first.push_back(bytes);
      else if (bytes != first[i]) {
        out << artifacts[i] << " differs between runs";
        return false;
      }
    }
  }
  out << commands.size() << " commands, " << artifacts.size() << " artifacts byte-identical";
  return true;
}

bool format_integrity(std::ostringstream& out) {
  if (cli("collect --env taxi --n 3000 --seed 6 --out " + path("fmt.bin")) != 0)
    throw std::runtime_error("collect failed");
  const std::string bytes = slurp(path("fmt.bin"));
  write_dataset(read_dataset(path("fmt.bin")), path("fmt_copy.bin"));
  const bool dataset_round_trip = slurp(path("fmt_copy.bin")) == bytes;

  FloatQTable q(500, 6);
  float v = -7.0F;
  for (float& x : q.values()) x = (v += 0.013F);
  q.values()[0] = -0.0F;
  q.values()[1] = std::bit_cast<float>(0x7fc0beefU);
  write_qtable(q, path("fmt.qtable"));
  const std::string qbytes = slurp(path("fmt.qtable"));
  write_qtable(read_qtable(path("fmt.qtable")), path("fmt_copy.qtable"));
  const bool qtable_round_trip = slurp(path("fmt_copy.qtable")) == qbytes;

  auto write = [](const std::string& p, const std::string& data) { std::ofstream(p, std::ios::binary) << data; };
  std::string bad = bytes;
  bad[2] = '?';
  write(path("bad_magic.bin"), bad);
  write(path("trunc.bin"), bytes.substr(0, bytes.size() - 5));
  bad = qbytes;
  bad[0] = 'Z';
  write(path("bad_magic.qtable"), bad);
  write(path("trunc.qtable"), qbytes.substr(0, qbytes.size() - 2));

  int rejected = 0;
  const std::string train = " --episodes 50 --out " + path("never.csv");
  rejected += cli("train --dataset " + path("bad_magic.bin") + train) != 0;
  rejected += cli("train --dataset " + path("trunc.bin") + train) != 0;
  rejected += cli("eval --env taxi --qtable " + path("bad_magic.qtable")) != 0;
  rejected += cli("eval --env taxi --qtable " + path("trunc.qtable")) != 0;
  out << "dataset round trip " << (dataset_round_trip ? "exact" : "DIFFERS") << ", q-table round trip "
      << (qtable_round_trip ? "exact" : "DIFFERS") << ", " << rejected << "/4 corrupted inputs rejected";
  return dataset_round_trip && qtable_round_trip && rejected == 4;
}

}  // namespace

int main(int argc, char** argv) {
  g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "pimrl_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  check("AC1", "FrozenLake Q-learning quality", quality_q);
  check("AC2", "SARSA quality parity", quality_sarsa);
  check("AC3", "oracle equivalence", oracle_equivalence);
  check("AC4", "fixed-point fidelity", fixed_point_fidelity);
  check("AC5", "strong scaling", strong_scaling);
  check("AC6", "FP32/INT32 cost asymmetry", cost_asymmetry);
  check("AC7", "sync accounting", sync_accounting);
  check("AC8", "multi-agent equivalence", multi_agent);
  check("AC9", "determinism", determinism);
  check("AC10", "format integrity", format_integrity);

  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
