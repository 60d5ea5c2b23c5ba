#include "ccsm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ccsm/errors.hpp"
#include "ccsm/rng.hpp"

namespace ccsm {

GeneratedInstance gen_instance(const GenConfig& config) {
  if (config.n < 2) throw InputError("gen_instance: n must be at least 2");
  if (!(config.q >= 2.0)) throw InputError("gen_instance: q must be at least 2");
  if (config.k < 1 || config.k > config.n) throw InputError("gen_instance: k out of range");

  SplitMix64 rng = SplitMix64::stream(config.seed, 0x67656e69ULL);

  std::vector<double> lambda(config.n);
  for (double& v : lambda) v = rng.uniform(50.0, 100.0);

  std::vector<double> sorted = lambda;
  std::sort(sorted.begin(), sorted.end());
  const double lambda_min = sorted.front();
  // Lower median: the order statistic at position floor((n+1)/2), which is
  // the plain median for odd n.
  const double lambda_med = sorted[(config.n - 1) / 2];

  const double sqrt_hi = rng.uniform(lambda_min, lambda_med);
  double sqrt_lo = 0.0;
  bool accepted = false;
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    sqrt_lo = rng.normal(sqrt_hi / config.q, 1.0);
    if (sqrt_lo >= 0.0 && sqrt_lo < sqrt_hi) {
      accepted = true;
      break;
    }
  }
  if (!accepted) throw GenerationError("gen_instance: rejection sampling exhausted");

  const double a_hi = sqrt_hi * sqrt_hi;
  const double a_lo = sqrt_lo * sqrt_lo;
  std::vector<double> weights(config.n);
  for (int i = 0; i < config.n; ++i)
    weights[i] = lambda[i] <= lambda_med ? a_lo : a_hi;

  GeneratedInstance out{
      Instance(std::move(weights), config.k, ConcaveFunction::sqrt_scaled(1.0)),
      MeanRiskObjective::from_epsilon(std::move(lambda), config.epsilon)};
  return out;
}

std::string bench_csv_header() {
  return "n,q,k,strategy,trial,seed,status,time_s,gap,nodes,cuts_total,cuts_lepi,"
         "cuts_lsi,objective,bound";
}

namespace {

std::string trial_csv_record(const BenchTrial& t) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer),
                "%d,%g,%d,%s,%d,%llu,%s,%.3f,%.6g,%lld,%lld,%lld,%lld,%.10g,%.10g",
                t.config.n, t.config.q, t.config.k,
                cut_strategy_name(t.strategy).c_str(), t.trial,
                static_cast<unsigned long long>(t.seed),
                solve_status_name(t.report.status).c_str(), t.report.wall_time_s,
                t.report.gap, static_cast<long long>(t.report.nodes),
                static_cast<long long>(t.report.cuts.total()),
                static_cast<long long>(t.report.cuts.lepi),
                static_cast<long long>(t.report.cuts.lsi), t.report.best_objective,
                t.report.best_bound);
  return buffer;
}

}  // namespace

BenchResult run_benchmark(std::span<const GenConfig> configs,
                          std::span<const CutStrategy> strategies,
                          const BncLimits& limits, int trials, int jobs) {
  if (trials < 1) throw InputError("run_benchmark: trials must be >= 1");
  if (jobs < 1) jobs = 1;

  BenchResult result;
  result.trials.resize(configs.size() * strategies.size() * trials);
  for (std::size_t c = 0; c < configs.size(); ++c)
    for (std::size_t s = 0; s < strategies.size(); ++s)
      for (int t = 0; t < trials; ++t) {
        BenchTrial& slot = result.trials[(c * strategies.size() + s) * trials + t];
        slot.config = configs[c];
        slot.strategy = strategies[s];
        slot.trial = t;
        slot.seed = SplitMix64::stream(configs[c].seed, static_cast<std::uint64_t>(t))
                        .next_u64();
      }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      std::size_t index = cursor.fetch_add(1);
      if (index >= result.trials.size()) return;
      BenchTrial& task = result.trials[index];
      GenConfig per_trial = task.config;
      per_trial.seed = task.seed;
      GeneratedInstance gen = gen_instance(per_trial);
      try {
        task.report = bnc_solve(gen.instance, gen.objective, task.strategy, limits);
      } catch (const Error&) {
        // Recorded as an empty report with infinite gap rather than aborting
        // the whole benchmark.
        task.report = SolveReport{};
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
  }

  std::ostringstream csv;
  csv << bench_csv_header() << "\n";
  for (const BenchTrial& t : result.trials) csv << trial_csv_record(t) << "\n";

  for (std::size_t c = 0; c < configs.size(); ++c)
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      BenchRow row;
      row.n = configs[c].n;
      row.q = configs[c].q;
      row.k = configs[c].k;
      row.strategy = strategies[s];
      row.trials = trials;
      for (int t = 0; t < trials; ++t) {
        const BenchTrial& trial =
            result.trials[(c * strategies.size() + s) * trials + t];
        const SolveReport& r = trial.report;
        bool solved = r.status == SolveStatus::kOptimal || r.status == SolveStatus::kGapLimit;
        row.solved += solved ? 1 : 0;
        row.timed_out += r.status == SolveStatus::kTimeLimit ? 1 : 0;
        row.mean_time_s += r.wall_time_s;
        row.mean_gap += std::isfinite(r.gap) ? r.gap : 0.0;
        row.mean_nodes += static_cast<double>(r.nodes);
        row.mean_cuts_total += static_cast<double>(r.cuts.total());
        row.mean_cuts_lepi += static_cast<double>(r.cuts.lepi);
        row.mean_cuts_lsi += static_cast<double>(r.cuts.lsi);
      }
      row.mean_time_s /= trials;
      row.mean_gap /= trials;
      row.mean_nodes /= trials;
      row.mean_cuts_total /= trials;
      row.mean_cuts_lepi /= trials;
      row.mean_cuts_lsi /= trials;
      result.rows.push_back(row);
    }

  result.csv = csv.str();
  return result;
}

}  // namespace ccsm
