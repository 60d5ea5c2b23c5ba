#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccsm/bnc.hpp"
#include "ccsm/instance.hpp"

namespace ccsm {

// Parameters of the random mean-risk instance generator. q controls how far
// apart the two weight values land (the low weight's square root is drawn
// around sqrt(a_hi)/q).
struct GenConfig {
  int n = 0;
  double q = 8.0;
  int k = 1;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Instance instance;
  MeanRiskObjective objective;
};

// Draws lambda_i ~ U[50,100]; sqrt(a_hi) ~ U[min lambda, lower-median
// lambda]; sqrt(a_lo) ~ Normal(sqrt(a_hi)/q, 1) redrawn until
// 0 <= sqrt(a_lo) < sqrt(a_hi); item i gets the low weight iff lambda_i is
// at most the lower median. Every draw comes from a SplitMix64 stream of the
// seed, so identical configs give bit-identical instances.
GeneratedInstance gen_instance(const GenConfig& config);

struct BenchTrial {
  GenConfig config;
  CutStrategy strategy = CutStrategy::kNoCuts;
  int trial = 0;
  std::uint64_t seed = 0;  // derived per-trial stream seed
  SolveReport report;
};

struct BenchRow {
  int n = 0;
  double q = 0.0;
  int k = 0;
  CutStrategy strategy = CutStrategy::kNoCuts;
  int trials = 0;
  int solved = 0;
  int timed_out = 0;
  double mean_time_s = 0.0;
  double mean_gap = 0.0;
  double mean_nodes = 0.0;
  double mean_cuts_total = 0.0;
  double mean_cuts_lepi = 0.0;
  double mean_cuts_lsi = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchTrial> trials;
  std::string csv;  // one record per trial
};

std::string bench_csv_header();

// Runs every (config, strategy) pair for `trials` derived seeds and
// aggregates the per-trial reports. Trials execute on `jobs` worker threads;
// each solve is independent and owns its solver, so the numeric results do
// not depend on the job count.
BenchResult run_benchmark(std::span<const GenConfig> configs,
                          std::span<const CutStrategy> strategies,
                          const BncLimits& limits, int trials, int jobs = 1);

}  // namespace ccsm
