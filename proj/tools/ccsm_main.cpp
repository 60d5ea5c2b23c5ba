#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccsm/bench.hpp"
#include "ccsm/bnc.hpp"
#include "ccsm/errors.hpp"
#include "ccsm/hull22.hpp"
#include "ccsm/instance_io.hpp"
#include "ccsm/lift_epi.hpp"
#include "ccsm/lift_si.hpp"
#include "ccsm/rng.hpp"

namespace {

using Json = nlohmann::ordered_json;

std::vector<int> parse_one_based_list(const std::string& text, int n, const char* what) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    int value = std::stoi(token);
    if (value < 1 || value > n)
      throw ccsm::InputError(std::string(what) + ": index " + token + " outside 1.." +
                             std::to_string(n));
    out.push_back(value - 1);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) out.push_back(std::stod(token));
  }
  return out;
}

Json cut_to_json(const ccsm::LinearCut& cut) {
  Json out;
  out["family"] = ccsm::cut_family_name(cut.family);
  out["w_coeff"] = cut.w_coeff;
  out["pi0"] = cut.pi0;
  out["pi"] = cut.pi;
  if (!cut.provenance.perm.empty()) {
    std::vector<int> one_based;
    for (int i : cut.provenance.perm) one_based.push_back(i + 1);
    out["perm"] = one_based;
  }
  if (cut.provenance.i0 >= 0) out["i0"] = cut.provenance.i0;
  return out;
}

void print_cut(const ccsm::LinearCut& cut, bool json) {
  if (json)
    std::cout << cut_to_json(cut).dump(2) << "\n";
  else
    std::cout << cut.format(6) << "\n";
}

Json report_to_json(const ccsm::SolveReport& report) {
  Json out;
  out["status"] = ccsm::solve_status_name(report.status);
  out["objective"] = report.best_objective;
  out["bound"] = report.best_bound;
  out["gap"] = report.gap;
  out["nodes"] = report.nodes;
  out["cuts"] = {{"lazy", report.cuts.lazy},
                 {"lepi", report.cuts.lepi},
                 {"lsi", report.cuts.lsi},
                 {"ali", report.cuts.ali}};
  out["time_s"] = report.wall_time_s;
  std::vector<int> support;
  for (std::size_t i = 0; i < report.incumbent.size(); ++i)
    if (report.incumbent[i] > 0.5) support.push_back(static_cast<int>(i) + 1);
  out["solution_support"] = support;
  return out;
}

int run_cuts(const std::string& kind, const std::string& instance_path,
             const std::string& perm_text, int i0, bool json) {
  ccsm::InstanceFile file = ccsm::load_instance_file(instance_path);
  const ccsm::Instance& inst = file.instance;

  if (kind == "check-assumption") {
    ccsm::TwoWeightProfile profile = ccsm::two_weight_profile(inst);
    ccsm::AssumptionSides sides =
        ccsm::assumption_sides(profile, inst.f(), inst.k(), i0);
    bool holds = ccsm::check_assumption(profile, inst.f(), inst.k(), i0);
    if (json) {
      Json out{{"i0", i0}, {"lhs", sides.lhs}, {"rhs", sides.rhs}, {"holds", holds}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::printf("lhs = %.10g, rhs = %.10g -> %s\n", sides.lhs, sides.rhs,
                  holds ? "holds" : "violated");
    }
    return 0;
  }

  std::vector<int> order;
  if (perm_text.empty()) {
    order.resize(inst.n());
    for (int i = 0; i < inst.n(); ++i) order[i] = i;
  } else {
    order = parse_one_based_list(perm_text, inst.n(), "--perm");
  }
  if (static_cast<int>(order.size()) != inst.n())
    throw ccsm::InputError("--perm must list every item exactly once");
  ccsm::Permutation perm{order};

  ccsm::LinearCut cut;
  if (kind == "epi") {
    cut = ccsm::epi_cut(inst, perm);
  } else if (kind == "lifted-epi") {
    cut = ccsm::lifted_epi_cut(inst, perm);
  } else if (kind == "ali") {
    cut = ccsm::ali_cut(inst, perm);
  } else if (kind == "lower-si" || kind == "higher-si") {
    ccsm::TwoWeightProfile profile = ccsm::two_weight_profile(inst);
    ccsm::SiParams params;
    params.i0 = i0;
    params.weight_class =
        kind == "lower-si" ? ccsm::WeightClass::kLower : ccsm::WeightClass::kHigher;
    const std::vector<int>& base =
        kind == "lower-si" ? profile.lower : profile.higher;
    // Class orders follow the permutation's order.
    for (int item : order) {
      if (std::binary_search(base.begin(), base.end(), item))
        params.perm_within_class.push_back(item);
      else
        params.perm_other_class.push_back(item);
    }
    cut = kind == "lower-si" ? ccsm::lower_si_cut(inst, params)
                             : ccsm::higher_si_cut(inst, params);
  } else if (kind == "super-average") {
    cut = ccsm::super_average_cut(inst);
  } else {
    throw ccsm::InputError("unknown cut kind: " + kind);
  }
  print_cut(cut, json);
  return 0;
}

int run_verify_hull(const std::string& instance_path, int grid, std::uint64_t seed) {
  ccsm::InstanceFile file = ccsm::load_instance_file(instance_path);
  const ccsm::Instance& inst = file.instance;
  if (inst.k() != 2) throw ccsm::ScopeError("verify-hull: requires k = 2");
  const int n = inst.n();
  std::vector<ccsm::LinearCut> system = ccsm::p22_system(inst);

  ccsm::SplitMix64 rng(seed);
  std::map<ccsm::CategoryTag, int> category_counts;
  int agreements = 0;
  int members = 0;
  for (int probe = 0; probe < grid; ++probe) {
    std::vector<double> x(n);
    double sum = 0.0;
    for (double& v : x) {
      v = rng.next_double();
      sum += v;
    }
    double target = rng.uniform(0.0, 2.0);
    if (sum > target && sum > 0.0)
      for (double& v : x) v *= target / sum;

    double system_value = 0.0;  // max over the finite system at x
    for (const ccsm::LinearCut& cut : system) {
      double lhs = cut.pi0;
      for (int i = 0; i < n; ++i) lhs += cut.pi[i] * x[i];
      system_value = std::max(system_value, lhs);
    }
    double offset = (probe % 2 == 0 ? 1.0 : -1.0) * rng.uniform(1e-4, 0.5);
    double w = system_value + offset;

    bool by_lp = ccsm::hull_membership(inst, w, x, 2);
    bool by_system = w >= system_value - ccsm::kHullTol;
    agreements += by_lp == by_system ? 1 : 0;
    members += by_lp ? 1 : 0;
    ++category_counts[ccsm::classify(inst, x).tag];
  }

  const char* names[] = {"c1", "c2", "c3", "c4", "c5"};
  for (const auto& [tag, count] : category_counts)
    std::printf("%s: %d\n", names[static_cast<int>(tag)], count);
  std::printf("members: %d / %d\n", members, grid);
  std::printf("equivalence: %s (%d / %d probes agree)\n",
              agreements == grid ? "HOLDS" : "FAILS", agreements, grid);
  return agreements == grid ? 0 : 1;
}

int run_polar(const std::string& instance_path, int k, int budget, bool json) {
  ccsm::InstanceFile file = ccsm::load_instance_file(instance_path);
  const ccsm::Instance& inst = file.instance;
  if (k <= 0) k = inst.k();
  auto facets = ccsm::enumerate_polar_facets(inst, k, budget);
  Json all = Json::array();
  for (const ccsm::PolarRay& ray : facets) {
    std::string family = ccsm::classify_polar_ray(inst, k, ray);
    if (json) {
      Json entry{{"pi0", ray.pi0}, {"pi", ray.pi}, {"known", family != "unknown"},
                 {"family", family}};
      all.push_back(entry);
    } else {
      std::printf("w >= %.6f", ray.pi0);
      for (std::size_t i = 0; i < ray.pi.size(); ++i)
        std::printf(" %+.6f*x%zu", ray.pi[i], i + 1);
      std::printf("   [%s: %s]\n", family == "unknown" ? "unknown" : "known",
                  family.c_str());
    }
  }
  if (json) std::cout << all.dump(2) << "\n";
  std::fprintf(stderr, "%zu facet(s)\n", facets.size());
  return 0;
}

int run_solve(const std::string& instance_path, const std::string& lambda_text,
              double epsilon, const std::string& strategy_name, double time_limit,
              long long node_limit, double gap_limit, bool json) {
  ccsm::InstanceFile file = ccsm::load_instance_file(instance_path);
  const ccsm::Instance& inst = file.instance;

  std::vector<double> lambda;
  if (!lambda_text.empty()) {
    std::ifstream as_file(lambda_text);
    if (as_file) {
      Json doc = Json::parse(as_file);
      lambda = doc.at("lambda").get<std::vector<double>>();
    } else {
      lambda = parse_double_list(lambda_text);
    }
  } else if (file.lambda) {
    lambda = *file.lambda;
  } else {
    throw ccsm::InputError("solve: provide --lambda or an instance file with a lambda field");
  }
  if (epsilon <= 0.0 && file.epsilon) epsilon = *file.epsilon;
  if (epsilon <= 0.0) epsilon = 0.01;

  ccsm::MeanRiskObjective objective =
      ccsm::MeanRiskObjective::from_epsilon(std::move(lambda), epsilon);
  ccsm::BncLimits limits;
  limits.time_limit_s = time_limit;
  if (node_limit >= 0) limits.node_limit = node_limit;
  limits.gap_limit = gap_limit;

  ccsm::SolveReport report = ccsm::bnc_solve(
      inst, objective, ccsm::cut_strategy_from_name(strategy_name), limits);

  if (json) {
    std::cout << report_to_json(report).dump(2) << "\n";
  } else {
    std::printf("status      %s\n", ccsm::solve_status_name(report.status).c_str());
    std::printf("objective   %.10g\n", report.best_objective);
    std::printf("bound       %.10g\n", report.best_bound);
    std::printf("gap         %.4g\n", report.gap);
    std::printf("nodes       %lld\n", static_cast<long long>(report.nodes));
    std::printf("cuts        %lld (lazy %lld, lepi %lld, lsi %lld, ali %lld)\n",
                static_cast<long long>(report.cuts.total()),
                static_cast<long long>(report.cuts.lazy),
                static_cast<long long>(report.cuts.lepi),
                static_cast<long long>(report.cuts.lsi),
                static_cast<long long>(report.cuts.ali));
    std::printf("time        %.3f s\n", report.wall_time_s);
    std::printf("support    ");
    for (std::size_t i = 0; i < report.incumbent.size(); ++i)
      if (report.incumbent[i] > 0.5) std::printf(" %zu", i + 1);
    std::printf("\n");
  }
  return 0;
}

int run_gen(int n, double q, int k, double epsilon, std::uint64_t seed,
            const std::string& out_path) {
  ccsm::GenConfig config{n, q, k, epsilon, seed};
  ccsm::GeneratedInstance gen = ccsm::gen_instance(config);
  ccsm::InstanceFile file{gen.instance, gen.objective.lambda, epsilon};
  if (out_path.empty() || out_path == "-")
    std::cout << ccsm::serialize_instance(file);
  else
    ccsm::save_instance_file(file, out_path);
  return 0;
}

std::vector<double> parse_grid_values(const std::vector<std::string>& grid,
                                      const std::string& key,
                                      const std::vector<double>& fallback) {
  for (const std::string& token : grid) {
    auto eq = token.find('=');
    if (eq == std::string::npos || token.substr(0, eq) != key) continue;
    return parse_double_list(token.substr(eq + 1));
  }
  return fallback;
}

int run_bench(const std::vector<std::string>& grid, int trials,
              const std::string& strategies_text, double time_limit, int jobs,
              std::uint64_t seed, const std::string& out_path) {
  std::vector<double> ns = parse_grid_values(grid, "n", {20, 40});
  std::vector<double> ks = parse_grid_values(grid, "k", {3, 5});
  std::vector<double> qs = parse_grid_values(grid, "q", {4, 8});

  std::vector<ccsm::GenConfig> configs;
  for (double n : ns)
    for (double k : ks)
      for (double q : qs)
        configs.push_back(ccsm::GenConfig{static_cast<int>(n), q, static_cast<int>(k),
                                          0.01, seed});

  std::vector<ccsm::CutStrategy> strategies;
  std::stringstream stream(strategies_text);
  std::string token;
  while (std::getline(stream, token, ','))
    if (!token.empty()) strategies.push_back(ccsm::cut_strategy_from_name(token));

  ccsm::BncLimits limits;
  limits.time_limit_s = time_limit;
  ccsm::BenchResult result =
      ccsm::run_benchmark(configs, strategies, limits, trials, jobs);

  if (out_path.empty() || out_path == "-") {
    std::cout << result.csv;
  } else {
    std::ofstream out(out_path);
    out << result.csv;
  }
  std::printf("%-4s %-4s %-3s %-9s %9s %8s %10s %10s %7s\n", "n", "q", "k", "strategy",
              "time_s", "gap", "nodes", "cuts", "solved");
  for (const ccsm::BenchRow& row : result.rows) {
    std::printf("%-4d %-4g %-3d %-9s %9.2f %8.4f %10.1f %10.1f %4d/%-2d\n", row.n,
                row.q, row.k, ccsm::cut_strategy_name(row.strategy).c_str(),
                row.mean_time_s, row.mean_gap, row.mean_nodes, row.mean_cuts_total,
                row.solved, row.trials);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut generation, hull verification and branch-and-cut for "
               "cardinality-constrained concave minimization over binary variables"};
  app.require_subcommand(1);

  // cuts
  auto* cuts = app.add_subcommand("cuts", "Generate a single cut or check the lifting condition");
  std::string cut_kind;
  cuts->add_option("kind", cut_kind,
                   "epi|lifted-epi|ali|lower-si|higher-si|super-average|check-assumption")
      ->required();
  std::string cuts_instance, cuts_perm;
  int cuts_i0 = 0;
  bool cuts_json = false;
  cuts->add_option("--instance", cuts_instance, "Instance file")->required();
  cuts->add_option("--perm", cuts_perm, "1-based permutation, e.g. \"5,2,3,1,4,6\"");
  cuts->add_option("--i0", cuts_i0, "Averaging parameter for si cuts");
  cuts->add_flag("--json", cuts_json, "Machine-readable output with full precision");

  // verify-hull
  auto* verify = app.add_subcommand("verify-hull",
                                    "Check LP membership against the finite k=2 description");
  std::string verify_instance;
  int verify_grid = 1000;
  std::uint64_t verify_seed = 20240917ULL;
  verify->add_option("--instance", verify_instance, "Instance file")->required();
  verify->add_option("--grid", verify_grid, "Number of probe points");
  verify->add_option("--seed", verify_seed, "Probe RNG seed");

  // polar
  auto* polar = app.add_subcommand("polar", "Enumerate facets via the polar");
  std::string polar_instance;
  int polar_k = -1, polar_budget = 400;
  bool polar_json = false;
  polar->add_option("--instance", polar_instance, "Instance file")->required();
  polar->add_option("--k", polar_k, "Cardinality bound (defaults to the instance's)");
  polar->add_option("--budget", polar_budget, "Random probe budget");
  polar->add_flag("--json", polar_json, "Machine-readable output");

  // solve
  auto* solve = app.add_subcommand("solve", "Branch-and-cut mean-risk solve");
  std::string solve_instance, solve_lambda, solve_strategy = "lepi-lsi";
  double solve_epsilon = -1.0, solve_time = std::numeric_limits<double>::infinity();
  double solve_gap = 1e-4;
  long long solve_nodes = -1;
  std::uint64_t solve_seed = 0;
  bool solve_json = false;
  solve->add_option("--instance", solve_instance, "Instance file")->required();
  solve->add_option("--lambda", solve_lambda, "Comma list or a JSON file with a lambda field");
  solve->add_option("--epsilon", solve_epsilon, "Risk level in (0, 0.5)");
  solve->add_option("--strategy", solve_strategy, "lepi-lsi|ali|nocuts");
  solve->add_option("--time-limit", solve_time, "Seconds");
  solve->add_option("--node-limit", solve_nodes, "Max explored nodes");
  solve->add_option("--gap-limit", solve_gap, "Relative gap stop (0 = exact)");
  solve->add_option("--seed", solve_seed, "Recorded only; the solve is deterministic");
  solve->add_flag("--json", solve_json, "Machine-readable report");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random mean-risk instance");
  int gen_n = 40, gen_k = 5;
  double gen_q = 8.0, gen_epsilon = 0.01;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Items")->required();
  gen->add_option("--q", gen_q, "Weight spread parameter");
  gen->add_option("--k", gen_k, "Cardinality bound")->required();
  gen->add_option("--epsilon", gen_epsilon, "Risk level");
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark grid");
  std::vector<std::string> bench_grid;
  int bench_trials = 5, bench_jobs = 1;
  std::uint64_t bench_seed = 0;
  double bench_time = 60.0;
  std::string bench_strategies = "lepi-lsi,ali,nocuts", bench_out;
  bench->add_option("--grid", bench_grid, "e.g. n=20,40 k=3,5 q=4,8")->expected(-1);
  bench->add_option("--trials", bench_trials, "Trials per configuration");
  bench->add_option("--strategies", bench_strategies, "Comma list");
  bench->add_option("--time-limit", bench_time, "Seconds per solve");
  bench->add_option("--jobs", bench_jobs, "Worker threads");
  bench->add_option("--seed", bench_seed, "Master seed");
  bench->add_option("-o,--out", bench_out, "CSV output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cuts->parsed()) return run_cuts(cut_kind, cuts_instance, cuts_perm, cuts_i0, cuts_json);
    if (verify->parsed()) return run_verify_hull(verify_instance, verify_grid, verify_seed);
    if (polar->parsed()) return run_polar(polar_instance, polar_k, polar_budget, polar_json);
    if (solve->parsed())
      return run_solve(solve_instance, solve_lambda, solve_epsilon, solve_strategy,
                       solve_time, solve_nodes, solve_gap, solve_json);
    if (gen->parsed()) return run_gen(gen_n, gen_q, gen_k, gen_epsilon, gen_seed, gen_out);
    if (bench->parsed())
      return run_bench(bench_grid, bench_trials, bench_strategies, bench_time,
                       bench_jobs, bench_seed, bench_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
