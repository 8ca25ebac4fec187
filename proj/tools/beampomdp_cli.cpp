// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------
//
// beampomdp solve | simulate | oracle | calibrate

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "beampomdp/config.hpp"
#include "beampomdp/errors.hpp"
#include "beampomdp/harness.hpp"
#include "beampomdp/policies.hpp"
#include "beampomdp/solver.hpp"

using namespace beampomdp;

namespace {

struct ModelArgs {
  std::string config;
  std::string detector;
  std::optional<int> horizon;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
  cmd->add_option("--config", args.config, "channel config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--detector", args.detector, "detector table file (default: calibrate from the config)")
      ->check(CLI::ExistingFile);
}

std::shared_ptr<const PomdpModel> build_model(const ModelArgs& args, ChannelConfig& cfg) {
  cfg = load_config(args.config);
  if (args.horizon) {
    cfg.horizon = *args.horizon;
    cfg.validate();
  }
  DetectorModel det = args.detector.empty() ? default_detector(cfg) : load_detector(args.detector);
  return std::make_shared<const PomdpModel>(cfg, build_banded_transition(cfg.n_tx, cfg.beta, cfg.band), std::move(det));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_solve(const ModelArgs& margs, const std::string& out, const SolverOptions& options) {
  ChannelConfig cfg;
  const auto model = build_model(margs, cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto avs = solve_finite_horizon(*model, cfg.horizon, options);
  save_alpha_vectors(out, avs);
  std::cout << "solved T=" << cfg.horizon << " N=" << model->n_states() << " |A|=" << model->actions().size()
            << " vectors=" << avs.total_vectors() << " slot1=" << avs.slot(1).size() << " in "
            << format_double(seconds_since(start)) << " s -> " << out << "\n";
  return 0;
}

std::unique_ptr<Policy> make_policy(const std::string& spec, const std::shared_ptr<const PomdpModel>& model) {
  if (spec == "greedy") return std::make_unique<GreedyPolicy>(model);
  if (spec == "random") return std::make_unique<RandomPolicy>(model);
  if (spec == "tracker") return std::make_unique<TrackerPolicy>(model);
  const std::string prefix = "optimal:";
  if (spec.rfind(prefix, 0) == 0) {
    auto avs = std::make_shared<const AlphaVectorSet>(load_alpha_vectors(spec.substr(prefix.size())));
    return std::make_unique<OptimalPolicy>(model, std::move(avs));
  }
  throw std::invalid_argument("unknown policy '" + spec + "' (optimal:FILE, greedy, random or tracker)");
}

int run_simulate(const ModelArgs& margs, const std::string& policy_spec, std::size_t episodes,
                 std::optional<std::uint64_t> seed, int workers, const std::string& out) {
  ChannelConfig cfg;
  const auto model = build_model(margs, cfg);
  const auto policy = make_policy(policy_spec, model);
  const std::uint64_t master = seed.value_or(cfg.seed);
  const auto start = std::chrono::steady_clock::now();
  const RunSummary summary = monte_carlo(*model, *policy, episodes, workers, master);
  if (out.empty() || out == "-") {
    write_csv(std::cout, summary);
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot write " + out);
    write_csv(file, summary);
    if (!file) throw std::runtime_error("write to " + out + " failed");
  }
  std::cerr << policy->name() << ": " << episodes << " episodes, seed " << master << ", accumulated reward "
            << format_double(summary.accum_reward.back()) << " +/- " << format_double(summary.accum_ci95.back())
            << " (" << format_double(seconds_since(start)) << " s)\n";
  return 0;
}

int run_oracle(const ModelArgs& margs, int beliefs, std::uint64_t seed, const SolverOptions& options) {
  ChannelConfig cfg;
  const auto model = build_model(margs, cfg);
  const auto avs = solve_finite_horizon(*model, cfg.horizon, options);
  Rng rng = make_substream(seed, 0);
  double worst = 0.0;
  auto compare = [&](const Belief& b, const std::string& label) {
    const double tree = brute_force_value(*model, b, cfg.horizon);
    const double solver = avs.value(b.probs(), 1);
    worst = std::max(worst, std::abs(tree - solver));
    std::cout << label << " brute_force=" << format_double(tree) << " solver=" << format_double(solver) << "\n";
  };
  for (std::size_t s = 0; s < model->n_states(); ++s) {
    compare(Belief::point_mass(model->n_states(), s), "state " + std::to_string(s));
  }
  for (int i = 0; i < beliefs; ++i) {
    std::vector<double> p(model->n_states());
    double total = 0.0;
    for (auto& x : p) {
      x = -std::log(1.0 - uniform01(rng));
      total += x;
    }
    for (auto& x : p) x /= total;
    compare(Belief(std::move(p)), "belief " + std::to_string(i));
  }
  std::cout << "max_abs_discrepancy " << format_double(worst) << "\n";
  return 0;
}

int run_calibrate(const ModelArgs& margs, double false_alarm, const std::string& out) {
  ChannelConfig cfg;
  cfg = load_config(margs.config);
  cfg.false_alarm = false_alarm;
  cfg.validate();
  const DetectorModel det = default_detector(cfg);
  write_detector(std::cout, det);
  if (!out.empty()) save_detector(out, det);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive pilot-beam selection for sparse mmWave channels"};
  app.require_subcommand(1);

  SolverOptions solver_options;
  auto add_solver_options = [&](CLI::App* cmd) {
    cmd->add_option("--workers", solver_options.workers, "threads for the per-action backups")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--stage-budget", solver_options.stage_budget, "limit on |A|*|O|*|V| per backup stage");
    cmd->add_option("--max-candidates", solver_options.max_candidates, "limit on any single cross-sum");
    cmd->add_flag("--verbose", solver_options.verbose, "per-stage progress on stderr");
  };

  ModelArgs solve_args;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "exact finite-horizon value iteration; writes the alpha vectors");
  add_model_options(solve, solve_args);
  solve->add_option("--out", solve_out, "policy file")->required();
  solve->add_option("--horizon", solve_args.horizon, "override the config horizon")->check(CLI::PositiveNumber);
  add_solver_options(solve);

  ModelArgs sim_args;
  std::string policy_spec;
  std::size_t episodes = 10000;
  std::optional<std::uint64_t> seed;
  int sim_workers = 1;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy; writes per-slot CSV");
  add_model_options(simulate, sim_args);
  simulate->add_option("--policy", policy_spec, "optimal:FILE | greedy | random | tracker")->required();
  simulate->add_option("--episodes", episodes, "episodes")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "master seed (default: config seed)");
  simulate->add_option("--workers", sim_workers, "threads")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim_out, "CSV file ('-' for stdout)");
  simulate->add_option("--horizon", sim_args.horizon, "override the config horizon")->check(CLI::PositiveNumber);

  ModelArgs oracle_args;
  int oracle_beliefs = 50;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "solver values against the exhaustive decision tree");
  add_model_options(oracle, oracle_args);
  oracle->add_option("--horizon", oracle_args.horizon, "horizon")->check(CLI::PositiveNumber);
  oracle->add_option("--beliefs", oracle_beliefs, "random beliefs besides the point masses")
      ->check(CLI::NonNegativeNumber);
  oracle->add_option("--seed", oracle_seed, "seed for the random beliefs");
  add_solver_options(oracle);

  ModelArgs cal_args;
  double false_alarm = 0.05;
  std::string cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "detection probabilities d(k) for a false-alarm target");
  calibrate->add_option("--config", cal_args.config, "channel config file")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--false-alarm", false_alarm, "per-column false-alarm probability")->required();
  calibrate->add_option("--out", cal_out, "also write the table to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(solve_args, solve_out, solver_options);
    if (*simulate) return run_simulate(sim_args, policy_spec, episodes, seed, sim_workers, sim_out);
    if (*oracle) return run_oracle(oracle_args, oracle_beliefs, oracle_seed, solver_options);
    if (*calibrate) return run_calibrate(cal_args, false_alarm, cal_out);
  } catch (const BudgetExceeded& e) {
    std::cerr << "beampomdp: budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "beampomdp: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "beampomdp: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
