// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/solver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "beampomdp/errors.hpp"
#include "lp.hpp"

namespace beampomdp {

namespace {

constexpr double kTieTolerance = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool dominates(const std::vector<double>& u, const std::vector<double>& v) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < v[i]) return false;
  }
  return true;
}

// Index of the vector with the largest value at `belief`; near-ties go to
// the smaller action, then the earlier position.
std::size_t best_at(const std::vector<AlphaVector>& set, std::span<const double> belief) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double v = dot(set[i].values, belief);
    if (v > best_value + kTieTolerance ||
        (v >= best_value - kTieTolerance && set[i].action < set[best].action)) {
      best = i;
      best_value = std::max(best_value, v);
    }
  }
  return best;
}

std::vector<AlphaVector> cross_sum(const std::vector<AlphaVector>& a, const std::vector<AlphaVector>& b) {
  std::vector<AlphaVector> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      AlphaVector s{x.values, x.action};
      for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += y.values[i];
      out.push_back(std::move(s));
    }
  }
  return out;
}

// All vectors of V^k restricted to action a, before the final union.
std::vector<AlphaVector> backup_action(const PomdpModel& model, std::size_t action,
                                       const std::vector<AlphaVector>& next, const SolverOptions& options) {
  const double tolerance = options.prune_tolerance;
  const std::size_t n = model.n_states();
  std::vector<double> likelihood(n);
  std::vector<double> weighted(n);
  std::vector<AlphaVector> acc;
  for (std::uint32_t o = 0; o < model.n_observations(); ++o) {
    model.obs_likelihood(action, o, likelihood);
    std::vector<AlphaVector> projected;
    projected.reserve(next.size());
    for (const auto& alpha : next) {
      for (std::size_t i = 0; i < n; ++i) weighted[i] = likelihood[i] * alpha.values[i];
      AlphaVector g{std::vector<double>(n), action};
      model.apply_transition(weighted, g.values);
      projected.push_back(std::move(g));
    }
    projected = prune(std::move(projected), tolerance);
    const double candidates = static_cast<double>(acc.size()) * static_cast<double>(projected.size());
    if (candidates > options.max_candidates) {
      throw BudgetExceeded("cross-sum for action " + std::to_string(action) + ", observation " + std::to_string(o) +
                           " has " + std::to_string(static_cast<long long>(candidates)) +
                           " candidates, above the limit of " +
                           std::to_string(static_cast<long long>(options.max_candidates)));
    }
    acc = acc.empty() ? std::move(projected) : prune(cross_sum(acc, projected), tolerance);
  }
  const auto reward = model.reward_vector(action);
  for (auto& alpha : acc) {
    for (std::size_t i = 0; i < n; ++i) alpha.values[i] += reward[i];
    alpha.action = action;
  }
  return acc;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

}  // namespace

AlphaVectorSet::AlphaVectorSet(std::size_t n_states, std::size_t n_actions, std::uint64_t config_hash,
                               std::vector<std::vector<AlphaVector>> slots)
    : n_states_(n_states), n_actions_(n_actions), config_hash_(config_hash), slots_(std::move(slots)) {
  for (const auto& s : slots_) {
    if (s.empty()) throw std::invalid_argument("alpha vector slot is empty");
    for (const auto& alpha : s) {
      if (alpha.values.size() != n_states_) throw std::invalid_argument("alpha vector has the wrong length");
      if (alpha.action >= n_actions_) throw std::invalid_argument("alpha vector action out of range");
    }
  }
}

const std::vector<AlphaVector>& AlphaVectorSet::slot(int k) const {
  if (k < 1 || k > horizon()) throw std::out_of_range("slot outside the solved horizon");
  return slots_[static_cast<std::size_t>(k - 1)];
}

std::size_t AlphaVectorSet::total_vectors() const {
  std::size_t total = 0;
  for (const auto& s : slots_) total += s.size();
  return total;
}

double AlphaVectorSet::value(std::span<const double> belief, int k) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& alpha : slot(k)) best = std::max(best, dot(alpha.values, belief));
  return best;
}

std::size_t AlphaVectorSet::best_vector(std::span<const double> belief, int k) const {
  return best_at(slot(k), belief);
}

std::vector<AlphaVector> prune_dominated(std::vector<AlphaVector> vectors) {
  const std::size_t k = vectors.size();
  std::vector<bool> removed(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i || removed[j]) continue;
      if (!dominates(vectors[j].values, vectors[i].values)) continue;
      // Exact duplicates: keep the smaller action, then the earlier one.
      const bool equal = vectors[j].values == vectors[i].values;
      if (!equal || vectors[j].action < vectors[i].action ||
          (vectors[j].action == vectors[i].action && j < i)) {
        removed[i] = true;
        break;
      }
    }
  }
  std::vector<AlphaVector> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!removed[i]) out.push_back(std::move(vectors[i]));
  }
  return out;
}

std::vector<AlphaVector> prune(std::vector<AlphaVector> vectors, double tolerance) {
  std::vector<AlphaVector> pending = prune_dominated(std::move(vectors));
  std::vector<AlphaVector> kept;
  if (pending.size() <= 1) return pending;
  const std::size_t n = pending.front().values.size();

  // Lark's filter: grow `kept` with vectors that are best at a witness.
  const std::vector<double> centre(n, 1.0 / static_cast<double>(n));
  std::vector<std::span<const double>> kept_views;
  while (!pending.empty()) {
    std::optional<std::vector<double>> witness;
    if (kept.empty()) {
      witness = centre;
    } else {
      witness = detail::find_witness(pending.back().values, kept_views, tolerance);
    }
    if (!witness) {
      pending.pop_back();
      continue;
    }
    const std::size_t idx = best_at(pending, *witness);
    kept.push_back(std::move(pending[idx]));
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(idx));
    kept_views.clear();
    for (const auto& alpha : kept) kept_views.emplace_back(alpha.values);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const AlphaVector& a, const AlphaVector& b) { return a.action < b.action; });
  return kept;
}

AlphaVectorSet solve_finite_horizon(const PomdpModel& model, int horizon, const SolverOptions& options) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const std::size_t n_actions = model.actions().size();
  std::vector<std::vector<AlphaVector>> slots(static_cast<std::size_t>(horizon));

  std::vector<AlphaVector> terminal;
  terminal.reserve(n_actions);
  for (std::size_t a = 0; a < n_actions; ++a) {
    const auto r = model.reward_vector(a);
    terminal.push_back(AlphaVector{std::vector<double>(r.begin(), r.end()), a});
  }
  slots.back() = prune(std::move(terminal), options.prune_tolerance);

  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n_actions)));

  for (int k = horizon - 1; k >= 1; --k) {
    const auto& next = slots[static_cast<std::size_t>(k)];
    const double stage_cost = static_cast<double>(n_actions) * static_cast<double>(model.n_observations()) *
                              static_cast<double>(next.size());
    if (stage_cost > options.stage_budget) {
      throw BudgetExceeded("backup for slot " + std::to_string(k) + " needs " + std::to_string(stage_cost) +
                           " projections, above the budget of " + std::to_string(options.stage_budget));
    }
    const auto started = std::chrono::steady_clock::now();

    std::vector<std::vector<AlphaVector>> per_action(n_actions);
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    auto run = [&](int worker) {
      try {
        for (std::size_t a = static_cast<std::size_t>(worker); a < n_actions; a += static_cast<std::size_t>(workers)) {
          per_action[a] = backup_action(model, a, next, options);
        }
      } catch (...) {
        failures[static_cast<std::size_t>(worker)] = std::current_exception();
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }

    std::vector<AlphaVector> all;
    for (auto& set : per_action) {
      for (auto& alpha : set) all.push_back(std::move(alpha));
    }
    const std::size_t before = all.size();
    slots[static_cast<std::size_t>(k - 1)] = prune(std::move(all), options.prune_tolerance);

    if (options.verbose) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      std::cerr << "slot " << k << ": " << before << " candidates -> "
                << slots[static_cast<std::size_t>(k - 1)].size() << " vectors (" << secs << " s)\n";
    }
  }
  return AlphaVectorSet(model.n_states(), n_actions, model.fingerprint(), std::move(slots));
}

ActionVector optimal_action(const Belief& belief, int k, const AlphaVectorSet& avs, const PomdpModel& model) {
  if (belief.size() != avs.n_states()) throw std::invalid_argument("belief length does not match the policy");
  const auto& alpha = avs.slot(k)[avs.best_vector(belief.probs(), k)];
  return model.actions()[alpha.action];
}

void write_alpha_vectors(std::ostream& out, const AlphaVectorSet& avs) {
  out << "beampomdp-alpha-vectors 1\n";
  out << "n_states " << avs.n_states() << "\n";
  out << "n_actions " << avs.n_actions() << "\n";
  out << "horizon " << avs.horizon() << "\n";
  out << "config_hash " << hex64(avs.config_hash()) << "\n";
  for (int k = 1; k <= avs.horizon(); ++k) {
    const auto& set = avs.slot(k);
    out << "slot " << k << ' ' << set.size() << "\n";
    for (const auto& alpha : set) {
      out << alpha.action;
      for (double v : alpha.values) out << ' ' << format_double(v);
      out << "\n";
    }
  }
  out << "end\n";
}

AlphaVectorSet read_alpha_vectors(std::istream& in) {
  auto fail = [](const std::string& what) -> void { throw ConfigError("policy file: " + what); };
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "beampomdp-alpha-vectors") fail("not an alpha-vector file");
  if (version != 1) fail("unsupported version " + std::to_string(version));

  auto expect = [&](const char* key) {
    std::string k;
    in >> k;
    if (k != key) fail(std::string("expected '") + key + "'");
  };
  std::size_t n_states = 0, n_actions = 0;
  int horizon = 0;
  std::string hash_text;
  expect("n_states");
  in >> n_states;
  expect("n_actions");
  in >> n_actions;
  expect("horizon");
  in >> horizon;
  expect("config_hash");
  in >> hash_text;
  if (!in || horizon < 1 || n_states == 0) fail("bad header");
  std::uint64_t hash = 0;
  if (auto [p, ec] = std::from_chars(hash_text.data(), hash_text.data() + hash_text.size(), hash, 16);
      ec != std::errc{}) {
    fail("bad config hash");
  }

  std::vector<std::vector<AlphaVector>> slots(static_cast<std::size_t>(horizon));
  std::string token;
  for (int k = 1; k <= horizon; ++k) {
    expect("slot");
    int slot_no = 0;
    std::size_t count = 0;
    in >> slot_no >> count;
    if (!in || slot_no != k) fail("slot records out of order");
    auto& set = slots[static_cast<std::size_t>(k - 1)];
    set.resize(count);
    for (auto& alpha : set) {
      in >> alpha.action;
      alpha.values.resize(n_states);
      for (double& v : alpha.values) {
        in >> token;
        auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || p != token.data() + token.size()) fail("bad number '" + token + "'");
      }
      if (!in) fail("truncated vector record");
    }
  }
  expect("end");
  return AlphaVectorSet(n_states, n_actions, hash, std::move(slots));
}

void save_alpha_vectors(const std::filesystem::path& path, const AlphaVectorSet& avs) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_alpha_vectors(out, avs);
  if (!out) throw ConfigError("write failed for " + path.string());
}

AlphaVectorSet load_alpha_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open policy file " + path.string());
  return read_alpha_vectors(in);
}

}  // namespace beampomdp
