// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../src/lp.hpp"
#include "beampomdp/errors.hpp"
#include "beampomdp/harness.hpp"
#include "beampomdp/policies.hpp"
#include "beampomdp/solver.hpp"
#include "test_support.hpp"

using namespace beampomdp;
namespace bt = beampomdp::testing;

namespace {

double dot(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double upper_envelope(const std::vector<AlphaVector>& set, std::span<const double> b) {
  double best = -1e300;
  for (const auto& alpha : set) best = std::max(best, dot(alpha.values, b));
  return best;
}

std::vector<AlphaVector> random_vectors(std::size_t count, std::size_t n, Rng& rng) {
  std::vector<AlphaVector> out;
  for (std::size_t k = 0; k < count; ++k) {
    AlphaVector a{std::vector<double>(n), k};
    for (auto& v : a.values) v = uniform01(rng);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

TEST_CASE("witness LP") {
  const std::vector<double> u{1.0, 0.0};
  const std::vector<double> v{0.0, 1.0};
  std::vector<std::span<const double>> others{u, v};

  SUBCASE("vector above the envelope in the middle") {
    const std::vector<double> w{0.6, 0.6};
    const auto b = detail::find_witness(w, others, 1e-9);
    REQUIRE(b);
    CHECK((*b)[0] == doctest::Approx(0.5));
    CHECK((*b)[0] + (*b)[1] == doctest::Approx(1.0));
  }

  SUBCASE("vector touching the envelope has no witness") {
    const std::vector<double> w{0.5, 0.5};
    CHECK_FALSE(detail::find_witness(w, others, 1e-9));
  }

  SUBCASE("corner witness") {
    const std::vector<double> w{1.2, -3.0};
    const auto b = detail::find_witness(w, others, 1e-9);
    REQUIRE(b);
    CHECK((*b)[0] == doctest::Approx(1.0));
  }

  SUBCASE("random sets: witnesses verify and rejections hold on a grid") {
    Rng rng = make_substream(31, 0);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
      const auto set = random_vectors(5, n, rng);
      std::vector<std::span<const double>> views;
      for (const auto& a : set) views.emplace_back(a.values);
      std::vector<double> w(n);
      for (auto& x : w) x = uniform01(rng) + 0.1;
      const auto b = detail::find_witness(w, views, 1e-9);
      if (b) {
        double sum = 0.0;
        for (double x : *b) {
          CHECK(x >= -1e-12);
          sum += x;
        }
        CHECK(sum == doctest::Approx(1.0));
        CHECK(dot(w, *b) > upper_envelope(set, *b) + 1e-9);
      } else {
        for (int s = 0; s < 200; ++s) {
          const auto probe = bt::random_belief(n, rng);
          CHECK(dot(w, probe.probs()) <= upper_envelope(set, probe.probs()) + 1e-8);
        }
      }
    }
  }
}

TEST_CASE("prune") {
  Rng rng = make_substream(32, 0);

  SUBCASE("dominated and duplicate vectors go") {
    std::vector<AlphaVector> set{{{1.0, 1.0}, 0}, {{0.5, 0.5}, 1}, {{1.0, 1.0}, 2}, {{2.0, 0.0}, 3}};
    const auto out = prune(set);
    REQUIRE(out.size() == 2);
    CHECK(out[0].action == 0);
    CHECK(out[1].action == 3);
  }

  SUBCASE("upper envelope is unchanged on 1e4 random beliefs") {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 3 + static_cast<std::size_t>(trial % 3);
      const auto set = random_vectors(40, n, rng);
      const auto pruned = prune(set);
      CHECK(pruned.size() <= set.size());
      for (int s = 0; s < 1000; ++s) {
        const auto b = bt::random_belief(n, rng, s % 2 == 0);
        CHECK(std::abs(upper_envelope(set, b.probs()) - upper_envelope(pruned, b.probs())) <= 1e-9);
      }
      // Every survivor is best somewhere: nothing left is pointwise dominated.
      for (std::size_t i = 0; i < pruned.size(); ++i) {
        for (std::size_t j = 0; j < pruned.size(); ++j) {
          if (i == j) continue;
          bool dominated = true;
          for (std::size_t x = 0; x < n; ++x) dominated = dominated && pruned[j].values[x] >= pruned[i].values[x];
          CHECK_FALSE(dominated);
        }
      }
    }
  }
}

TEST_CASE("T = 1 collapses to greedy") {
  const auto cfg = bt::toy_config(6, 2, 2, 1, 1);
  const auto model = PomdpModel::from_config(cfg);
  const auto avs = solve_finite_horizon(model, 1);
  Rng rng = make_substream(33, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto b = bt::random_belief(model.n_states(), rng, trial % 4 == 0);
    CHECK(optimal_action(b, 1, avs, model) == greedy_action(b, model));
    CHECK(model.actions().index_of(optimal_action(b, 1, avs, model)) == bt::enumerate_greedy(model, b));
  }
}

TEST_CASE("solver matches the decision-tree oracle") {
  struct Case {
    int n_tx, n_paths, n_pilots, horizon;
    std::vector<double> d;
  };
  const std::vector<Case> cases{{3, 1, 1, 2, bt::perfect_table(1)},
                                {3, 1, 1, 3, {0.05, 0.9}},
                                {4, 1, 2, 3, {0.05, 0.7}},
                                {3, 2, 2, 2, {0.1, 0.6, 0.8}}};
  Rng rng = make_substream(34, 0);
  for (const auto& c : cases) {
    CAPTURE(c.n_tx);
    CAPTURE(c.horizon);
    const auto model = bt::table_model(bt::toy_config(c.n_tx, c.n_paths, c.n_pilots, 1, c.horizon), c.d);
    const auto avs = solve_finite_horizon(model, c.horizon);
    for (std::size_t s = 0; s < model.n_states(); ++s) {
      const auto b = Belief::point_mass(model.n_states(), s);
      CHECK(std::abs(avs.value(b.probs(), 1) - brute_force_value(model, b, c.horizon)) <= 1e-9);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const auto b = bt::random_belief(model.n_states(), rng);
      CHECK(std::abs(avs.value(b.probs(), 1) - brute_force_value(model, b, c.horizon)) <= 1e-9);
      const auto tree = brute_force_decision(model, b, c.horizon);
      if (tree.margin > 1e-9) {
        CHECK(model.actions().index_of(optimal_action(b, 1, avs, model)) == tree.action);
      }
      // Later slots are the shorter-horizon problems.
      for (int k = 2; k <= c.horizon; ++k) {
        CHECK(std::abs(avs.value(b.probs(), k) - brute_force_value(model, b, c.horizon - k + 1)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("uninformative observations give the open-loop optimum") {
  const auto cfg = bt::toy_config(4, 1, 2, 1, 3);
  const auto model = bt::table_model(cfg, {0.4, 0.4});
  const auto avs = solve_finite_horizon(model, 3);
  Rng rng = make_substream(35, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = bt::random_belief(model.n_states(), rng);
    const std::vector<double> v(b.probs().begin(), b.probs().end());
    CHECK(std::abs(avs.value(b.probs(), 1) - bt::open_loop_value(model, v, 3)) <= 1e-9);
  }
}

TEST_CASE("value function properties") {
  const auto model = bt::table_model(bt::toy_config(4, 1, 2, 1, 3), {0.05, 0.7});
  const auto avs = solve_finite_horizon(model, 3);
  Rng rng = make_substream(36, 0);

  SUBCASE("convex in the belief") {
    for (int trial = 0; trial < 500; ++trial) {
      const auto p = bt::random_belief(4, rng);
      const auto q = bt::random_belief(4, rng);
      const double lam = uniform01(rng);
      std::vector<double> mix(4);
      for (std::size_t i = 0; i < 4; ++i) mix[i] = lam * p[i] + (1.0 - lam) * q[i];
      CHECK(avs.value(mix, 1) <= lam * avs.value(p.probs(), 1) + (1.0 - lam) * avs.value(q.probs(), 1) + 1e-12);
    }
  }

  SUBCASE("more remaining slots never earn less") {
    for (int trial = 0; trial < 200; ++trial) {
      const auto b = bt::random_belief(4, rng);
      CHECK(avs.value(b.probs(), 1) >= avs.value(b.probs(), 2) - 1e-12);
      CHECK(avs.value(b.probs(), 2) >= avs.value(b.probs(), 3) - 1e-12);
    }
  }

  SUBCASE("no survivor is pointwise dominated") {
    for (int k = 1; k <= 3; ++k) {
      const auto& set = avs.slot(k);
      for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
          if (i == j) continue;
          bool dominated = true;
          for (std::size_t x = 0; x < 4; ++x) dominated = dominated && set[j].values[x] >= set[i].values[x];
          CHECK_FALSE(dominated);
        }
      }
    }
  }

  SUBCASE("known path is always probed") {
    const auto cfg = bt::toy_config(5, 1, 2, 1, 3);
    const auto pinned = bt::table_model(cfg, bt::identity_transition(5), bt::perfect_table(1));
    const auto solved = solve_finite_horizon(pinned, 3);
    for (int c = 0; c < 5; ++c) {
      for (int k = 1; k <= 3; ++k) CHECK(optimal_action(Belief::point_mass(5, static_cast<std::size_t>(c)), k, solved, pinned).contains(c));
    }
  }
}

TEST_CASE("worker count does not change the solution") {
  const auto model = bt::table_model(bt::toy_config(4, 1, 2, 1, 3), {0.05, 0.7});
  SolverOptions many;
  many.workers = 3;
  const auto a = solve_finite_horizon(model, 3);
  const auto b = solve_finite_horizon(model, 3, many);
  for (int k = 1; k <= 3; ++k) {
    REQUIRE(a.slot(k).size() == b.slot(k).size());
    for (std::size_t i = 0; i < a.slot(k).size(); ++i) {
      CHECK(a.slot(k)[i].action == b.slot(k)[i].action);
      CHECK(a.slot(k)[i].values == b.slot(k)[i].values);
    }
  }
}

TEST_CASE("budget guards") {
  const auto model = bt::table_model(bt::toy_config(4, 1, 2, 1, 3), {0.05, 0.7});
  SolverOptions tight;
  tight.stage_budget = 10;
  CHECK_THROWS_AS(solve_finite_horizon(model, 3, tight), BudgetExceeded);
  CHECK_NOTHROW(solve_finite_horizon(model, 1, tight));

  SolverOptions small;
  small.max_candidates = 4;
  small.workers = 2;
  CHECK_THROWS_AS(solve_finite_horizon(model, 3, small), BudgetExceeded);
  CHECK_THROWS_AS(solve_finite_horizon(model, 0), std::invalid_argument);
}

TEST_CASE("alpha vector file round trip") {
  const auto model = bt::table_model(bt::toy_config(4, 1, 2, 1, 3), {0.05, 0.7});
  const auto avs = solve_finite_horizon(model, 3);
  std::stringstream buffer;
  write_alpha_vectors(buffer, avs);
  const auto back = read_alpha_vectors(buffer);
  CHECK(back.horizon() == 3);
  CHECK(back.n_states() == avs.n_states());
  CHECK(back.n_actions() == avs.n_actions());
  CHECK(back.config_hash() == model.fingerprint());
  for (int k = 1; k <= 3; ++k) {
    REQUIRE(back.slot(k).size() == avs.slot(k).size());
    for (std::size_t i = 0; i < avs.slot(k).size(); ++i) {
      CHECK(back.slot(k)[i].action == avs.slot(k)[i].action);
      CHECK(back.slot(k)[i].values == avs.slot(k)[i].values);
    }
  }

  SUBCASE("malformed input is rejected") {
    std::string text = buffer.str();
    std::istringstream bad_magic("beampomdp-alpha-vectors 9\n");
    CHECK_THROWS(read_alpha_vectors(bad_magic));
    std::stringstream full;
    write_alpha_vectors(full, avs);
    std::string truncated = full.str();
    truncated.resize(truncated.size() / 2);
    std::istringstream cut(truncated);
    CHECK_THROWS(read_alpha_vectors(cut));
  }
}
