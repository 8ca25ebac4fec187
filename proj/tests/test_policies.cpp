// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "beampomdp/policies.hpp"
#include "beampomdp/solver.hpp"
#include "test_support.hpp"

using namespace beampomdp;
namespace bt = beampomdp::testing;

TEST_CASE("greedy matches enumeration") {
  SUBCASE("path-count reward, N_t = 8, M_p = 4") {
    auto cfg = bt::toy_config(8, 2, 4, 1);
    const auto model = PomdpModel::from_config(cfg);
    Rng rng = make_substream(41, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto b = bt::random_belief(model.n_states(), rng, trial % 2 == 1);
      CHECK(model.actions().index_of(greedy_action(b, model)) == bt::enumerate_greedy(model, b));
    }
  }

  SUBCASE("MRC reward") {
    auto cfg = bt::toy_config(6, 2, 3, 1);
    cfg.reward = RewardKind::mrc;
    const auto model = PomdpModel::from_config(cfg);
    Rng rng = make_substream(41, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = bt::random_belief(model.n_states(), rng);
      CHECK(model.actions().index_of(greedy_action(b, model)) == bt::enumerate_greedy(model, b));
    }
  }
}

TEST_CASE("greedy tie-breaking") {
  SUBCASE("all columns alike gives the first action") {
    const auto cfg = bt::toy_config(6, 2, 3, 1);
    const auto model = bt::table_model(cfg, bt::uniform_transition(6), {0.05, 0.7, 0.8});
    CHECK(greedy_action(Belief::uniform(36), model) == ActionVector{{0, 1, 2}});
  }

  SUBCASE("known column plus the smallest others") {
    const auto cfg = bt::toy_config(6, 1, 3, 1);
    const auto model = bt::table_model(cfg, bt::identity_transition(6), bt::perfect_table(1));
    CHECK(greedy_action(Belief::point_mass(6, 4), model) == ActionVector{{0, 1, 4}});
    CHECK(greedy_action(Belief::point_mass(6, 1), model) == ActionVector{{0, 1, 2}});
  }
}

TEST_CASE("random action") {
  SUBCASE("uniform over 70 actions") {
    const auto cfg = bt::toy_config(8, 2, 4, 1);
    const auto model = std::make_shared<const PomdpModel>(PomdpModel::from_config(cfg));
    RandomPolicy policy(model);
    Rng rng = make_substream(42, 0);
    const int draws = 100'000;
    std::vector<int> counts(70, 0);
    for (int i = 0; i < draws; ++i) ++counts[model->actions().index_of(policy.choose(Belief::uniform(64), 1, rng))];
    const double expected = draws / 70.0;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 99.23);  // 0.99 quantile, 69 degrees of freedom
  }

  SUBCASE("full sweep when M_p = N_t") {
    const ActionSpace space(5, 5);
    Rng rng = make_substream(42, 1);
    for (int i = 0; i < 20; ++i) CHECK(random_action(space, rng) == ActionVector{{0, 1, 2, 3, 4}});
  }

  SUBCASE("deterministic for a fixed stream") {
    const ActionSpace space(8, 4);
    Rng a = make_substream(42, 2);
    Rng b = make_substream(42, 2);
    for (int i = 0; i < 100; ++i) CHECK(random_action(space, a) == random_action(space, b));
  }
}

TEST_CASE("tracking order") {
  const auto tm = build_banded_transition(16, 0.5, 2);
  const auto order = tracking_order(tm, 8);
  CHECK(std::vector<int>(order.begin(), order.begin() + 5) == std::vector<int>{8, 7, 9, 6, 10});
  const auto edge = tracking_order(tm, 0);
  CHECK(edge.front() == 0);
  CHECK(edge[1] == 1);
}

TEST_CASE("heuristic tracker") {
  const auto tm = build_banded_transition(16, 0.5, 2);

  SUBCASE("detected path gets its three likeliest columns") {
    TrackerState state{{8, 2}, {true, true}, {}};
    const auto a = heuristic_tracker(state, tm, 6);
    CHECK(a == ActionVector{{1, 2, 3, 7, 8, 9}});
    CHECK(state.pilots[0] == std::vector<int>{8, 7, 9});
    CHECK(state.pilots[1] == std::vector<int>{2, 1, 3});
  }

  SUBCASE("overlapping paths extend down their rankings") {
    TrackerState state{{8, 9}, {true, true}, {}};
    const auto a = heuristic_tracker(state, tm, 6);
    CHECK(a.size() == 6);
    CHECK(state.pilots[0] == std::vector<int>{8, 7, 9});
    CHECK(state.pilots[1] == std::vector<int>{10, 11, 6});
  }

  SUBCASE("a double miss repeats the previous action") {
    TrackerState state{{8, 2}, {true, true}, {}};
    const auto first = heuristic_tracker(state, tm, 6);
    state.detected = {false, false};
    CHECK(heuristic_tracker(state, tm, 6) == first);
    CHECK(heuristic_tracker(state, tm, 6) == first);
  }

  SUBCASE("single miss keeps that path's pilots") {
    TrackerState state{{8, 2}, {true, true}, {}};
    heuristic_tracker(state, tm, 6);
    state.detected = {false, true};
    state.anchors = {8, 3};
    const auto a = heuristic_tracker(state, tm, 6);
    CHECK(state.pilots[0] == std::vector<int>{8, 7, 9});
    CHECK(state.pilots[1] == std::vector<int>{3, 2, 4});
    CHECK(a == ActionVector{{2, 3, 4, 7, 8, 9}});
  }

  SUBCASE("identity transitions pin the pilots") {
    auto cfg = bt::toy_config(8, 2, 2, 1, 6);
    const auto model = std::make_shared<const PomdpModel>(
        bt::table_model(cfg, bt::identity_transition(8), bt::perfect_table(2)));
    TrackerPolicy policy(model);
    policy.begin_episode(model->states().state(model->states().index_of(std::vector<int>{2, 5})));
    Rng rng = make_substream(43, 0);
    for (int k = 1; k <= 6; ++k) {
      const auto a = policy.choose(Belief::uniform(64), k, rng);
      CHECK(a == ActionVector{{2, 5}});
      SenseResult fb{{0b11, 2}, {{0, 0, 2, {1.0, 0.0}}, {1, 1, 5, {1.0, 0.0}}}};
      policy.observe(a, fb);
    }
  }

  SUBCASE("the tracker moves to the strongest fired pilot") {
    auto cfg = bt::toy_config(16, 1, 3, 2, 3);
    const auto model = std::make_shared<const PomdpModel>(PomdpModel::from_config(cfg));
    TrackerPolicy policy(model);
    policy.begin_episode(CompositeState{{8}, 8});
    Rng rng = make_substream(43, 1);
    const auto a = policy.choose(Belief::uniform(16), 1, rng);
    CHECK(a == ActionVector{{7, 8, 9}});
    SenseResult fb{{0b101, 3}, {{0, 0, 7, {0.3, 0.0}}, {2, 1, 9, {0.0, 0.9}}}};
    policy.observe(a, fb);
    CHECK(policy.state().anchors[0] == 9);
    CHECK(policy.choose(Belief::uniform(16), 2, rng) == ActionVector{{8, 9, 10}});
  }
}

TEST_CASE("optimal policy") {
  const auto cfg = bt::toy_config(4, 1, 2, 1, 3);
  const auto model = std::make_shared<const PomdpModel>(bt::table_model(cfg, {0.05, 0.7}));
  const auto avs = std::make_shared<const AlphaVectorSet>(solve_finite_horizon(*model, 3));

  SUBCASE("follows the solved vectors") {
    OptimalPolicy policy(model, avs);
    Rng rng = make_substream(44, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto b = bt::random_belief(4, rng);
      for (int k = 1; k <= 3; ++k) CHECK(policy.choose(b, k, rng) == optimal_action(b, k, *avs, *model));
    }
  }

  SUBCASE("rejects a policy for another model") {
    const auto other = std::make_shared<const PomdpModel>(bt::table_model(cfg, {0.05, 0.8}));
    CHECK_THROWS_AS(OptimalPolicy(other, avs), std::invalid_argument);
    const auto bigger = std::make_shared<const PomdpModel>(bt::table_model(bt::toy_config(5, 1, 2, 1, 3), {0.05, 0.7}));
    CHECK_THROWS_AS(OptimalPolicy(bigger, avs), std::invalid_argument);
  }

  SUBCASE("a longer policy plays its last slots") {
    const auto shorter = std::make_shared<const PomdpModel>(bt::table_model(bt::toy_config(4, 1, 2, 1, 2), {0.05, 0.7}));
    OptimalPolicy policy(shorter, avs);
    Rng rng = make_substream(44, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = bt::random_belief(4, rng);
      CHECK(policy.choose(b, 1, rng) == optimal_action(b, 2, *avs, *shorter));
      CHECK(policy.choose(b, 2, rng) == optimal_action(b, 3, *avs, *shorter));
    }
    const auto longer = std::make_shared<const PomdpModel>(bt::table_model(bt::toy_config(4, 1, 2, 1, 4), {0.05, 0.7}));
    CHECK_THROWS_AS(OptimalPolicy(longer, avs), std::invalid_argument);
  }

  SUBCASE("seed and prior do not change the fingerprint") {
    auto changed = cfg;
    changed.seed = 99;
    changed.prior = PriorKind::uniform;
    const auto same = std::make_shared<const PomdpModel>(bt::table_model(changed, {0.05, 0.7}));
    CHECK_NOTHROW(OptimalPolicy(same, avs));
  }
}
