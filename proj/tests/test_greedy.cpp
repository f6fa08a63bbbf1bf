#include <doctest.h>

#include "osp/errors.hpp"
#include "osp/greedy.hpp"
#include "testutil.hpp"

using namespace osp;

namespace {

PriorityTable simple_table(
    std::vector<std::tuple<int, Direction, Rational, int>> entries) {
  PriorityTable t;
  for (auto& [agent, dir, type, rank] : entries)
    t.add(PriorityEntry{agent, dir, type, true, {}, Rational(rank)});
  return t;
}

// The sentence the thm8 two-way schedule implements: return the pair side
// exactly when the singleton bids 36, some pair member bids 10, and no pair
// member bids 36.
Mask thm8_rule(const TypeProfile& p) {
  const bool pair_has_ten = p[1] == 10 || p[2] == 10;
  const bool pair_has_top = p[1] == 36 || p[2] == 36;
  if (pair_has_ten && !pair_has_top && p[0] == 36) return 0b110u;
  return 0b001u;
}

// The sentence behind the thm9 ordering: pair side when it holds a top bid
// or the singleton bids the minimum; singleton side when a pair member bids
// the minimum; pair side otherwise.
Mask thm9_rule(const SetSystemInstance& inst, const TypeProfile& p) {
  const Rational tmin = inst.domains[0].values[0];
  const Rational tmax = inst.domains[0].values[2];
  if (p[1] == tmax || p[2] == tmax || p[0] == tmin) return 0b110u;
  if (p[1] == tmin || p[2] == tmin) return 0b001u;
  return 0b110u;
}

// Literal transcription of the adaptive dc-gap schedule's control flow.
Mask alg4_rule(int k, const SetSystemInstance& inst, const TypeProfile& p) {
  const Rational tmin = inst.domains[0].values[0];
  const Rational tmed = inst.domains[0].values[1];
  const Rational tmax = inst.domains[0].values[2];
  const Mask T = ((1u << k) - 1) << 1;
  for (int i = 1; i <= k; ++i)
    if (p[i] == tmax) return T;
  if (p[0] == tmin) return T;
  Mask excluded = 0;
  int jstar = -1;
  for (int j = 1; j <= k; ++j) {
    if (p[j] == tmin) {
      excluded |= 1u << j;
      if (mask_size(excluded) == k / 2) {
        jstar = j;
        break;
      }
    } else if (p[0] == tmed) {
      return T & ~excluded;
    }
  }
  if (jstar < 0) return T & ~excluded;
  if (p[0] == tmax) return 0b1u;
  // p[0] == tmed and the first k/2 members all bid the minimum.
  for (int j = jstar + 1; j <= k; ++j)
    if (p[j] == tmed) return T & ~excluded;
  return 0b1u;
}

}  // namespace

TEST_CASE("forward greedy commits the singleton first when it outranks") {
  const auto inst = make_sc_parallel();
  auto t = simple_table({{0, Direction::In, 10, 300},
                         {0, Direction::In, 22, 299},
                         {0, Direction::In, 36, 298},
                         {1, Direction::In, 10, 200},
                         {1, Direction::In, 22, 199},
                         {1, Direction::In, 36, 198},
                         {2, Direction::In, 10, 100},
                         {2, Direction::In, 22, 99},
                         {2, Direction::In, 36, 98}});
  auto trace = forward_greedy(inst, t, {36, 10, 10});
  CHECK(trace.final_solution.selected == 0b001u);
  CHECK(objective_value(inst, {36, 10, 10}, trace.final_solution) == 36);
}

TEST_CASE("reverse greedy drops the top-ranked exclusion first") {
  const auto inst = make_sc_parallel();
  auto t = simple_table({{0, Direction::Out, 36, 300},
                         {0, Direction::Out, 22, 299},
                         {0, Direction::Out, 10, 298},
                         {1, Direction::Out, 36, 200},
                         {1, Direction::Out, 22, 199},
                         {1, Direction::Out, 10, 198},
                         {2, Direction::Out, 36, 100},
                         {2, Direction::Out, 22, 99},
                         {2, Direction::Out, 10, 98}});
  auto trace = reverse_greedy(inst, t, {36, 22, 22});
  CHECK(trace.final_solution.selected == 0b110u);
  CHECK(objective_value(inst, {36, 22, 22}, trace.final_solution) == 44);
  CHECK(trace.steps.size() == 1);
  CHECK(trace.steps[0].agent == 0);
  CHECK(trace.steps[0].action == StepAction::Committed);
}

TEST_CASE("single feasible set returns immediately") {
  SetSystemInstance inst;
  inst.n = 2;
  inst.orientation = Orientation::Cost;
  inst.domains.assign(2, AgentDomain{{1, 2}});
  inst.family = FeasibleFamily::make_explicit({0b01u});
  PriorityTable empty;
  for (auto kind :
       {EngineKind::Forward, EngineKind::Reverse, EngineKind::TwoWay}) {
    auto trace = run_engine(kind, inst, empty, {1, 2});
    CHECK(trace.final_solution.selected == 0b01u);
    CHECK(trace.steps.empty());
  }
}

TEST_CASE("thm8 two-way table reproduces its sentence on all profiles") {
  const auto inst = make_sc_parallel();
  const auto table = make_thm8_two_way_table();
  for (const auto& p : testutil::all_profiles(inst)) {
    auto trace = two_way_greedy(inst, table, p);
    CHECK(trace.final_solution.selected == thm8_rule(p));
  }
  auto trace = two_way_greedy(inst, table, {22, 10, 10});
  CHECK(trace.final_solution.selected == 0b001u);
  CHECK(objective_value(inst, {22, 10, 10}, trace.final_solution) == 22);
}

TEST_CASE("thm9 ordering reproduces its sentence on all profiles") {
  const auto inst = make_sw_parallel();
  const auto table = make_thm9_ordering_table();
  for (const auto& p : testutil::all_profiles(inst)) {
    auto trace = two_way_greedy(inst, table, p);
    CHECK(trace.final_solution.selected == thm9_rule(inst, p));
  }
  const Rational tmed = inst.domains[0].values[1];
  const Rational tmin = inst.domains[0].values[0];
  const Rational tmax = inst.domains[0].values[2];
  auto trace = two_way_greedy(inst, table, {tmed, tmax, tmin});
  CHECK(trace.final_solution.selected == 0b110u);
}

TEST_CASE("pure-direction tables collapse the two-way engine") {
  testutil::Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = testutil::random_instance(rng);
    const auto in_only = testutil::random_monotone_table(rng, inst, false);
    for (const auto& p : testutil::all_profiles(inst)) {
      auto fwd = forward_greedy(inst, in_only, p);
      auto two = two_way_greedy(inst, in_only, p);
      CHECK(fwd.final_solution.selected == two.final_solution.selected);
      CHECK(fwd.steps.size() == two.steps.size());
    }
  }
}

TEST_CASE("engines are deterministic and respect the step bound") {
  testutil::Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = testutil::random_instance(rng);
    const auto table = testutil::random_monotone_table(rng, inst);
    for (const auto& p : testutil::all_profiles(inst)) {
      auto a = two_way_greedy(inst, table, p);
      auto b = two_way_greedy(inst, table, p);
      CHECK(a.final_solution.selected == b.final_solution.selected);
      CHECK(a.steps.size() <= 2 * static_cast<size_t>(inst.n));
      CHECK(is_feasible(inst, a.final_solution.selected));
    }
  }
}

TEST_CASE("winner monotonicity for all-monotone in-tables") {
  testutil::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testutil::random_instance(rng);
    const auto table = testutil::random_monotone_table(rng, inst, false);
    ProfileSpace space(inst);
    for (long long id = 0; id < space.total; ++id) {
      auto idx = space.indices_at(id);
      const TypeProfile p = profile_from_indices(inst, idx);
      auto base = forward_greedy(inst, table, p);
      for (int i = 0; i < inst.n; ++i) {
        if (!base.final_solution.contains(i)) continue;
        for (int t = 0; t < inst.domains[i].size(); ++t) {
          if (!better_type(inst.orientation, inst.domains[i].values[t],
                           p[i]))
            continue;
          TypeProfile better = p;
          better[i] = inst.domains[i].values[t];
          auto improved = forward_greedy(inst, table, better);
          CHECK(improved.final_solution.contains(i));
        }
      }
    }
  }
}

TEST_CASE("missing priorities fail loudly under the strict policy") {
  const auto inst = make_sc_parallel();
  auto t = simple_table({{0, Direction::Out, 36, 10}});
  t.policy = MissingPolicy::FailOnMissing;
  CHECK_THROWS_AS(forward_greedy(inst, t, {36, 10, 10}), MissingPriority);
}

TEST_CASE("duplicate ranks and duplicate keys are rejected") {
  PriorityTable t;
  t.add(PriorityEntry{0, Direction::In, 1, true, {}, 5});
  CHECK_THROWS_AS(
      t.add(PriorityEntry{1, Direction::In, 1, true, {}, 5}),
      InvalidParams);
  CHECK_THROWS_AS(
      t.add(PriorityEntry{0, Direction::In, 1, true, {}, 6}),
      InvalidParams);
}

TEST_CASE("all-monotonicity checker") {
  const auto inst = make_sc_parallel();
  auto good = simple_table(
      {{0, Direction::In, 10, 20}, {0, Direction::In, 22, 10}});
  CHECK(check_all_monotone(inst, good).ok);

  auto bad = simple_table(
      {{0, Direction::In, 10, 10}, {0, Direction::In, 22, 20}});
  auto rep = check_all_monotone(inst, bad);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violation->agent == 0);
  CHECK(rep.violation->dir == Direction::In);
  CHECK(rep.violation->better_type == 10);
  CHECK(rep.violation->worse_type == 22);

  const auto asym = make_asym_knapsack(4, 0, Rational(1, 2), 1);
  CHECK(check_all_monotone(asym, make_alg5_table(4, 0, Rational(1, 2), 1)).ok);
  CHECK(check_all_monotone(make_dc_gap(4), make_alg4_table(4)).ok);
  CHECK(check_all_monotone(inst, make_thm8_two_way_table()).ok);
}

TEST_CASE("interleaving checker") {
  const auto sc = make_sc_parallel();
  CHECK(check_interleaving(sc, make_thm8_two_way_table()).ok);
  const auto sw = make_sw_parallel();
  CHECK(check_interleaving(sw, make_thm9_ordering_table()).ok);

  // Pure-in tables have no direction change at all.
  testutil::Rng rng(3);
  const auto inst = testutil::random_instance(rng);
  CHECK(check_interleaving(inst, testutil::random_monotone_table(rng, inst,
                                                                 false))
            .ok);

  // Four-type valuation domain: after agent 0 switches direction, two of
  // her unexplored types rank below agent 1's unexplored type.
  SetSystemInstance four;
  four.n = 2;
  four.orientation = Orientation::Valuation;
  four.domains.assign(2, AgentDomain{{1, 2, 3, 4}});
  four.family = FeasibleFamily::make_parallel({0b01u, 0b10u});
  four.validate();
  auto bad = simple_table({{0, Direction::In, 4, 100},
                           {0, Direction::Out, 1, 90},
                           {0, Direction::In, 3, 20},
                           {0, Direction::In, 2, 10},
                           {1, Direction::In, 4, 95},
                           {1, Direction::In, 3, 50},
                           {1, Direction::In, 2, 15},
                           {1, Direction::In, 1, 5}});
  CHECK_FALSE(check_interleaving(four, bad).ok);

  // Same shape, but the unexplored types of agent 0 outrank agent 1's
  // remaining types: admissible.
  auto ok = simple_table({{0, Direction::In, 4, 100},
                          {0, Direction::Out, 1, 90},
                          {0, Direction::In, 3, 80},
                          {0, Direction::Out, 3, 79},
                          {0, Direction::In, 2, 78},
                          {0, Direction::Out, 2, 77},
                          {1, Direction::In, 4, 95},
                          {1, Direction::In, 3, 50},
                          {1, Direction::In, 2, 15},
                          {1, Direction::In, 1, 5}});
  CHECK(check_interleaving(four, ok).ok);
}

TEST_CASE("triangle matroid greedy matches the optimum both ways") {
  const auto inst = make_triangle_matroid();
  // Kruskal order: lowest cost first.
  PriorityTable fwd;
  int rank = 100;
  for (int v = 1; v <= 3; ++v)
    for (int agent = 0; agent < 3; ++agent)
      fwd.add(PriorityEntry{agent, Direction::In, v, true, {},
                            Rational(rank--)});
  // Reverse-delete: highest cost dropped first.
  PriorityTable rev;
  rank = 100;
  for (int v = 3; v >= 1; --v)
    for (int agent = 0; agent < 3; ++agent)
      rev.add(PriorityEntry{agent, Direction::Out, v, true, {},
                            Rational(rank--)});
  for (const auto& p : testutil::all_profiles(inst)) {
    auto [opt_sol, opt] = brute_force_optimum(inst, p);
    auto f = forward_greedy(inst, fwd, p);
    auto r = reverse_greedy(inst, rev, p);
    CHECK(objective_value(inst, p, f.final_solution) == opt);
    CHECK(objective_value(inst, p, r.final_solution) == opt);
  }
  auto f = forward_greedy(inst, fwd, {1, 2, 3});
  CHECK(f.final_solution.selected == 0b011u);
  CHECK(objective_value(inst, {1, 2, 3}, f.final_solution) == 3);
}

TEST_CASE("adaptive dc-gap schedule equals its control flow everywhere") {
  for (int k : {4, 6}) {
    const auto inst = make_dc_gap(k);
    const auto table = make_alg4_table(k);
    for (const auto& p : testutil::all_profiles(inst)) {
      auto trace = two_way_greedy(inst, table, p);
      CHECK(trace.final_solution.selected == alg4_rule(k, inst, p));
    }
  }
}

TEST_CASE("alg5 bands and the boundary branch") {
  const auto table = make_alg5_table(4, 0, Rational(1, 2), 1);
  // Top valuations of the pool sit above every other entry.
  Rational top_band_min = 0;
  for (const auto& e : table.entries())
    if (e.dir == Direction::In && e.agent >= 1 && e.type == 1)
      if (top_band_min == 0 || e.rank < top_band_min) top_band_min = e.rank;
  for (const auto& e : table.entries())
    if (!(e.agent >= 1 && e.type == 1 && e.dir == Direction::In))
      CHECK(e.rank < top_band_min);
  CHECK_THROWS_AS(make_alg5_table(1, 0, Rational(1, 2), 1), InvalidParams);
  CHECK_THROWS_AS(make_alg5_table(4, 1, Rational(1, 2), 1), InvalidParams);
}

TEST_CASE("unknown table ids are rejected") {
  CHECK_THROWS_AS(make_paper_priority_table("nope"), UnknownId);
  CHECK_THROWS_AS(make_paper_priority_table("alg4"), InvalidParams);
}
