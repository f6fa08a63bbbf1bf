#include <doctest.h>

#include "osp/errors.hpp"
#include "osp/ospgraph.hpp"
#include "osp/tree.hpp"
#include "testutil.hpp"

using namespace osp;

namespace {

// Two-type single-agent instance with f(a) = 1, f(b) = 0, realized by an
// in-entry on the low type and an out-entry topping the in-entry on the
// high type.
SetSystemInstance one_agent_instance() {
  SetSystemInstance inst;
  inst.n = 1;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{3, 5}}};
  inst.family = FeasibleFamily::make_explicit({0b0u, 0b1u});
  inst.validate();
  return inst;
}

PriorityTable one_agent_table() {
  PriorityTable t;
  t.add(PriorityEntry{0, Direction::In, 3, true, {}, 100});
  t.add(PriorityEntry{0, Direction::Out, 5, true, {}, 90});
  t.add(PriorityEntry{0, Direction::In, 5, true, {}, 10});
  t.add(PriorityEntry{0, Direction::Out, 3, true, {}, 9});
  return t;
}

bool outcomes_equal(const SetSystemInstance& inst,
                    const ImplementationTree& a, const ImplementationTree& b) {
  for (const auto& p : testutil::all_profiles(inst))
    if (run_mechanism(inst, a, p).solution.selected !=
        run_mechanism(inst, b, p).solution.selected)
      return false;
  return true;
}

long long leaf_profile_total(const SetSystemInstance& inst,
                             const ImplementationTree& tree) {
  long long total = 0;
  for (int id = 0; id < tree.size(); ++id) {
    const auto& nd = tree.node(id);
    if (!nd.is_leaf()) continue;
    long long count = 1;
    for (const auto& d : nd.sub) count *= static_cast<long long>(d.size());
    total += count;
  }
  return total;
}

// Single-minded auction tree: ask each bidder in turn for the top
// valuation and stop at the first yes; the two compatible singles win
// unless the bundle bidder alone says yes.
ImplementationTree appendix_b_tree(const SetSystemInstance& inst) {
  ImplementationTree tree;
  auto leaf = [&](std::vector<std::vector<int>> sub, Mask m) {
    TreeNode nd;
    nd.sub = std::move(sub);
    nd.outcome = Solution{m};
    tree.nodes.push_back(std::move(nd));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  auto ask_top = [&](int agent, std::vector<std::vector<int>> sub, int yes,
                     int no) {
    TreeNode nd;
    nd.agent = agent;
    nd.sub = std::move(sub);
    nd.parts = {{2}, {0, 1}};
    nd.children = {yes, no};
    tree.nodes.push_back(std::move(nd));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  const std::vector<int> full{0, 1, 2}, low{0, 1}, top{2};
  const int c_yes = leaf({low, low, top}, 0b100u);
  const int c_no = leaf({low, low, low}, 0b011u);
  const int node_c = ask_top(2, {low, low, full}, c_yes, c_no);
  const int b_yes = leaf({low, top, full}, 0b011u);
  const int node_b = ask_top(1, {low, full, full}, b_yes, node_c);
  const int a_yes = leaf({top, full, full}, 0b011u);
  tree.root = ask_top(0, {full, full, full}, a_yes, node_b);
  tree.validate(inst);
  return tree;
}

}  // namespace

TEST_CASE("run_mechanism walks the unique compatible path") {
  const auto inst = one_agent_instance();
  ImplementationTree tree;
  TreeNode root;
  root.agent = 0;
  root.sub = {{0, 1}};
  root.parts = {{0}, {1}};
  TreeNode left, right;
  left.sub = {{0}};
  left.outcome = Solution{0b1u};
  right.sub = {{1}};
  right.outcome = Solution{0};
  tree.nodes = {root, left, right};
  tree.nodes[0].children = {1, 2};
  tree.root = 0;
  tree.validate(inst);
  CHECK(run_mechanism(inst, tree, {3}).solution.selected == 0b1u);
  CHECK(run_mechanism(inst, tree, {5}).solution.selected == 0);
  CHECK_THROWS_AS(run_mechanism(inst, tree, {4}), InvalidParams);
}

TEST_CASE("build from a single-agent in-table gives one bottom query") {
  const auto inst = one_agent_instance();
  const auto tree = build_tree_from_table(inst, one_agent_table());
  REQUIRE(tree.size() == 3);
  const auto& root = tree.node(tree.root);
  CHECK(root.agent == 0);
  CHECK(root.parts == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(query_kind(tree, tree.root) == QueryKind::Bottom);
  CHECK(run_mechanism(inst, tree, {3}).solution.selected == 0b1u);
  CHECK(run_mechanism(inst, tree, {5}).solution.selected == 0);
}

TEST_CASE("trees built from tables replay the engines exactly") {
  const auto sc = make_sc_parallel();
  SUBCASE("two-way table") {
    const auto table = make_thm8_two_way_table();
    const auto tree = build_tree_from_table(sc, table);
    CHECK(is_extremal(tree));
    for (const auto& p : testutil::all_profiles(sc))
      CHECK(run_mechanism(sc, tree, p).solution.selected ==
            two_way_greedy(sc, table, p).final_solution.selected);
    CHECK(check_weak_interleaving(sc, tree).ok);
    CHECK(check_admissible_queries(sc, tree).ok);
    CHECK(leaf_profile_total(sc, tree) == 27);
  }
  SUBCASE("pure-in table uses only bottom queries on a cost instance") {
    PriorityTable t;
    int rank = 100;
    for (int agent = 0; agent < 3; ++agent)
      for (const auto& v : sc.domains[agent].values)
        t.add(PriorityEntry{agent, Direction::In, v, true, {},
                            Rational(rank--)});
    const auto tree = build_tree_from_table(sc, t);
    for (int id = 0; id < tree.size(); ++id)
      if (!tree.node(id).is_leaf())
        CHECK(query_kind(tree, id) == QueryKind::Bottom);
    for (const auto& p : testutil::all_profiles(sc))
      CHECK(run_mechanism(sc, tree, p).solution.selected ==
            forward_greedy(sc, t, p).final_solution.selected);
  }
  SUBCASE("thm9 ordering") {
    const auto sw = make_sw_parallel();
    const auto table = make_thm9_ordering_table();
    const auto tree = build_tree_from_table(sw, table);
    for (const auto& p : testutil::all_profiles(sw))
      CHECK(run_mechanism(sw, tree, p).solution.selected ==
            two_way_greedy(sw, table, p).final_solution.selected);
    CHECK(is_extremal(tree));
    CHECK(check_weak_interleaving(sw, tree).ok);
  }
}

TEST_CASE("build rejects non-monotone tables") {
  const auto inst = make_sc_parallel();
  PriorityTable t;
  t.add(PriorityEntry{0, Direction::In, 22, true, {}, 100});
  t.add(PriorityEntry{0, Direction::In, 10, true, {}, 50});
  CHECK_THROWS_AS(build_tree_from_table(inst, t), MonotonicityViolation);
}

TEST_CASE("classification of types") {
  const auto inst = one_agent_instance();
  const auto tree = build_tree_from_table(inst, one_agent_table());
  OutcomeTable outcomes(inst, tree);
  auto classes = classify_types(inst, tree, tree.root, outcomes);
  CHECK(classes == std::vector<TypeClass>{TypeClass::Always1,
                                          TypeClass::Always0});

  // A node whose both children always select the agent.
  const auto app = make_ca_appendix_b();
  const auto atree = appendix_b_tree(app);
  OutcomeTable ao(app, atree);
  // Root queries bidder 0 at tmax; bidder 0's top type always wins.
  auto aclasses = classify_types(app, atree, atree.root, ao);
  CHECK(aclasses.back() == TypeClass::Always1);
}

TEST_CASE("revealable shapes") {
  using C = TypeClass;
  CHECK(revealable_shape({C::Always1, C::Always1}));
  CHECK(revealable_shape({C::Always1, C::Unclear, C::Always0}));
  CHECK(revealable_shape({C::Unclear}));
  CHECK(revealable_shape({C::Always1, C::Always0}));
  CHECK_FALSE(revealable_shape({C::Unclear, C::Unclear}));
  CHECK_FALSE(revealable_shape({C::Always0, C::Always1}));
  CHECK_FALSE(revealable_shape({C::Unclear, C::Always1, C::Always0}));
}

TEST_CASE("admissible queries reject an even-type split with mixed parts") {
  // Agent 0 has domain {1,2,5,6,7}; the query "is your type even" splits
  // {1,5,7} vs {2,6} and both sides stay undetermined via agent 1.
  SetSystemInstance inst;
  inst.n = 2;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{1, 2, 5, 6, 7}}, AgentDomain{{1, 2}}};
  inst.family = FeasibleFamily::make_explicit({0b00u, 0b01u});
  inst.validate();
  ImplementationTree tree;
  TreeNode root;
  root.agent = 0;
  root.sub = {{0, 1, 2, 3, 4}, {0, 1}};
  root.parts = {{0, 2, 4}, {1, 3}};
  TreeNode probe_l, probe_r;
  probe_l.agent = 1;
  probe_l.sub = {{0, 2, 4}, {0, 1}};
  probe_l.parts = {{0}, {1}};
  probe_r.agent = 1;
  probe_r.sub = {{1, 3}, {0, 1}};
  probe_r.parts = {{0}, {1}};
  TreeNode win_l, lose_l, win_r, lose_r;
  win_l.sub = {{0, 2, 4}, {0}};
  win_l.outcome = Solution{0b01u};
  lose_l.sub = {{0, 2, 4}, {1}};
  lose_l.outcome = Solution{0};
  win_r.sub = {{1, 3}, {0}};
  win_r.outcome = Solution{0b01u};
  lose_r.sub = {{1, 3}, {1}};
  lose_r.outcome = Solution{0};
  tree.nodes = {root, probe_l, probe_r, win_l, lose_l, win_r, lose_r};
  tree.nodes[0].children = {1, 2};
  tree.nodes[1].children = {3, 4};
  tree.nodes[2].children = {5, 6};
  tree.root = 0;
  tree.validate(inst);
  auto check = check_admissible_queries(inst, tree);
  CHECK_FALSE(check.ok);
  CHECK(check.node == 0);
}

TEST_CASE("binarize replaces k-ary nodes by chains") {
  SetSystemInstance inst;
  inst.n = 1;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{1, 2, 3}}};
  inst.family = FeasibleFamily::make_explicit({0b0u, 0b1u});
  ImplementationTree tree;
  TreeNode root;
  root.agent = 0;
  root.sub = {{0, 1, 2}};
  root.parts = {{0}, {1}, {2}};
  TreeNode l0, l1, l2;
  l0.sub = {{0}};
  l0.outcome = Solution{0b1u};
  l1.sub = {{1}};
  l1.outcome = Solution{0};
  l2.sub = {{2}};
  l2.outcome = Solution{0b1u};
  tree.nodes = {root, l0, l1, l2};
  tree.nodes[0].children = {1, 2, 3};
  tree.root = 0;
  tree.validate(inst);

  const auto bin = binarize(inst, tree);
  for (int id = 0; id < bin.size(); ++id)
    if (!bin.node(id).is_leaf()) CHECK(bin.node(id).parts.size() == 2);
  CHECK(outcomes_equal(inst, tree, bin));
  CHECK(bin.node(bin.root).parts[0] == std::vector<int>{0});
  CHECK(bin.node(bin.root).parts[1] == std::vector<int>{1, 2});

  // Already-binary trees come back structurally identical.
  const auto again = binarize(inst, bin);
  REQUIRE(again.size() == bin.size());
  for (int id = 0; id < bin.size(); ++id) {
    CHECK(again.node(id).agent == bin.node(id).agent);
    CHECK(again.node(id).parts == bin.node(id).parts);
    CHECK(again.node(id).children == bin.node(id).children);
  }
}

TEST_CASE("binarize preserves outcomes on random k-ary trees") {
  testutil::Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testutil::random_instance(rng, 3, 4);
    const auto tree = testutil::random_tree(rng, inst, 0.3, 4);
    const auto bin = binarize(inst, tree);
    CHECK(outcomes_equal(inst, tree, bin));
    CHECK(leaf_profile_total(inst, bin) == ProfileSpace(inst).total);
  }
}

TEST_CASE("extremalize rewrites a homogeneous middle split into top peels") {
  // Domain {1,2,3,4}; split {1,3} vs {2,4}; every type >= 2 is Always0, so
  // the transformation peels 4, 3, 2 from the top and keeps the {1} branch.
  SetSystemInstance inst;
  inst.n = 1;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{1, 2, 3, 4}}};
  inst.family = FeasibleFamily::make_explicit({0b0u, 0b1u});
  ImplementationTree tree;
  TreeNode root;
  root.agent = 0;
  root.sub = {{0, 1, 2, 3}};
  root.parts = {{0, 2}, {1, 3}};
  TreeNode odd, even;
  odd.agent = 0;
  odd.sub = {{0, 2}};
  odd.parts = {{0}, {2}};
  even.sub = {{1, 3}};
  even.outcome = Solution{0};
  TreeNode win, lose;
  win.sub = {{0}};
  win.outcome = Solution{0b1u};
  lose.sub = {{2}};
  lose.outcome = Solution{0};
  tree.nodes = {root, odd, even, win, lose};
  tree.nodes[0].children = {1, 2};
  tree.nodes[1].children = {3, 4};
  tree.root = 0;
  tree.validate(inst);

  const auto ext = extremalize(inst, tree);
  CHECK(is_extremal(ext));
  CHECK(outcomes_equal(inst, tree, ext));
  // Chain of top queries splitting off 4, then 3, then 2 (the final
  // two-type split reads as Bottom and Top alike).
  int cur = ext.root;
  for (int expected : {3, 2, 1}) {
    const auto& nd = ext.node(cur);
    REQUIRE_FALSE(nd.is_leaf());
    CHECK(nd.parts[0] == std::vector<int>{expected});
    if (nd.sub[0].size() > 2) CHECK(query_kind(ext, cur) == QueryKind::Top);
    cur = nd.children[1];
  }
  CHECK(ext.node(cur).is_leaf());
  CHECK(check_admissible_queries(inst, ext).ok);
}

TEST_CASE("extremalize keeps already-extremal trees intact") {
  const auto inst = make_sc_parallel();
  const auto tree = build_tree_from_table(inst, make_thm8_two_way_table());
  const auto ext = extremalize(inst, tree);
  CHECK(is_extremal(ext));
  CHECK(outcomes_equal(inst, tree, ext));
  REQUIRE(ext.size() == tree.size());
}

TEST_CASE("extremalize resolves a revealable always-selected pair bottom-up") {
  // Domain {1,2,3}: types 1,2 Always1, type 3 Always0; split {2} vs {1,3}
  // is neither extremal nor homogeneous-free; peeling gives the top query
  // on 3 and then the bottom query on 1.
  SetSystemInstance inst;
  inst.n = 1;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{1, 2, 3}}};
  inst.family = FeasibleFamily::make_explicit({0b0u, 0b1u});
  ImplementationTree tree;
  TreeNode root;
  root.agent = 0;
  root.sub = {{0, 1, 2}};
  root.parts = {{1}, {0, 2}};
  TreeNode mid, rest, w, l;
  mid.sub = {{1}};
  mid.outcome = Solution{0b1u};
  rest.agent = 0;
  rest.sub = {{0, 2}};
  rest.parts = {{0}, {2}};
  w.sub = {{0}};
  w.outcome = Solution{0b1u};
  l.sub = {{2}};
  l.outcome = Solution{0};
  tree.nodes = {root, mid, rest, w, l};
  tree.nodes[0].children = {1, 2};
  tree.nodes[2].children = {3, 4};
  tree.root = 0;
  tree.validate(inst);

  const auto ext = extremalize(inst, tree);
  CHECK(is_extremal(ext));
  CHECK(outcomes_equal(inst, tree, ext));
  // The singleton Always1 part triggers the homogeneous case: bottom
  // queries over the prefix {1, 2}, in increasing order.
  const auto& r = ext.node(ext.root);
  CHECK(r.parts[0] == std::vector<int>{0});
  CHECK(query_kind(ext, ext.root) == QueryKind::Bottom);
  const auto& second = ext.node(r.children[1]);
  CHECK(second.parts[0] == std::vector<int>{1});
}

TEST_CASE("well_order hoists a revealable agent's resolution") {
  // Agent 0 revealable at the root (type 1 Always1, type 2 Always0 once the
  // family decouples agents); interleave agent 1 in between and check the
  // chain gets hoisted.
  SetSystemInstance inst;
  inst.n = 2;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{1, 2}}, AgentDomain{{1, 2}}};
  inst.family =
      FeasibleFamily::make_explicit({0b00u, 0b01u, 0b10u, 0b11u});
  inst.validate();
  // Tree: query agent 1 first, then agent 0 in each branch with constant
  // selection rule f_0(1)=1, f_0(2)=0; f_1(1)=1, f_1(2)=0.
  ImplementationTree tree;
  auto leaf = [&](std::vector<std::vector<int>> sub, Mask m) {
    TreeNode nd;
    nd.sub = std::move(sub);
    nd.outcome = Solution{m};
    tree.nodes.push_back(nd);
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  auto node0 = [&](std::vector<std::vector<int>> sub, int yes, int no) {
    TreeNode nd;
    nd.agent = 0;
    nd.sub = std::move(sub);
    nd.parts = {{0}, {1}};
    nd.children = {yes, no};
    tree.nodes.push_back(nd);
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  const int l11 = leaf({{0}, {0}}, 0b11u);
  const int l01 = leaf({{1}, {0}}, 0b10u);
  const int left = node0({{0, 1}, {0}}, l11, l01);
  const int l10 = leaf({{0}, {1}}, 0b01u);
  const int l00 = leaf({{1}, {1}}, 0b00u);
  const int right = node0({{0, 1}, {1}}, l10, l00);
  TreeNode root;
  root.agent = 1;
  root.sub = {{0, 1}, {0, 1}};
  root.parts = {{0}, {1}};
  root.children = {left, right};
  tree.nodes.push_back(root);
  tree.root = static_cast<int>(tree.nodes.size()) - 1;
  tree.validate(inst);

  // Agent 1 is revealable at the root (her type determines her selection).
  const auto ordered = well_order(inst, tree);
  CHECK(outcomes_equal(inst, tree, ordered));
  CHECK(is_extremal(ordered));
  CHECK(check_weak_interleaving(inst, ordered).ok);

  // A tree with no revealable interior nodes comes back unchanged.
  SetSystemInstance flat;
  flat.n = 1;
  flat.orientation = Orientation::Cost;
  flat.domains = {AgentDomain{{1, 2}}};
  flat.family = FeasibleFamily::make_explicit({0b0u, 0b1u});
  ImplementationTree small;
  TreeNode sroot;
  sroot.agent = 0;
  sroot.sub = {{0, 1}};
  sroot.parts = {{0}, {1}};
  TreeNode a, b;
  a.sub = {{0}};
  a.outcome = Solution{0b1u};
  b.sub = {{1}};
  b.outcome = Solution{0};
  small.nodes = {sroot, a, b};
  small.nodes[0].children = {1, 2};
  small.root = 0;
  // Revealable trigger fires at the root here (domain {A1, A0}), the chain
  // reproduces an equivalent bottom/top resolution.
  const auto small_ordered = well_order(flat, small);
  CHECK(outcomes_equal(flat, small, small_ordered));
  CHECK(check_weak_interleaving(flat, small_ordered).ok);
}

TEST_CASE("well_order requires an extremal input") {
  SetSystemInstance inst;
  inst.n = 1;
  inst.orientation = Orientation::Cost;
  inst.domains = {AgentDomain{{1, 2, 3}}};
  inst.family = FeasibleFamily::make_explicit({0b0u, 0b1u});
  ImplementationTree tree;
  TreeNode root;
  root.agent = 0;
  root.sub = {{0, 1, 2}};
  root.parts = {{1}, {0, 2}};  // middle singleton: not extremal
  TreeNode m, rest;
  m.sub = {{1}};
  m.outcome = Solution{0b1u};
  rest.sub = {{0, 2}};
  rest.outcome = Solution{0};
  tree.nodes = {root, m, rest};
  tree.nodes[0].children = {1, 2};
  tree.root = 0;
  CHECK_THROWS_AS(well_order(inst, tree), NotExtremal);
  CHECK_THROWS_AS(check_weak_interleaving(inst, tree), NotExtremal);
}

TEST_CASE("appendix-style auction tree answers the all-top profile early") {
  const auto inst = make_ca_appendix_b();
  const auto tree = appendix_b_tree(inst);
  const Rational tmax = inst.domains[0].values[2];
  auto run = run_mechanism(inst, tree, {tmax, tmax, tmax});
  CHECK(run.solution.selected == 0b011u);
  // The leaf reached sits directly under the root: one query decided.
  CHECK(tree.node(tree.root).children[0] == run.leaf);
  // Bidder at index 1 is only ever queried after the first bidder said no.
  for (int id = 0; id < tree.size(); ++id) {
    const auto& nd = tree.node(id);
    if (!nd.is_leaf() && nd.agent == 1)
      CHECK(nd.sub[0] == std::vector<int>{0, 1});
  }
}

TEST_CASE("transformations preserve outcomes over seeded OSP inputs") {
  testutil::Rng rng(2024);
  int accepted = 0;
  int attempts = 0;
  while (accepted < 25 && attempts < 4000) {
    ++attempts;
    const auto inst = testutil::random_instance(rng);
    auto tree = testutil::random_tree(rng, inst, 0.45, 2);
    bool osp = true;
    for (int agent = 0; agent < inst.n && osp; ++agent)
      osp = check_cmon(build_osp_graph(inst, tree, agent)).ok;
    if (!osp) continue;
    ++accepted;
    const auto ext = extremalize(inst, tree);
    CHECK(outcomes_equal(inst, tree, ext));
    CHECK(is_extremal(ext));
    CHECK(check_admissible_queries(inst, ext).ok);
    const auto ordered = well_order(inst, ext);
    CHECK(outcomes_equal(inst, tree, ordered));
    CHECK(check_weak_interleaving(inst, ordered).ok);
    CHECK(leaf_profile_total(inst, ordered) == ProfileSpace(inst).total);
  }
  CHECK(accepted == 25);
}
