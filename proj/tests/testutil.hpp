#ifndef OSP_TESTUTIL_HPP
#define OSP_TESTUTIL_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "osp/greedy.hpp"
#include "osp/instances.hpp"
#include "osp/ospgraph.hpp"
#include "osp/tree.hpp"

namespace osp::testutil {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long long seed) : eng(seed) {}
  int uniform(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(eng);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(eng) < p;
  }
};

inline SetSystemInstance random_instance(Rng& rng, int max_n = 3,
                                         int max_dom = 3) {
  SetSystemInstance inst;
  inst.n = rng.uniform(2, max_n);
  inst.orientation =
      rng.chance(0.5) ? Orientation::Cost : Orientation::Valuation;
  for (int i = 0; i < inst.n; ++i) {
    const int size = rng.uniform(2, max_dom);
    std::vector<int> pool{1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::shuffle(pool.begin(), pool.end(), rng.eng);
    std::vector<Rational> values;
    for (int t = 0; t < size; ++t) values.push_back(pool[t]);
    std::sort(values.begin(), values.end());
    inst.domains.push_back(AgentDomain{std::move(values)});
  }
  const Mask all = (1u << inst.n) - 1;
  switch (rng.uniform(0, 3)) {
    case 0: {  // explicit random nonempty family of distinct sets
      std::vector<Mask> sets;
      const int count = rng.uniform(1, 4);
      for (int s = 0; s < count; ++s)
        sets.push_back(static_cast<Mask>(rng.uniform(0, all)));
      inst.family = FeasibleFamily::make_explicit(std::move(sets));
      break;
    }
    case 1: {  // disjoint parallel solutions
      std::vector<Mask> sets;
      Mask used = 0;
      const int count = rng.uniform(1, 2);
      for (int s = 0; s < count && used != all; ++s) {
        Mask candidate = static_cast<Mask>(rng.uniform(1, all)) & ~used;
        if (candidate == 0) break;
        sets.push_back(candidate);
        used |= candidate;
      }
      if (sets.empty()) sets.push_back(1);
      inst.family = FeasibleFamily::make_parallel(std::move(sets));
      break;
    }
    case 2: {  // knapsack
      std::vector<long long> sizes;
      for (int i = 0; i < inst.n; ++i) sizes.push_back(rng.uniform(1, 3));
      inst.family =
          FeasibleFamily::make_knapsack(std::move(sizes), rng.uniform(1, 5));
      break;
    }
    default: {  // downward closure
      std::vector<Mask> bases;
      const int count = rng.uniform(1, 2);
      for (int s = 0; s < count; ++s)
        bases.push_back(static_cast<Mask>(rng.uniform(1, all)));
      inst.family = FeasibleFamily::make_downward_closure(std::move(bases));
      break;
    }
  }
  inst.validate();
  return inst;
}

/// Random implementation tree with arbitrary (possibly non-extremal,
/// possibly k-ary) queries and random feasible leaf solutions.
inline ImplementationTree random_tree(Rng& rng, const SetSystemInstance& inst,
                                      double leaf_prob = 0.35,
                                      int max_arity = 2) {
  const auto family = enumerate_family(inst);
  ImplementationTree tree;
  std::function<int(std::vector<std::vector<int>>)> grow =
      [&](std::vector<std::vector<int>> sub) -> int {
    std::vector<int> splittable;
    for (int i = 0; i < inst.n; ++i)
      if (sub[i].size() >= 2) splittable.push_back(i);
    if (splittable.empty() || rng.chance(leaf_prob)) {
      TreeNode leaf;
      leaf.sub = std::move(sub);
      leaf.outcome =
          Solution{family[static_cast<size_t>(rng.uniform(
              0, static_cast<int>(family.size()) - 1))]};
      tree.nodes.push_back(std::move(leaf));
      return static_cast<int>(tree.nodes.size()) - 1;
    }
    const int agent = splittable[rng.uniform(
        0, static_cast<int>(splittable.size()) - 1)];
    std::vector<int> types = sub[agent];
    std::shuffle(types.begin(), types.end(), rng.eng);
    const int max_parts =
        std::min<int>(max_arity, static_cast<int>(types.size()));
    const int parts_count = rng.uniform(2, max_parts);
    std::vector<std::vector<int>> parts(parts_count);
    for (size_t t = 0; t < types.size(); ++t)
      parts[t < static_cast<size_t>(parts_count)
                ? t
                : static_cast<size_t>(rng.uniform(0, parts_count - 1))]
          .push_back(types[t]);
    TreeNode nd;
    nd.agent = agent;
    nd.sub = sub;
    for (auto& p : parts) {
      std::sort(p.begin(), p.end());
      nd.parts.push_back(p);
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(std::move(nd));
    std::vector<int> children;
    for (const auto& p : tree.nodes[id].parts) {
      auto child_sub = sub;
      child_sub[agent] = p;
      children.push_back(grow(std::move(child_sub)));
    }
    tree.nodes[id].children = std::move(children);
    return id;
  };
  std::vector<std::vector<int>> full(inst.n);
  for (int i = 0; i < inst.n; ++i)
    for (int t = 0; t < inst.domains[i].size(); ++t) full[i].push_back(t);
  tree.root = grow(std::move(full));
  tree.validate(inst);
  return tree;
}

/// Random all-monotone wildcard-history table; every agent carries in-,
/// out-, or both direction chains.
inline PriorityTable random_monotone_table(Rng& rng,
                                           const SetSystemInstance& inst,
                                           bool allow_out = true) {
  std::vector<std::tuple<int, Direction, int>> slots;  // (agent, dir, count)
  int total = 0;
  std::vector<int> mode(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    mode[i] = allow_out ? rng.uniform(0, 2) : 0;  // 0 in, 1 out, 2 both
    const int d = inst.domains[i].size();
    if (mode[i] != 1) total += d;
    if (allow_out && mode[i] != 0) total += d;
  }
  std::vector<int> ranks(total);
  for (int r = 0; r < total; ++r) ranks[r] = r + 1;
  std::shuffle(ranks.begin(), ranks.end(), rng.eng);
  size_t next = 0;
  PriorityTable table;
  for (int i = 0; i < inst.n; ++i) {
    const auto& dom = inst.domains[i].values;
    auto add_chain = [&](Direction dir) {
      std::vector<int> chain(dom.size());
      for (auto& r : chain) r = ranks[next++];
      std::sort(chain.begin(), chain.end(), std::greater<int>());
      // chain[0] = highest rank -> best type for In, worst for Out.
      for (size_t t = 0; t < dom.size(); ++t) {
        size_t quality;  // 0 = gets the highest rank
        const bool better_low = inst.orientation == Orientation::Cost;
        const size_t pos_best_first = better_low ? t : dom.size() - 1 - t;
        quality = dir == Direction::In ? pos_best_first
                                       : dom.size() - 1 - pos_best_first;
        table.add(PriorityEntry{i, dir, dom[t], true, {},
                                Rational(chain[quality])});
      }
    };
    if (mode[i] != 1) add_chain(Direction::In);
    if (allow_out && mode[i] != 0) add_chain(Direction::Out);
  }
  return table;
}

/// Every full profile, as exact type vectors.
inline std::vector<TypeProfile> all_profiles(const SetSystemInstance& inst) {
  ProfileSpace space(inst);
  std::vector<TypeProfile> out;
  for (long long id = 0; id < space.total; ++id)
    out.push_back(profile_from_indices(inst, space.indices_at(id)));
  return out;
}

/// Independent negative-cycle oracle: DFS enumeration of all simple cycles
/// up to max_len edges.
inline std::optional<Rational> min_cycle_weight(const OspGraph& g,
                                                int max_len) {
  std::optional<Rational> best;
  std::vector<std::vector<std::pair<long long, Rational>>> adj(g.num_profiles);
  for (const auto& e : g.edges) adj[e.from].push_back({e.to, e.weight});
  std::function<void(long long, long long, Rational, int,
                     std::vector<char>&)>
      dfs = [&](long long start, long long cur, Rational weight, int depth,
                std::vector<char>& onpath) {
        if (depth > max_len) return;
        for (const auto& [to, w] : adj[cur]) {
          if (to == start) {
            Rational total = weight + w;
            if (!best || total < *best) best = total;
            continue;
          }
          if (onpath[to] || to < start) continue;
          onpath[to] = 1;
          dfs(start, to, weight + w, depth + 1, onpath);
          onpath[to] = 0;
        }
      };
  std::vector<char> onpath(g.num_profiles, 0);
  for (long long s = 0; s < g.num_profiles; ++s) {
    onpath.assign(g.num_profiles, 0);
    onpath[s] = 1;
    dfs(s, s, Rational(0), 1, onpath);
  }
  return best;
}

}  // namespace osp::testutil

#endif
