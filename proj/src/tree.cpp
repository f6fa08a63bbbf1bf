#include "osp/tree.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <sstream>

#include "osp/errors.hpp"

namespace osp {

namespace {

std::vector<int> full_domain_indices(const SetSystemInstance& inst, int agent) {
  std::vector<int> out(inst.domains[agent].size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

std::vector<std::vector<int>> full_sub(const SetSystemInstance& inst) {
  std::vector<std::vector<int>> sub(inst.n);
  for (int i = 0; i < inst.n; ++i) sub[i] = full_domain_indices(inst, i);
  return sub;
}

// Odometer over a per-agent index-list subdomain, invoking fn with the
// current per-agent indices.
void for_each_profile(const std::vector<std::vector<int>>& sub,
                      const std::function<void(const std::vector<int>&)>& fn) {
  const int n = static_cast<int>(sub.size());
  std::vector<int> pos(n, 0);
  std::vector<int> idx(n);
  while (true) {
    for (int i = 0; i < n; ++i) idx[i] = sub[i][pos[i]];
    fn(idx);
    int i = n - 1;
    while (i >= 0 && ++pos[i] == static_cast<int>(sub[i].size())) {
      pos[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

}  // namespace

void ImplementationTree::validate(const SetSystemInstance& inst) const {
  if (nodes.empty()) throw MalformedTree("empty tree");
  for (const auto& nd : nodes) {
    if (static_cast<int>(nd.sub.size()) != inst.n)
      throw MalformedTree("node subdomain arity mismatch");
    if (nd.is_leaf()) {
      if (!nd.outcome) throw MalformedTree("leaf without outcome");
      continue;
    }
    if (nd.parts.size() < 2 || nd.parts.size() != nd.children.size())
      throw MalformedTree("internal node needs >= 2 parts with children");
    std::vector<int> merged;
    for (const auto& p : nd.parts) {
      if (p.empty()) throw MalformedTree("empty part");
      merged.insert(merged.end(), p.begin(), p.end());
    }
    std::sort(merged.begin(), merged.end());
    if (merged != nd.sub[nd.agent])
      throw MalformedTree("parts do not partition the queried subdomain");
    for (size_t c = 0; c < nd.children.size(); ++c) {
      const auto& child = nodes[nd.children[c]];
      std::vector<int> want = nd.parts[c];
      std::sort(want.begin(), want.end());
      if (child.sub[nd.agent] != want)
        throw MalformedTree("child subdomain does not match its part");
    }
  }
}

RunResult run_mechanism(const SetSystemInstance& inst,
                        const ImplementationTree& tree,
                        const TypeProfile& profile) {
  const auto idx = indices_of_profile(inst, profile);
  int cur = tree.root;
  while (!tree.node(cur).is_leaf()) {
    const auto& nd = tree.node(cur);
    int next = -1;
    for (size_t c = 0; c < nd.parts.size(); ++c)
      if (std::find(nd.parts[c].begin(), nd.parts[c].end(),
                    idx[nd.agent]) != nd.parts[c].end()) {
        next = nd.children[c];
        break;
      }
    if (next < 0) throw MalformedTree("no part matches the profile");
    cur = next;
  }
  const auto& leaf = tree.node(cur);
  if (!leaf.outcome) throw MalformedTree("leaf without outcome");
  return RunResult{cur, *leaf.outcome, leaf.payments};
}

OutcomeTable::OutcomeTable(const SetSystemInstance& inst,
                           const ImplementationTree& tree,
                           long long profile_cap)
    : space_(inst) {
  if (space_.total > profile_cap)
    throw CapExceeded("profile space exceeds cap: " +
                      std::to_string(space_.total));
  solutions_.resize(space_.total);
  for (long long id = 0; id < space_.total; ++id) {
    auto idx = space_.indices_at(id);
    int cur = tree.root;
    while (!tree.node(cur).is_leaf()) {
      const auto& nd = tree.node(cur);
      int next = -1;
      for (size_t c = 0; c < nd.parts.size(); ++c)
        if (std::find(nd.parts[c].begin(), nd.parts[c].end(),
                      idx[nd.agent]) != nd.parts[c].end()) {
          next = nd.children[c];
          break;
        }
      if (next < 0) throw MalformedTree("no part matches profile");
      cur = next;
    }
    if (!tree.node(cur).outcome) throw MalformedTree("leaf without outcome");
    solutions_[id] = tree.node(cur).outcome->selected;
  }
}

namespace {

std::vector<TypeClass> classify_under(const SetSystemInstance& inst,
                                      const OutcomeTable& outcomes,
                                      const std::vector<std::vector<int>>& sub,
                                      int agent) {
  const auto& types = sub[agent];
  std::vector<char> seen1(types.size(), 0), seen0(types.size(), 0);
  std::vector<std::vector<int>> rivals = sub;
  rivals[agent] = {0};  // placeholder, overwritten per type
  for (size_t t = 0; t < types.size(); ++t) {
    rivals[agent] = {types[t]};
    for_each_profile(rivals, [&](const std::vector<int>& idx) {
      long long id = outcomes.space().id_of(idx);
      (outcomes.selected(id, agent) ? seen1 : seen0)[t] = 1;
    });
  }
  std::vector<TypeClass> out(types.size());
  for (size_t t = 0; t < types.size(); ++t) {
    if (seen1[t] && seen0[t])
      out[t] = TypeClass::Unclear;
    else
      out[t] = seen1[t] ? TypeClass::Always1 : TypeClass::Always0;
  }
  return out;
}

}  // namespace

std::vector<TypeClass> classify_types(const SetSystemInstance& inst,
                                      const ImplementationTree& tree, int node,
                                      int agent, const OutcomeTable& outcomes) {
  return classify_under(inst, outcomes, tree.node(node).sub, agent);
}

std::vector<TypeClass> classify_types(const SetSystemInstance& inst,
                                      const ImplementationTree& tree, int node,
                                      const OutcomeTable& outcomes) {
  const auto& nd = tree.node(node);
  if (nd.is_leaf()) throw InvalidParams("leaf nodes have no queried agent");
  return classify_under(inst, outcomes, nd.sub, nd.agent);
}

bool revealable_shape(const std::vector<TypeClass>& classes) {
  size_t prefix = 0;
  while (prefix < classes.size() && classes[prefix] == TypeClass::Always1)
    ++prefix;
  size_t suffix = 0;
  while (suffix < classes.size() - prefix &&
         classes[classes.size() - 1 - suffix] == TypeClass::Always0)
    ++suffix;
  return classes.size() - prefix - suffix <= 1;
}

bool is_revealable(const SetSystemInstance& inst,
                   const ImplementationTree& tree, int node,
                   const OutcomeTable& outcomes) {
  return revealable_shape(classify_types(inst, tree, node, outcomes));
}

namespace {

bool splits_extreme(const TreeNode& nd, bool min_side) {
  if (nd.parts.size() != 2) return false;
  const auto& dom = nd.sub[nd.agent];
  const int extreme = min_side ? dom.front() : dom.back();
  for (const auto& p : nd.parts)
    if (p.size() == 1 && p[0] == extreme) return true;
  return false;
}

}  // namespace

QueryKind query_kind(const ImplementationTree& tree, int node) {
  const auto& nd = tree.node(node);
  if (nd.is_leaf()) throw InvalidParams("leaf nodes have no query");
  if (splits_extreme(nd, true)) return QueryKind::Bottom;
  if (splits_extreme(nd, false)) return QueryKind::Top;
  return QueryKind::General;
}

bool is_extremal(const ImplementationTree& tree) {
  for (int id = 0; id < tree.size(); ++id) {
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) continue;
    if (!splits_extreme(nd, true) && !splits_extreme(nd, false)) return false;
  }
  return true;
}

namespace {

struct PartShape {
  bool ok = false;
  bool middle_unclear = false;
};

PartShape part_shape(const std::vector<TypeClass>& classes) {
  size_t prefix = 0;
  while (prefix < classes.size() && classes[prefix] == TypeClass::Always1)
    ++prefix;
  size_t suffix = 0;
  while (suffix < classes.size() - prefix &&
         classes[classes.size() - 1 - suffix] == TypeClass::Always0)
    ++suffix;
  const size_t gap = classes.size() - prefix - suffix;
  PartShape shape;
  shape.ok = gap <= 1;
  shape.middle_unclear = gap == 1 && classes[prefix] == TypeClass::Unclear;
  return shape;
}

bool part_homogeneous(const std::vector<TypeClass>& classes) {
  bool all0 = true, all1 = true;
  for (auto c : classes) {
    all0 &= c == TypeClass::Always0;
    all1 &= c == TypeClass::Always1;
  }
  return all0 || all1;
}

}  // namespace

NodeCheck check_admissible_queries(const SetSystemInstance& inst,
                                   const ImplementationTree& tree) {
  OutcomeTable outcomes(inst, tree);
  for (int id = 0; id < tree.size(); ++id) {
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) continue;
    const auto domain_classes = classify_under(inst, outcomes, nd.sub, nd.agent);
    const auto& dom = nd.sub[nd.agent];
    auto class_of = [&](int type_idx) {
      auto it = std::lower_bound(dom.begin(), dom.end(), type_idx);
      return domain_classes[it - dom.begin()];
    };
    auto part_classes = [&](const std::vector<int>& part) {
      std::vector<int> sorted = part;
      std::sort(sorted.begin(), sorted.end());
      std::vector<TypeClass> out;
      for (int t : sorted) out.push_back(class_of(t));
      return out;
    };

    bool cond1 = false;
    for (const auto& p : nd.parts)
      if (part_homogeneous(part_classes(p))) cond1 = true;
    if (cond1) continue;

    bool cond2 = false;
    if (nd.parts.size() == 2 && revealable_shape(domain_classes)) {
      auto l = part_shape(part_classes(nd.parts[0]));
      auto r = part_shape(part_classes(nd.parts[1]));
      cond2 = l.ok && r.ok &&
              (static_cast<int>(l.middle_unclear) +
                   static_cast<int>(r.middle_unclear) <=
               1);
    }
    if (!cond2)
      return NodeCheck{false, id,
                       "node " + std::to_string(id) +
                           " has no homogeneous part and no revealable split"};
  }
  return NodeCheck{};
}

NodeCheck check_weak_interleaving(const SetSystemInstance& inst,
                                  const ImplementationTree& tree) {
  if (!is_extremal(tree)) throw NotExtremal("tree is not extremal");
  OutcomeTable outcomes(inst, tree);
  NodeCheck result;

  // last strict query kind per agent along the current path
  std::vector<int> last(inst.n, 0);  // 0 none, 1 bottom, 2 top
  std::function<bool(int)> walk = [&](int id) {
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) return true;
    const bool bottom = splits_extreme(nd, true);
    const bool top = splits_extreme(nd, false);
    int saved = last[nd.agent];
    if (!(bottom && top)) {  // two-type splits are compatible with both
      const int kind = bottom ? 1 : 2;
      if (saved != 0 && saved != kind) {
        if (!is_revealable(inst, tree, id, outcomes)) {
          result = NodeCheck{false, id,
                             "direction switch for agent " +
                                 std::to_string(nd.agent) +
                                 " at a non-revealable node"};
          return false;
        }
      }
      last[nd.agent] = kind;
    }
    for (int child : nd.children)
      if (!walk(child)) return false;
    last[nd.agent] = saved;
    return true;
  };
  walk(tree.root);
  return result;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const SetSystemInstance& inst, const PriorityTable& table,
              long long node_cap)
      : inst_(inst), table_(table), cap_(node_cap) {}

  ImplementationTree build() {
    auto report = check_all_monotone(inst_, table_);
    if (!report.ok)
      throw MonotonicityViolation(
          "table is not all-monotone (agent " +
          std::to_string(report.violation->agent) + ")");
    State st;
    st.sub = full_sub(inst_);
    st.pool = enumerate_family(inst_);
    if (st.pool.empty()) throw NoProgress("family has no feasible set");
    st.committed.assign(inst_.n, 0);
    st.infeasible.assign(inst_.n, 0);
    tree_.root = grow(std::move(st));
    return std::move(tree_);
  }

 private:
  struct State {
    std::vector<std::vector<int>> sub;
    std::vector<Mask> pool;
    std::vector<char> committed, infeasible;
    History history;
  };

  int new_node(TreeNode nd) {
    if (static_cast<long long>(tree_.nodes.size()) >= cap_)
      throw CapExceeded("tree node cap exceeded");
    tree_.nodes.push_back(std::move(nd));
    return static_cast<int>(tree_.nodes.size()) - 1;
  }

  const Rational& value(int agent, int idx) const {
    return inst_.domains[agent].values[idx];
  }

  int in_extreme(const State& st, int agent) const {
    return inst_.orientation == Orientation::Cost ? st.sub[agent].front()
                                                  : st.sub[agent].back();
  }
  int out_extreme(const State& st, int agent) const {
    return inst_.orientation == Orientation::Cost ? st.sub[agent].back()
                                                  : st.sub[agent].front();
  }

  static bool can_commit(const std::vector<Mask>& pool, int agent,
                         Direction d) {
    for (Mask s : pool) {
      bool in = mask_contains(s, agent);
      if (d == Direction::In ? in : !in) return true;
    }
    return false;
  }

  static void commit_pool(std::vector<Mask>& pool, int agent, Direction d) {
    std::vector<Mask> kept;
    for (Mask s : pool) {
      bool in = mask_contains(s, agent);
      if (d == Direction::In ? in : !in) kept.push_back(s);
    }
    pool.swap(kept);
  }

  int grow(State st) {
    while (true) {
      if (st.pool.size() == 1) {
        TreeNode leaf;
        leaf.sub = st.sub;
        leaf.outcome = Solution{st.pool.front()};
        return new_node(std::move(leaf));
      }
      std::optional<Candidate> best;
      for (int i = 0; i < inst_.n; ++i) {
        if (st.committed[i] || st.infeasible[i]) continue;
        auto consider = [&](Direction d, int type_idx) {
          auto r = table_.rank(i, d, value(i, type_idx), st.history);
          if (!r && table_.policy == MissingPolicy::FailOnMissing)
            throw MissingPriority("no priority for agent " +
                                  std::to_string(i));
          Candidate c{i, d, r, value(i, type_idx)};
          if (!best || candidate_higher(c, *best)) best = c;
        };
        consider(Direction::In, in_extreme(st, i));
        consider(Direction::Out, out_extreme(st, i));
      }
      if (!best) throw NoProgress("no agents left with multiple solutions");
      const int i = best->agent;
      const Direction dir = best->dir;
      if (!can_commit(st.pool, i, dir)) {
        st.infeasible[i] = 1;
        continue;
      }
      const int extreme =
          dir == Direction::In ? in_extreme(st, i) : out_extreme(st, i);
      if (st.sub[i].size() == 1) {
        // Nothing to ask; the agent's type is already determined.
        commit_pool(st.pool, i, dir);
        st.committed[i] = 1;
        st.history[i] = value(i, extreme);
        continue;
      }
      // Extremal query separating `extreme` from the rest.
      State yes = st;
      yes.sub[i] = {extreme};
      commit_pool(yes.pool, i, dir);
      yes.committed[i] = 1;
      yes.history[i] = value(i, extreme);

      State no = std::move(st);
      auto& dom = no.sub[i];
      dom.erase(std::remove(dom.begin(), dom.end(), extreme), dom.end());

      TreeNode nd;
      nd.agent = i;
      nd.sub = no.sub;
      nd.sub[i].push_back(extreme);
      std::sort(nd.sub[i].begin(), nd.sub[i].end());
      nd.parts = {{extreme}, no.sub[i]};
      const int id = new_node(std::move(nd));
      const int yes_child = grow(std::move(yes));
      const int no_child = grow(std::move(no));
      tree_.nodes[id].children = {yes_child, no_child};
      return id;
    }
  }

  const SetSystemInstance& inst_;
  const PriorityTable& table_;
  long long cap_;
  ImplementationTree tree_;
};

}  // namespace

ImplementationTree build_tree_from_table(const SetSystemInstance& inst,
                                         const PriorityTable& table,
                                         long long node_cap) {
  auto tree = TreeBuilder(inst, table, node_cap).build();
  tree.validate(inst);
  return tree;
}

namespace {

// Shared arena-to-arena rewriter. `restrict_to` narrows one agent's domain
// while copying; queries that collapse to a single part are spliced out.
class Rewriter {
 public:
  Rewriter(const SetSystemInstance& inst, const ImplementationTree& src,
           long long cap)
      : inst_(inst), src_(src), cap_(cap) {}

  virtual ~Rewriter() = default;

  ImplementationTree run() {
    dst_.root = rewrite(src_.root, full_sub(inst_));
    dst_.nodes.shrink_to_fit();
    return std::move(dst_);
  }

 protected:
  int new_node(TreeNode nd) {
    if (static_cast<long long>(dst_.nodes.size()) >= cap_)
      throw CapExceeded("tree node cap exceeded");
    dst_.nodes.push_back(std::move(nd));
    return static_cast<int>(dst_.nodes.size()) - 1;
  }

  // Effective parts of an internal src node under the current subdomain.
  std::vector<std::pair<std::vector<int>, int>> effective_parts(
      const TreeNode& nd, const std::vector<int>& allowed) const {
    std::vector<std::pair<std::vector<int>, int>> out;
    for (size_t c = 0; c < nd.parts.size(); ++c) {
      std::vector<int> p;
      for (int t : nd.parts[c])
        if (std::binary_search(allowed.begin(), allowed.end(), t))
          p.push_back(t);
      if (!p.empty()) {
        std::sort(p.begin(), p.end());
        out.emplace_back(std::move(p), nd.children[c]);
      }
    }
    return out;
  }

  virtual int rewrite(int src_id, std::vector<std::vector<int>> sub) = 0;

  int copy_leaf(const TreeNode& leaf, std::vector<std::vector<int>> sub) {
    TreeNode out;
    out.sub = std::move(sub);
    out.outcome = leaf.outcome;
    out.payments = leaf.payments;
    return new_node(std::move(out));
  }

  const SetSystemInstance& inst_;
  const ImplementationTree& src_;
  ImplementationTree dst_;
  long long cap_;
};

class Binarizer : public Rewriter {
 public:
  using Rewriter::Rewriter;

 protected:
  int rewrite(int src_id, std::vector<std::vector<int>> sub) override {
    const auto& nd = src_.node(src_id);
    if (nd.is_leaf()) return copy_leaf(nd, std::move(sub));
    auto parts = effective_parts(nd, sub[nd.agent]);
    if (parts.size() == 1) return rewrite(parts[0].second, std::move(sub));
    // Chain: separate part j from parts j+1..k.
    int head = -1, tail = -1;
    std::vector<int> rest = sub[nd.agent];
    for (size_t j = 0; j + 1 < parts.size(); ++j) {
      TreeNode chain;
      chain.agent = nd.agent;
      chain.sub = sub;
      chain.sub[nd.agent] = rest;
      std::vector<int> remainder;
      for (int t : rest)
        if (!std::binary_search(parts[j].first.begin(), parts[j].first.end(),
                                t))
          remainder.push_back(t);
      chain.parts = {parts[j].first, remainder};
      const int id = new_node(std::move(chain));
      auto sub_yes = sub;
      sub_yes[nd.agent] = parts[j].first;
      const int yes = rewrite(parts[j].second, std::move(sub_yes));
      dst_.nodes[id].children = {yes, -1};
      if (tail >= 0)
        dst_.nodes[tail].children[1] = id;
      else
        head = id;
      tail = id;
      rest = std::move(remainder);
    }
    auto sub_last = std::move(sub);
    sub_last[nd.agent] = parts.back().first;
    const int last = rewrite(parts.back().second, std::move(sub_last));
    dst_.nodes[tail].children[1] = last;
    return head;
  }
};

}  // namespace

ImplementationTree binarize(const SetSystemInstance& inst,
                            const ImplementationTree& tree,
                            long long node_cap) {
  auto out = Binarizer(inst, tree, node_cap).run();
  out.validate(inst);
  return out;
}

namespace {

class Extremalizer : public Rewriter {
 public:
  Extremalizer(const SetSystemInstance& inst, const ImplementationTree& src,
               const OutcomeTable& outcomes, long long cap)
      : Rewriter(inst, src, cap), outcomes_(outcomes) {}

 protected:
  int rewrite(int src_id, std::vector<std::vector<int>> sub) override {
    const auto& nd = src_.node(src_id);
    if (nd.is_leaf()) return copy_leaf(nd, std::move(sub));
    auto parts = effective_parts(nd, sub[nd.agent]);
    if (parts.size() == 1) return rewrite(parts[0].second, std::move(sub));

    const int agent = nd.agent;
    const auto& dom = sub[agent];
    const bool extremal =
        parts.size() == 2 &&
        ((parts[0].first.size() == 1 &&
          (parts[0].first[0] == dom.front() || parts[0].first[0] == dom.back())) ||
         (parts[1].first.size() == 1 &&
          (parts[1].first[0] == dom.front() || parts[1].first[0] == dom.back())));
    if (extremal) {
      TreeNode out;
      out.agent = agent;
      out.sub = sub;
      out.parts = {parts[0].first, parts[1].first};
      const int id = new_node(std::move(out));
      auto sub0 = sub, sub1 = std::move(sub);
      sub0[agent] = parts[0].first;
      sub1[agent] = parts[1].first;
      const int c0 = rewrite(parts[0].second, std::move(sub0));
      const int c1 = rewrite(parts[1].second, std::move(sub1));
      dst_.nodes[id].children = {c0, c1};
      return id;
    }

    if (parts.size() != 2)
      throw NotApplicable("extremalize requires a binary tree; run binarize");

    const auto classes = classify_under(inst_, outcomes_, sub, agent);
    auto class_of = [&](int t) {
      auto it = std::lower_bound(dom.begin(), dom.end(), t);
      return classes[it - dom.begin()];
    };
    auto child_of_type = [&](int t) {
      for (const auto& [p, child] : parts)
        if (std::binary_search(p.begin(), p.end(), t)) return child;
      throw MalformedTree("type not covered by any part");
    };

    // Case split per the admissible-queries structure.
    auto part_classes = [&](const std::vector<int>& p) {
      std::vector<TypeClass> out;
      for (int t : p) out.push_back(class_of(t));
      return out;
    };
    const bool r_hom = part_homogeneous(part_classes(parts[1].first));
    const bool l_hom = part_homogeneous(part_classes(parts[0].first));

    std::vector<int> peel_order;  // types split off, in chain order
    if (r_hom || l_hom) {
      const auto& hom = r_hom ? parts[1].first : parts[0].first;
      const bool all0 = class_of(hom.front()) == TypeClass::Always0;
      std::vector<int> q;
      if (all0) {
        // Every type >= min(hom) must be Always0; peel from the top.
        for (auto it = dom.rbegin(); it != dom.rend(); ++it) {
          if (*it < hom.front()) break;
          if (class_of(*it) != TypeClass::Always0)
            throw NotApplicable(
                "homogeneous Always0 case violated above the threshold; "
                "input tree is not OSP");
          q.push_back(*it);
        }
      } else {
        for (int t : dom) {
          if (t > hom.back()) break;
          if (class_of(t) != TypeClass::Always1)
            throw NotApplicable(
                "homogeneous Always1 case violated below the threshold; "
                "input tree is not OSP");
          q.push_back(t);
        }
      }
      peel_order = std::move(q);
    } else if (revealable_shape(classes)) {
      // Peel the Always0 suffix from the top, then the Always1 prefix from
      // the bottom; the undetermined type survives to the end.
      std::vector<int> suffix, prefix;
      {
        auto it = dom.rbegin();
        while (it != dom.rend() && class_of(*it) == TypeClass::Always0)
          suffix.push_back(*it++);
        auto jt = dom.begin();
        while (jt != dom.end() && class_of(*jt) == TypeClass::Always1)
          prefix.push_back(*jt++);
      }
      peel_order = suffix;
      peel_order.insert(peel_order.end(), prefix.begin(), prefix.end());
    } else {
      throw NotApplicable(
          "query is neither homogeneous nor revealable; input tree is not "
          "OSP");
    }

    return build_chain(peel_order, std::move(sub), agent, child_of_type);
  }

 private:
  // Splits off peel_order[0], recurses on the remainder; once peel_order is
  // exhausted the remaining types descend into their original side.
  template <typename ChildFn>
  int build_chain(const std::vector<int>& peel_order,
                  std::vector<std::vector<int>> sub, int agent,
                  ChildFn child_of_type) {
    int head = -1, tail = -1;
    std::vector<int> cur = sub[agent];
    for (int q : peel_order) {
      if (cur.size() == 1) break;
      std::vector<int> rest;
      for (int t : cur)
        if (t != q) rest.push_back(t);
      TreeNode nd;
      nd.agent = agent;
      nd.sub = sub;
      nd.sub[agent] = cur;
      nd.parts = {{q}, rest};
      const int id = new_node(std::move(nd));
      auto sub_yes = sub;
      sub_yes[agent] = {q};
      const int yes = rewrite(child_of_type(q), std::move(sub_yes));
      dst_.nodes[id].children = {yes, -1};
      if (tail >= 0)
        dst_.nodes[tail].children[1] = id;
      else
        head = id;
      tail = id;
      cur = std::move(rest);
    }
    // Remaining block: all types share the same original side only when a
    // single type or a homogeneous remainder is left; descend with the
    // narrowed domain.
    auto sub_rest = std::move(sub);
    sub_rest[agent] = cur;
    int rest_child;
    if (cur.size() == 1) {
      rest_child = rewrite(child_of_type(cur[0]), std::move(sub_rest));
    } else {
      // Every remaining type lies in one original part by construction.
      const int child = child_of_type(cur[0]);
      for (int t : cur)
        if (child_of_type(t) != child)
          throw NotApplicable("peeled remainder spans both parts");
      rest_child = rewrite(child, std::move(sub_rest));
    }
    if (tail >= 0) {
      dst_.nodes[tail].children[1] = rest_child;
      return head;
    }
    return rest_child;
  }

  const OutcomeTable& outcomes_;
};

class WellOrderer : public Rewriter {
 public:
  WellOrderer(const SetSystemInstance& inst, const ImplementationTree& src,
              const OutcomeTable& outcomes, long long cap)
      : Rewriter(inst, src, cap), outcomes_(outcomes) {}

 protected:
  int rewrite(int src_id, std::vector<std::vector<int>> sub) override {
    const auto& nd = src_.node(src_id);
    if (nd.is_leaf()) return copy_leaf(nd, std::move(sub));
    auto parts = effective_parts(nd, sub[nd.agent]);
    if (parts.size() == 1) return rewrite(parts[0].second, std::move(sub));

    const int agent = nd.agent;
    const auto& dom = sub[agent];
    const auto classes = classify_under(inst_, outcomes_, sub, agent);
    if (dom.size() >= 2 && revealable_shape(classes)) {
      // Resolve the agent completely before anyone else is queried: top
      // queries over Always0 (descending), bottom queries over Always1
      // (ascending), the undetermined type last.
      std::vector<int> suffix, prefix;
      {
        size_t s = 0;
        while (s < classes.size() &&
               classes[classes.size() - 1 - s] == TypeClass::Always0) {
          suffix.push_back(dom[dom.size() - 1 - s]);
          ++s;
        }
        size_t p = 0;
        while (p + s < classes.size() && classes[p] == TypeClass::Always1) {
          prefix.push_back(dom[p]);
          ++p;
        }
      }
      std::vector<int> peel = suffix;
      peel.insert(peel.end(), prefix.begin(), prefix.end());

      int head = -1, tail = -1;
      std::vector<int> cur = dom;
      for (int q : peel) {
        if (cur.size() == 1) break;
        std::vector<int> rest;
        for (int t : cur)
          if (t != q) rest.push_back(t);
        TreeNode chain;
        chain.agent = agent;
        chain.sub = sub;
        chain.sub[agent] = cur;
        chain.parts = {{q}, rest};
        const int id = new_node(std::move(chain));
        auto sub_yes = sub;
        sub_yes[agent] = {q};
        const int yes = rewrite(src_id, std::move(sub_yes));
        dst_.nodes[id].children = {yes, -1};
        if (tail >= 0)
          dst_.nodes[tail].children[1] = id;
        else
          head = id;
        tail = id;
        cur = std::move(rest);
      }
      auto sub_rest = std::move(sub);
      sub_rest[agent] = cur;
      int rest_child;
      if (cur.size() == 1) {
        rest_child = rewrite(src_id, std::move(sub_rest));
      } else {
        throw MalformedTree("revealable chain left more than one type");
      }
      if (tail >= 0) {
        dst_.nodes[tail].children[1] = rest_child;
        return head;
      }
      return rest_child;
    }

    TreeNode out;
    out.agent = agent;
    out.sub = sub;
    out.parts.clear();
    for (auto& [p, child] : parts) out.parts.push_back(p);
    const int id = new_node(std::move(out));
    std::vector<int> children;
    for (auto& [p, child] : parts) {
      auto sub_c = sub;
      sub_c[agent] = p;
      children.push_back(rewrite(child, std::move(sub_c)));
    }
    dst_.nodes[id].children = std::move(children);
    return id;
  }

 private:
  const OutcomeTable& outcomes_;
};

}  // namespace

ImplementationTree extremalize(const SetSystemInstance& inst,
                               const ImplementationTree& tree,
                               long long node_cap) {
  OutcomeTable outcomes(inst, tree);
  auto out = Extremalizer(inst, tree, outcomes, node_cap).run();
  out.validate(inst);
  return out;
}

ImplementationTree well_order(const SetSystemInstance& inst,
                              const ImplementationTree& tree,
                              long long node_cap) {
  if (!is_extremal(tree)) throw NotExtremal("well_order requires an extremal tree");
  OutcomeTable outcomes(inst, tree);
  auto out = WellOrderer(inst, tree, outcomes, node_cap).run();
  out.validate(inst);
  return out;
}

}  // namespace osp
