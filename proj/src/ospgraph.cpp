#include "osp/ospgraph.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace osp {

namespace {

void for_each_profile_of(const std::vector<std::vector<int>>& sub,
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

OspGraph build_osp_graph(const SetSystemInstance& inst,
                         const ImplementationTree& tree, int agent,
                         long long profile_cap) {
  OutcomeTable outcomes(inst, tree, profile_cap);
  const ProfileSpace& space = outcomes.space();

  OspGraph g;
  g.agent = agent;
  g.num_profiles = space.total;
  g.stride = space.stride;
  g.selected.resize(space.total);
  g.agent_signed.resize(space.total);
  const auto& dom = inst.domains[agent];
  for (long long id = 0; id < space.total; ++id) {
    g.selected[id] = outcomes.selected(id, agent) ? 1 : 0;
    const int t = static_cast<int>((id / space.stride[agent]) % dom.size());
    g.agent_signed[id] = signed_cost(inst.orientation, dom.values[t]);
  }

  for (int u = 0; u < tree.size(); ++u) {
    const auto& nd = tree.node(u);
    if (nd.is_leaf() || nd.agent != agent) continue;
    // Rival subprofiles compatible with u, as partial ids.
    std::vector<std::vector<int>> rivals = nd.sub;
    rivals[agent] = {0};
    std::vector<long long> rival_ids;
    for_each_profile_of(rivals, [&](const std::vector<int>& idx) {
      long long id = 0;
      for (int i = 0; i < inst.n; ++i)
        if (i != agent) id += idx[i] * space.stride[i];
      rival_ids.push_back(id);
    });
    for (size_t pa = 0; pa < nd.parts.size(); ++pa)
      for (size_t pb = 0; pb < nd.parts.size(); ++pb) {
        if (pa == pb) continue;
        for (int ta : nd.parts[pa])
          for (int tb : nd.parts[pb])
            for (long long ra : rival_ids)
              for (long long rb : rival_ids) {
                const long long a = ra + ta * space.stride[agent];
                const long long b = rb + tb * space.stride[agent];
                if (g.edge_index.count({a, b})) continue;
                OspEdge e;
                e.from = a;
                e.to = b;
                e.weight =
                    g.agent_signed[a] *
                    Rational(static_cast<int>(g.selected[b]) -
                             static_cast<int>(g.selected[a]));
                e.separating_node = u;
                g.edge_index[{a, b}] = g.edges.size();
                g.edges.push_back(std::move(e));
              }
      }
  }
  return g;
}

TwoCycleCheck check_2cmon(const OspGraph& graph) {
  for (const auto& e : graph.edges) {
    if (e.from >= e.to) continue;  // each unordered pair once
    auto it = graph.edge_index.find({e.to, e.from});
    if (it == graph.edge_index.end()) continue;
    if (e.weight + graph.edges[it->second].weight < 0)
      return TwoCycleCheck{false, std::make_pair(e.from, e.to)};
  }
  return TwoCycleCheck{};
}

namespace {

// Bellman-Ford from a virtual source with zero-weight edges to all nodes;
// returns predecessor edges and a node inside a negative cycle, if any.
struct BellmanFord {
  std::vector<Rational> dist;
  std::vector<long long> pred_edge;
  long long cycle_entry = -1;

  explicit BellmanFord(const OspGraph& g) {
    dist.assign(g.num_profiles, Rational(0));
    pred_edge.assign(g.num_profiles, -1);
    for (long long pass = 0; pass < g.num_profiles; ++pass) {
      bool changed = false;
      for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        Rational cand = dist[e.from] + e.weight;
        if (cand < dist[e.to]) {
          dist[e.to] = cand;
          pred_edge[e.to] = static_cast<long long>(ei);
          changed = true;
          if (pass + 1 == g.num_profiles) {
            cycle_entry = e.to;
            return;
          }
        }
      }
      if (!changed) return;
    }
  }
};

CycleWitness recover_cycle(const OspGraph& g, const BellmanFord& bf) {
  // Walk back |V| steps to land inside the cycle, then collect it.
  long long cur = bf.cycle_entry;
  for (long long k = 0; k < g.num_profiles; ++k)
    cur = g.edges[bf.pred_edge[cur]].from;
  std::vector<long long> rev;
  long long walk = cur;
  do {
    rev.push_back(walk);
    walk = g.edges[bf.pred_edge[walk]].from;
  } while (walk != cur);
  std::reverse(rev.begin(), rev.end());
  CycleWitness w;
  w.profiles = std::move(rev);
  w.total_weight = 0;
  for (size_t i = 0; i < w.profiles.size(); ++i) {
    long long a = w.profiles[i];
    long long b = w.profiles[(i + 1) % w.profiles.size()];
    w.total_weight += g.edges[g.edge_index.at({a, b})].weight;
  }
  assert(w.total_weight < 0);
  return w;
}

void attach_four_profile(const OspGraph& g, CycleWitness& w) {
  // Pick the positive-transition edge with the smallest source type and the
  // negative-transition edge with the largest; under 2CMON these certify
  // the four-profile structure.
  std::optional<size_t> pos, neg;
  const size_t m = w.profiles.size();
  for (size_t i = 0; i < m; ++i) {
    long long a = w.profiles[i], b = w.profiles[(i + 1) % m];
    const bool fa = g.selected[a], fb = g.selected[b];
    if (!fa && fb) {
      if (!pos || g.agent_signed[a] < g.agent_signed[w.profiles[*pos]]) pos = i;
    } else if (fa && !fb) {
      if (!neg || g.agent_signed[a] > g.agent_signed[w.profiles[*neg]]) neg = i;
    }
  }
  if (!pos || !neg) return;
  const long long b2 = w.profiles[*pos];
  const long long b1 = w.profiles[(*pos + 1) % m];
  const long long b3 = w.profiles[*neg];
  const long long b4 = w.profiles[(*neg + 1) % m];
  if (!(g.agent_signed[b2] < g.agent_signed[b3])) return;
  FourProfile fp{b1, b2, b3, b4};
  // Conditions of the characterization; callers assert them as well.
  if (!(g.agent_signed[b1] < g.agent_signed[b2] &&
        g.agent_signed[b3] < g.agent_signed[b4]))
    return;
  w.four_profile = fp;
}

}  // namespace

CmonCheck check_cmon(const OspGraph& graph) {
  BellmanFord bf(graph);
  if (bf.cycle_entry < 0) return CmonCheck{};
  CycleWitness w = recover_cycle(graph, bf);
  if (check_2cmon(graph).ok) attach_four_profile(graph, w);
  return CmonCheck{false, std::move(w)};
}

std::vector<Rational> compute_payments(const OspGraph& graph) {
  BellmanFord bf(graph);
  if (bf.cycle_entry >= 0)
    throw NegativeCycleError(recover_cycle(graph, bf));
  return bf.dist;
}

OracleCheck brute_force_osp_oracle(
    const SetSystemInstance& inst, const ImplementationTree& tree,
    const std::vector<std::vector<Rational>>& payments_per_agent,
    long long profile_cap) {
  OutcomeTable outcomes(inst, tree, profile_cap);
  const ProfileSpace& space = outcomes.space();
  if (static_cast<int>(payments_per_agent.size()) != inst.n)
    throw InvalidParams("payments must cover every agent");
  for (const auto& p : payments_per_agent)
    if (static_cast<long long>(p.size()) != space.total)
      throw InvalidParams("payments must cover every profile");

  for (int u = 0; u < tree.size(); ++u) {
    const auto& nd = tree.node(u);
    if (nd.is_leaf()) continue;
    const int i = nd.agent;
    const auto& dom = inst.domains[i];
    std::vector<std::vector<int>> rivals = nd.sub;
    rivals[i] = {0};
    std::vector<long long> rival_ids;
    for_each_profile_of(rivals, [&](const std::vector<int>& idx) {
      long long id = 0;
      for (int a = 0; a < inst.n; ++a)
        if (a != i) id += idx[a] * space.stride[a];
      rival_ids.push_back(id);
    });

    auto utility = [&](int type_idx, long long full_id) {
      const Rational sc = signed_cost(inst.orientation, dom.values[type_idx]);
      Rational u_val = payments_per_agent[i][full_id];
      if (outcomes.selected(full_id, i)) u_val -= sc;
      return u_val;
    };

    for (size_t pa = 0; pa < nd.parts.size(); ++pa)
      for (size_t pb = 0; pb < nd.parts.size(); ++pb) {
        if (pa == pb) continue;
        for (int t : nd.parts[pa]) {
          bool have_truth = false;
          Rational worst_truth;
          for (long long r : rival_ids) {
            Rational u_val = utility(t, r + t * space.stride[i]);
            if (!have_truth || u_val < worst_truth) {
              worst_truth = u_val;
              have_truth = true;
            }
          }
          for (int b : nd.parts[pb])
            for (long long r : rival_ids) {
              Rational dev = utility(t, r + b * space.stride[i]);
              if (worst_truth < dev) {
                std::ostringstream msg;
                msg << "node " << u << ": agent " << i << " with type "
                    << fraction_str(dom.values[t])
                    << " gains by acting as type "
                    << fraction_str(dom.values[b]);
                return OracleCheck{false, u, msg.str()};
              }
            }
        }
      }
  }
  return OracleCheck{};
}

std::string witness_str(const SetSystemInstance& inst,
                        const CycleWitness& witness) {
  ProfileSpace space(inst);
  std::ostringstream out;
  out << "negative cycle, total weight " << pretty_str(witness.total_weight)
      << "\n";
  for (size_t i = 0; i < witness.profiles.size(); ++i) {
    auto idx = space.indices_at(witness.profiles[i]);
    out << "  " << profile_str(profile_from_indices(inst, idx)) << "\n";
  }
  if (witness.four_profile) {
    const auto& fp = *witness.four_profile;
    out << "  four-profile record: b1=" << fp.b1 << " b2=" << fp.b2
        << " b3=" << fp.b3 << " b4=" << fp.b4 << "\n";
  }
  return out.str();
}

}  // namespace osp
