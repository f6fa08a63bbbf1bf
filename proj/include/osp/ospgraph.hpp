#ifndef OSP_OSPGRAPH_HPP
#define OSP_OSPGRAPH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osp/errors.hpp"
#include "osp/instances.hpp"
#include "osp/tree.hpp"

namespace osp {

struct OspEdge {
  long long from = 0;
  long long to = 0;
  Rational weight;
  int separating_node = -1;  // first tree node that separates the endpoints
};

/// Per-agent weighted digraph over all full type profiles. The edge (a,b)
/// exists when some tree node queried to the agent separates a_i from b_i
/// with both profiles compatible; its weight is
/// signed_cost(a_i) * (f_i(b) - f_i(a)).
struct OspGraph {
  int agent = -1;
  long long num_profiles = 0;
  std::vector<long long> stride;        // mixed-radix profile indexing
  std::vector<char> selected;           // f_agent per profile id
  std::vector<Rational> agent_signed;   // signed cost of the agent's type
  std::vector<OspEdge> edges;
  std::map<std::pair<long long, long long>, size_t> edge_index;

  bool has_edge(long long a, long long b) const {
    return edge_index.count({a, b}) != 0;
  }
};

/// Four profiles certifying a long negative cycle under 2CMON:
/// b1 < b2 < b3 < b4 in the agent's (signed) type with selection pattern
/// 1/0/1/0 and no edge between b2 and b3.
struct FourProfile {
  long long b1, b2, b3, b4;
};

struct CycleWitness {
  std::vector<long long> profiles;  // cycle node sequence, closed implicitly
  Rational total_weight;
  std::optional<FourProfile> four_profile;
};

struct NegativeCycleError : Error {
  CycleWitness witness;
  explicit NegativeCycleError(CycleWitness w)
      : Error("OSP-graph contains a negative cycle"), witness(std::move(w)) {}
};

OspGraph build_osp_graph(const SetSystemInstance& inst,
                         const ImplementationTree& tree, int agent,
                         long long profile_cap = 500'000);

struct TwoCycleCheck {
  bool ok = true;
  std::optional<std::pair<long long, long long>> violation;
};

/// Every present 2-cycle must have nonnegative total weight.
TwoCycleCheck check_2cmon(const OspGraph& graph);

struct CmonCheck {
  bool ok = true;
  std::optional<CycleWitness> witness;
};

/// Negative-cycle detection via a label-correcting pass from a virtual
/// zero-weight source. When 2CMON holds but a longer negative cycle exists,
/// the witness also carries the four-profile record.
CmonCheck check_cmon(const OspGraph& graph);

/// Shortest-path payments from the virtual source; they satisfy every OSP
/// edge constraint p(b) <= p(a) + w(a,b). Throws NegativeCycleError when no
/// payments exist.
std::vector<Rational> compute_payments(const OspGraph& graph);

struct OracleCheck {
  bool ok = true;
  int node = -1;
  std::string detail;
};

/// Raw OSP definition: at every node and for every pair of diverging types,
/// the worst truthful utility beats the best deviating utility, with
/// u = p - signed_cost(type) * f.
OracleCheck brute_force_osp_oracle(
    const SetSystemInstance& inst, const ImplementationTree& tree,
    const std::vector<std::vector<Rational>>& payments_per_agent,
    long long profile_cap = 500'000);

std::string witness_str(const SetSystemInstance& inst,
                        const CycleWitness& witness);

}  // namespace osp

#endif
