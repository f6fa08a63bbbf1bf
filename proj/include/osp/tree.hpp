#ifndef OSP_TREE_HPP
#define OSP_TREE_HPP

#include <optional>
#include <string>
#include <vector>

#include "osp/greedy.hpp"
#include "osp/instances.hpp"

namespace osp {

/// One extensive-form node. Internal nodes query `agent` and partition her
/// current domain into `parts` (type indices into the agent's full domain),
/// one child per part. Leaves carry the outcome and optional payments.
struct TreeNode {
  int agent = -1;  // -1 marks a leaf
  std::vector<std::vector<int>> parts;
  std::vector<int> children;
  std::vector<std::vector<int>> sub;  // per-agent remaining domain indices
  std::optional<Solution> outcome;
  std::optional<std::vector<Rational>> payments;  // per agent, leaves only

  bool is_leaf() const { return agent < 0; }
};

struct ImplementationTree {
  std::vector<TreeNode> nodes;
  int root = 0;

  const TreeNode& node(int id) const { return nodes[id]; }
  int size() const { return static_cast<int>(nodes.size()); }

  /// Structural invariants: parts partition the queried agent's subdomain,
  /// children subdomains match, every leaf has an outcome.
  void validate(const SetSystemInstance& inst) const;
};

struct RunResult {
  int leaf = -1;
  Solution solution;
  std::optional<std::vector<Rational>> payments;
};

/// Walks root to leaf along the unique compatible path.
RunResult run_mechanism(const SetSystemInstance& inst,
                        const ImplementationTree& tree,
                        const TypeProfile& profile);

/// Materialized outcome function: the solution reached by every full
/// profile. Shared by classification and the OSP-graph builder.
class OutcomeTable {
 public:
  OutcomeTable(const SetSystemInstance& inst, const ImplementationTree& tree,
               long long profile_cap = 500'000);

  Mask solution_at(long long profile_id) const { return solutions_[profile_id]; }
  bool selected(long long profile_id, int agent) const {
    return mask_contains(solutions_[profile_id], agent);
  }
  const ProfileSpace& space() const { return space_; }

 private:
  ProfileSpace space_;
  std::vector<Mask> solutions_;
};

enum class TypeClass { Always0, Always1, Unclear };

/// Classification of `agent`'s remaining types at a node: Always1/Always0
/// when the selection is constant over every compatible rival profile,
/// Unclear otherwise. Indexed like the node's subdomain of the agent.
std::vector<TypeClass> classify_types(const SetSystemInstance& inst,
                                      const ImplementationTree& tree, int node,
                                      int agent, const OutcomeTable& outcomes);

/// Classification for the queried agent of an internal node.
std::vector<TypeClass> classify_types(const SetSystemInstance& inst,
                                      const ImplementationTree& tree, int node,
                                      const OutcomeTable& outcomes);

/// Always1 prefix, at most one undetermined type, Always0 suffix.
bool revealable_shape(const std::vector<TypeClass>& classes);

/// The queried agent's remaining domain at `node` has the revealable shape.
bool is_revealable(const SetSystemInstance& inst,
                   const ImplementationTree& tree, int node,
                   const OutcomeTable& outcomes);

enum class QueryKind { Bottom, Top, General };

/// Bottom splits off the minimum, Top the maximum (a two-type domain counts
/// as Bottom), anything else is General.
QueryKind query_kind(const ImplementationTree& tree, int node);

/// True when every internal node is binary and splits off an extreme.
bool is_extremal(const ImplementationTree& tree);

struct NodeCheck {
  bool ok = true;
  int node = -1;
  std::string detail;
};

/// Every internal node has a homogeneous part or the revealable split
/// shape with at most one undetermined boundary type.
NodeCheck check_admissible_queries(const SetSystemInstance& inst,
                                   const ImplementationTree& tree);

/// Along every path, top/bottom direction changes for an agent happen only
/// where she is revealable. Requires an extremal tree.
NodeCheck check_weak_interleaving(const SetSystemInstance& inst,
                                  const ImplementationTree& tree);

/// Recursive extensive-form construction from a priority table; queries are
/// extremal, uncommittable agents are skipped, leaves carry the surviving
/// solution. Requires an all-monotone table.
ImplementationTree build_tree_from_table(const SetSystemInstance& inst,
                                         const PriorityTable& table,
                                         long long node_cap = 1'000'000);

/// Replaces every k-ary query by a chain of binary ones; outcomes unchanged.
ImplementationTree binarize(const SetSystemInstance& inst,
                            const ImplementationTree& tree,
                            long long node_cap = 1'000'000);

/// Rewrites every non-extremal query into a chain of top/bottom queries via
/// the local transformations (homogeneous part: peel the constant-outcome
/// side; revealable: resolve the agent extremally). Outcomes unchanged;
/// caller guarantees the input is OSP.
ImplementationTree extremalize(const SetSystemInstance& inst,
                               const ImplementationTree& tree,
                               long long node_cap = 1'000'000);

/// Hoists the full resolution of any agent that becomes revealable: top
/// queries over her Always0 types, bottom queries over Always1, undetermined
/// type last. Requires an extremal input; outcomes unchanged.
ImplementationTree well_order(const SetSystemInstance& inst,
                              const ImplementationTree& tree,
                              long long node_cap = 1'000'000);

}  // namespace osp

#endif
