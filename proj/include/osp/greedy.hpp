#ifndef OSP_GREEDY_HPP
#define OSP_GREEDY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osp/instances.hpp"

namespace osp {

enum class Direction { In, Out };

inline Direction opposite(Direction d) {
  return d == Direction::In ? Direction::Out : Direction::In;
}

std::string direction_str(Direction d);

/// Bids of the agents that have left the auction (committed either way),
/// keyed by agent index. Extension order models the A' subset-of A relation.
using History = std::map<int, Rational>;

/// h_sub is a sub-history of h_super (every committed bid agrees).
bool history_extends(const History& h_super, const History& h_sub);

struct PriorityEntry {
  int agent = 0;
  Direction dir = Direction::In;
  Rational type;
  bool any_history = false;  // wildcard entry, applies when no exact match
  History history;           // ignored when any_history
  Rational rank;
};

enum class MissingPolicy { FailOnMissing, FloorMissing };

/// Explicit finite materialization of the priority functions g^(in)/g^(out).
/// Ranks are pairwise distinct; at most one entry per
/// (agent, direction, type, history) key.
class PriorityTable {
 public:
  MissingPolicy policy = MissingPolicy::FloorMissing;

  void add(PriorityEntry e);
  const std::vector<PriorityEntry>& entries() const { return entries_; }

  /// Effective rank at a history: exact match first, wildcard fallback,
  /// otherwise nothing (floored or error per policy, decided by callers).
  std::optional<Rational> rank(int agent, Direction d, const Rational& type,
                               const History& h) const;

 private:
  using ExactKey = std::tuple<int, int, Rational, History>;
  using AnyKey = std::tuple<int, int, Rational>;
  std::vector<PriorityEntry> entries_;
  std::map<ExactKey, size_t> exact_;
  std::map<AnyKey, size_t> any_;
  std::map<Rational, size_t> ranks_;
};

/// One candidate (agent, direction) priority as seen by an engine round.
/// Missing entries under FloorMissing order below every defined rank,
/// tie-broken by (agent, In-before-Out, type).
struct Candidate {
  int agent = -1;
  Direction dir = Direction::In;
  std::optional<Rational> rank;
  Rational type;
};

/// Strict "higher priority" order on candidates.
bool candidate_higher(const Candidate& a, const Candidate& b);

enum class StepAction { Committed, MarkedInfeasibleOrIn };

struct TraceStep {
  int agent;
  Direction dir;
  std::optional<Rational> rank_used;  // nullopt when floored
  StepAction action;
};

struct GreedyTrace {
  std::vector<TraceStep> steps;
  Solution final_solution;
};

enum class EngineKind { Forward, Reverse, TwoWay };

GreedyTrace forward_greedy(const SetSystemInstance& inst,
                           const PriorityTable& table,
                           const TypeProfile& profile);
GreedyTrace reverse_greedy(const SetSystemInstance& inst,
                           const PriorityTable& table,
                           const TypeProfile& profile);
GreedyTrace two_way_greedy(const SetSystemInstance& inst,
                           const PriorityTable& table,
                           const TypeProfile& profile);
GreedyTrace run_engine(EngineKind kind, const SetSystemInstance& inst,
                       const PriorityTable& table, const TypeProfile& profile);

struct MonotoneViolation {
  int agent;
  Direction dir;
  Rational better_type;
  Rational worse_type;
};

struct MonotoneReport {
  bool ok = true;
  std::optional<MonotoneViolation> violation;
};

/// In-ranks must strictly favor better types (lower cost / higher
/// valuation), out-ranks the reverse, per (agent, direction, history) group.
MonotoneReport check_all_monotone(const SetSystemInstance& inst,
                                  const PriorityTable& table);

struct InterleavingReport {
  bool ok = true;
  std::string detail;  // human-readable first violation
};

/// Direction changes must immediately resolve all but at most one of the
/// agent's unexplored types ahead of every other agent's unexplored types.
InterleavingReport check_interleaving(const SetSystemInstance& inst,
                                      const PriorityTable& table);

// Bundled experiment tables.

/// Two-way rule for the sc-parallel instance: T exactly when the singleton
/// agent bids 36 while T holds a 10 and no 36.
PriorityTable make_thm8_two_way_table();
/// Six-entry mixed ordering for sw-parallel.
PriorityTable make_thm9_ordering_table();
/// Forward priority schedule for asymmetric restricted knapsack auctions
/// (rank bands 3000/2000/1000 with unit spacing).
PriorityTable make_alg5_table(int k, const Rational& tmin, const Rational& tmed,
                              const Rational& tmax);
/// Adaptive two-way schedule for the dc-gap family, materialized over every
/// reachable history.
PriorityTable make_alg4_table(int k);

/// Dispatches "thm8-two-way", "thm9-ordering", "alg4(k=6)",
/// "alg5(k=4,tmed=1/2)".
PriorityTable make_paper_priority_table(const std::string& id);

}  // namespace osp

#endif
