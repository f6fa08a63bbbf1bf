#ifndef OSP_INSTANCES_HPP
#define OSP_INSTANCES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "osp/rational.hpp"

namespace osp {

/// Whether the objective is minimized (costs) or maximized (valuations).
/// Types are stored as nonnegative magnitudes in both cases; query
/// directions and optimization sense are derived from the orientation.
enum class Orientation { Cost, Valuation };

/// Finite, strictly ascending type domain of one agent.
struct AgentDomain {
  std::vector<Rational> values;

  int size() const { return static_cast<int>(values.size()); }
  const Rational& min() const { return values.front(); }
  const Rational& max() const { return values.back(); }
  /// Index of a value, or -1 when absent.
  int index_of(const Rational& v) const;
};

/// Subsets of agents are bitmasks over indices 0..n-1.
using Mask = std::uint32_t;

inline bool mask_contains(Mask m, int i) { return (m >> i) & 1u; }
inline int mask_size(Mask m) { return __builtin_popcount(m); }

/// Lexicographic order on the sorted index sequences of two sets
/// ({0,1} < {0,2} < {1}; a strict prefix sorts first).
bool lex_mask_less(Mask a, Mask b);

std::string mask_str(Mask m);

/// Family of feasible agent subsets, in one of five concrete shapes.
struct FeasibleFamily {
  enum class Kind {
    Explicit,
    Knapsack,
    GraphicMatroid,
    ParallelSolutions,
    DownwardClosure
  };

  Kind kind = Kind::Explicit;
  std::vector<Mask> sets;  // Explicit members / ParallelSolutions / DC bases
  std::vector<long long> sizes;  // Knapsack
  long long capacity = 0;        // Knapsack
  std::vector<std::pair<int, int>> edges;  // GraphicMatroid (multigraph)
  std::vector<Mask> spanning_trees;        // GraphicMatroid, enumerated

  static FeasibleFamily make_explicit(std::vector<Mask> sets);
  static FeasibleFamily make_knapsack(std::vector<long long> sizes,
                                      long long capacity);
  /// Spanning trees are enumerated at construction; at most 8 edges.
  static FeasibleFamily make_graphic_matroid(
      std::vector<std::pair<int, int>> edges);
  static FeasibleFamily make_parallel(std::vector<Mask> sets);
  static FeasibleFamily make_downward_closure(std::vector<Mask> bases);
};

struct SetSystemInstance {
  int n = 0;
  Orientation orientation = Orientation::Cost;
  std::vector<AgentDomain> domains;
  FeasibleFamily family;

  /// Validates every structural invariant (sorted domains, nonempty family,
  /// subsets in range, disjointness/downward closure where required).
  void validate() const;

  long long profile_count() const;
};

/// One type per agent, each drawn from that agent's domain.
using TypeProfile = std::vector<Rational>;

struct Solution {
  Mask selected = 0;
  bool contains(int i) const { return mask_contains(selected, i); }
};

bool is_feasible(const SetSystemInstance& inst, Mask subset);

/// Lists every feasible set. Knapsack and DownwardClosure enumerate all
/// 2^n subsets and are capped (CapExceeded beyond enumeration_cap_n).
std::vector<Mask> enumerate_family(const SetSystemInstance& inst,
                                   int enumeration_cap_n = 20);

Rational objective_value(const SetSystemInstance& inst,
                         const TypeProfile& profile, const Solution& sol);

/// Exhaustive optimum: minimizes (Cost) or maximizes (Valuation), ties
/// broken by the lexicographically smallest selected index set.
std::pair<Solution, Rational> brute_force_optimum(
    const SetSystemInstance& inst, const TypeProfile& profile,
    int enumeration_cap_n = 20);

/// `a` is a strictly better type than `b` under the instance orientation
/// (lower cost / higher valuation).
inline bool better_type(Orientation o, const Rational& a, const Rational& b) {
  return o == Orientation::Cost ? a < b : a > b;
}

/// Cost sign convention for OSP-graph weights: valuations are negative
/// costs.
inline Rational signed_cost(Orientation o, const Rational& v) {
  return o == Orientation::Cost ? v : Rational(-v);
}

/// Mixed-radix enumeration of full type profiles.
struct ProfileSpace {
  std::vector<long long> stride;
  long long total = 1;

  explicit ProfileSpace(const SetSystemInstance& inst);
  std::vector<int> indices_at(long long id) const;
  long long id_of(const std::vector<int>& indices) const;
};

TypeProfile profile_from_indices(const SetSystemInstance& inst,
                                 const std::vector<int>& indices);
std::vector<int> indices_of_profile(const SetSystemInstance& inst,
                                    const TypeProfile& profile);

std::string profile_str(const TypeProfile& p);

// Instance families used by the bundled experiments. Constructors round
// irrational constants to 12 significant digits and re-verify the strict
// inequalities each construction depends on, failing loudly otherwise.

/// Parallel solutions S={x}, T={y,z}; cost domains {10,22,36}.
SetSystemInstance make_sc_parallel();
/// Same family, valuation domains {0, ~1/sqrt(2), 1}.
SetSystemInstance make_sw_parallel();
/// {S} plus all subsets of T with |T|=k (even, >=4); valuation domains
/// {1, rho*k, (k/2)(rho*k+1)} with rho ~ (1+sqrt 5)/2.
SetSystemInstance make_dc_gap(int k);
/// Two disjoint feasible solutions with s and k agents, cost domains
/// {tmin, tmax}.
SetSystemInstance make_two_solutions(int s, int k, const Rational& tmin,
                                     const Rational& tmax);
/// Asymmetric restricted knapsack: S={0}, T={1..k}; valuation domains
/// {tmin, tmed, tmax}.
SetSystemInstance make_asym_knapsack(int k, const Rational& tmin,
                                     const Rational& tmed,
                                     const Rational& tmax);
/// Downward-closed knapsack-auction separation family: domains
/// {0} + {1/(x*sqrt(2 ln k))} + {1}.
SetSystemInstance make_knapsack_log(int k);
/// Three single-minded bidders over two items: bidder 2 and 0/1 compatible,
/// bidder 2 wants the bundle; valuation domains {0, tmed, tmax}, 2*tmed <
/// tmax.
SetSystemInstance make_ca_appendix_b(const Rational& tmed = Rational(1),
                                     const Rational& tmax = Rational(3));
/// Triangle multigraph matroid, cost domains {1,2,3} per edge.
SetSystemInstance make_triangle_matroid();

/// Graphic matroid instance from an explicit edge list and per-edge domains.
SetSystemInstance make_matroid_instance(
    std::vector<std::pair<int, int>> edges,
    std::vector<std::vector<Rational>> domains);

/// Dispatches an id string like "sc-parallel" or "dc-gap(k=6)".
SetSystemInstance make_paper_instance(const std::string& id);

}  // namespace osp

#endif
