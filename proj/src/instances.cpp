#include "osp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "osp/errors.hpp"
#include "osp/idparse.hpp"

namespace osp {

int AgentDomain::index_of(const Rational& v) const {
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) return -1;
  return static_cast<int>(it - values.begin());
}

bool lex_mask_less(Mask a, Mask b) {
  while (a != 0 && b != 0) {
    int ia = __builtin_ctz(a), ib = __builtin_ctz(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

std::string mask_str(Mask m) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (mask_contains(m, i)) {
      if (!first) out << ',';
      out << i;
      first = false;
    }
  out << '}';
  return out.str();
}

FeasibleFamily FeasibleFamily::make_explicit(std::vector<Mask> sets) {
  if (sets.empty()) throw InvalidParams("explicit family must be nonempty");
  FeasibleFamily f;
  f.kind = Kind::Explicit;
  f.sets = std::move(sets);
  std::sort(f.sets.begin(), f.sets.end());
  f.sets.erase(std::unique(f.sets.begin(), f.sets.end()), f.sets.end());
  return f;
}

FeasibleFamily FeasibleFamily::make_knapsack(std::vector<long long> sizes,
                                             long long capacity) {
  for (long long s : sizes)
    if (s <= 0) throw InvalidParams("knapsack sizes must be positive");
  if (capacity <= 0) throw InvalidParams("knapsack capacity must be positive");
  FeasibleFamily f;
  f.kind = Kind::Knapsack;
  f.sizes = std::move(sizes);
  f.capacity = capacity;
  return f;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

bool is_spanning_tree(const std::vector<std::pair<int, int>>& edges,
                      int vertices, Mask subset) {
  if (mask_size(subset) != vertices - 1) return false;
  UnionFind uf(vertices);
  for (size_t e = 0; e < edges.size(); ++e)
    if (mask_contains(subset, static_cast<int>(e)))
      if (!uf.unite(edges[e].first, edges[e].second)) return false;
  int root = uf.find(0);
  for (int v = 1; v < vertices; ++v)
    if (uf.find(v) != root) return false;
  return true;
}

}  // namespace

FeasibleFamily FeasibleFamily::make_graphic_matroid(
    std::vector<std::pair<int, int>> edges) {
  if (edges.empty() || edges.size() > 8)
    throw InvalidParams("graphic matroid supports 1..8 edges");
  int vertices = 0;
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u == v)
      throw InvalidParams("bad matroid edge endpoints");
    vertices = std::max({vertices, u + 1, v + 1});
  }
  FeasibleFamily f;
  f.kind = Kind::GraphicMatroid;
  f.edges = std::move(edges);
  const int m = static_cast<int>(f.edges.size());
  for (Mask s = 0; s < (1u << m); ++s)
    if (is_spanning_tree(f.edges, vertices, s)) f.spanning_trees.push_back(s);
  if (f.spanning_trees.empty())
    throw InvalidParams("matroid graph is not connected");
  return f;
}

FeasibleFamily FeasibleFamily::make_parallel(std::vector<Mask> sets) {
  if (sets.empty()) throw InvalidParams("parallel family must be nonempty");
  Mask seen = 0;
  for (Mask s : sets) {
    if (s == 0) throw InvalidParams("parallel solutions must be nonempty");
    if (seen & s) throw InvalidParams("parallel solutions must be disjoint");
    seen |= s;
  }
  FeasibleFamily f;
  f.kind = Kind::ParallelSolutions;
  f.sets = std::move(sets);
  return f;
}

FeasibleFamily FeasibleFamily::make_downward_closure(std::vector<Mask> bases) {
  if (bases.empty()) throw InvalidParams("need at least one base set");
  FeasibleFamily f;
  f.kind = Kind::DownwardClosure;
  f.sets = std::move(bases);
  return f;
}

void SetSystemInstance::validate() const {
  if (n < 1 || n > 30) throw InvalidParams("agent count out of range");
  if (static_cast<int>(domains.size()) != n)
    throw InvalidParams("domains count != n");
  for (const auto& d : domains) {
    if (d.size() < 2) throw InvalidParams("domain needs at least 2 values");
    for (int i = 0; i < d.size(); ++i) {
      if (d.values[i] < 0) throw InvalidParams("types must be nonnegative");
      if (i > 0 && !(d.values[i - 1] < d.values[i]))
        throw InvalidParams("domain must be strictly ascending");
    }
  }
  const Mask all = (n == 32) ? ~0u : ((1u << n) - 1);
  auto check_range = [&](Mask s) {
    if (s & ~all) throw InvalidParams("feasible set uses out-of-range agent");
  };
  switch (family.kind) {
    case FeasibleFamily::Kind::Explicit:
    case FeasibleFamily::Kind::ParallelSolutions:
    case FeasibleFamily::Kind::DownwardClosure:
      if (family.sets.empty()) throw InvalidParams("empty family");
      for (Mask s : family.sets) check_range(s);
      break;
    case FeasibleFamily::Kind::Knapsack:
      if (static_cast<int>(family.sizes.size()) != n)
        throw InvalidParams("knapsack sizes count != n");
      break;
    case FeasibleFamily::Kind::GraphicMatroid:
      if (static_cast<int>(family.edges.size()) != n)
        throw InvalidParams("matroid edge count != n");
      break;
  }
}

long long SetSystemInstance::profile_count() const {
  long long total = 1;
  for (const auto& d : domains) {
    total *= d.size();
    if (total > (1LL << 62) / 32) throw CapExceeded("profile space overflow");
  }
  return total;
}

bool is_feasible(const SetSystemInstance& inst, Mask subset) {
  const auto& f = inst.family;
  switch (f.kind) {
    case FeasibleFamily::Kind::Explicit:
      return std::binary_search(f.sets.begin(), f.sets.end(), subset);
    case FeasibleFamily::Kind::Knapsack: {
      long long total = 0;
      for (int i = 0; i < inst.n; ++i)
        if (mask_contains(subset, i)) total += f.sizes[i];
      return total <= f.capacity;
    }
    case FeasibleFamily::Kind::GraphicMatroid:
      return std::find(f.spanning_trees.begin(), f.spanning_trees.end(),
                       subset) != f.spanning_trees.end();
    case FeasibleFamily::Kind::ParallelSolutions:
      return std::find(f.sets.begin(), f.sets.end(), subset) != f.sets.end();
    case FeasibleFamily::Kind::DownwardClosure:
      for (Mask base : f.sets)
        if ((subset & ~base) == 0) return true;
      return false;
  }
  return false;
}

std::vector<Mask> enumerate_family(const SetSystemInstance& inst,
                                   int enumeration_cap_n) {
  const auto& f = inst.family;
  switch (f.kind) {
    case FeasibleFamily::Kind::Explicit:
    case FeasibleFamily::Kind::ParallelSolutions:
      return f.sets;
    case FeasibleFamily::Kind::GraphicMatroid:
      return f.spanning_trees;
    case FeasibleFamily::Kind::Knapsack:
    case FeasibleFamily::Kind::DownwardClosure: {
      if (inst.n > enumeration_cap_n)
        throw CapExceeded("family enumeration over 2^n exceeds cap");
      std::vector<Mask> out;
      for (Mask s = 0; s < (1u << inst.n); ++s)
        if (is_feasible(inst, s)) out.push_back(s);
      return out;
    }
  }
  return {};
}

Rational objective_value(const SetSystemInstance& inst,
                         const TypeProfile& profile, const Solution& sol) {
  Rational total = 0;
  for (int i = 0; i < inst.n; ++i)
    if (sol.contains(i)) total += profile[i];
  return total;
}

std::pair<Solution, Rational> brute_force_optimum(
    const SetSystemInstance& inst, const TypeProfile& profile,
    int enumeration_cap_n) {
  auto sets = enumerate_family(inst, enumeration_cap_n);
  if (sets.empty()) throw NoProgress("family has no feasible set");
  bool have = false;
  Mask best_mask = 0;
  Rational best = 0;
  for (Mask s : sets) {
    Rational v = objective_value(inst, profile, Solution{s});
    bool better;
    if (!have)
      better = true;
    else if (inst.orientation == Orientation::Cost)
      better = v < best || (v == best && lex_mask_less(s, best_mask));
    else
      better = v > best || (v == best && lex_mask_less(s, best_mask));
    if (better) {
      best = v;
      best_mask = s;
      have = true;
    }
  }
  return {Solution{best_mask}, best};
}

ProfileSpace::ProfileSpace(const SetSystemInstance& inst) {
  stride.resize(inst.n);
  total = 1;
  for (int i = inst.n - 1; i >= 0; --i) {
    stride[i] = total;
    total *= inst.domains[i].size();
  }
}

std::vector<int> ProfileSpace::indices_at(long long id) const {
  std::vector<int> out(stride.size());
  for (size_t i = 0; i < stride.size(); ++i) {
    out[i] = static_cast<int>(id / stride[i]);
    id %= stride[i];
  }
  return out;
}

long long ProfileSpace::id_of(const std::vector<int>& indices) const {
  long long id = 0;
  for (size_t i = 0; i < stride.size(); ++i) id += indices[i] * stride[i];
  return id;
}

TypeProfile profile_from_indices(const SetSystemInstance& inst,
                                 const std::vector<int>& indices) {
  TypeProfile p(inst.n);
  for (int i = 0; i < inst.n; ++i) p[i] = inst.domains[i].values[indices[i]];
  return p;
}

std::vector<int> indices_of_profile(const SetSystemInstance& inst,
                                    const TypeProfile& profile) {
  std::vector<int> out(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    out[i] = inst.domains[i].index_of(profile[i]);
    if (out[i] < 0)
      throw InvalidParams("profile value not in agent domain: " +
                          fraction_str(profile[i]));
  }
  return out;
}

std::string profile_str(const TypeProfile& p) {
  std::ostringstream out;
  out << '(';
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out << ',';
    out << fraction_str(p[i]);
  }
  out << ')';
  return out.str();
}

namespace {

AgentDomain domain_of(std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  return AgentDomain{std::move(values)};
}

SetSystemInstance finish(SetSystemInstance inst) {
  inst.validate();
  return inst;
}

void require(bool cond, const std::string& what) {
  if (!cond)
    throw InvalidParams("construction inequality violated after rounding: " +
                        what);
}

}  // namespace

SetSystemInstance make_sc_parallel() {
  SetSystemInstance inst;
  inst.n = 3;
  inst.orientation = Orientation::Cost;
  std::vector<Rational> d = {10, 22, 36};
  inst.domains = {domain_of(d), domain_of(d), domain_of(d)};
  inst.family = FeasibleFamily::make_parallel({0b001u, 0b110u});
  return finish(inst);
}

SetSystemInstance make_sw_parallel() {
  const Rational tmed = round_sig12(1.0L / std::sqrt(2.0L));
  require(Rational(0) < tmed && tmed < 1, "0 < tmed < 1");
  SetSystemInstance inst;
  inst.n = 3;
  inst.orientation = Orientation::Valuation;
  std::vector<Rational> d = {Rational(0), tmed, Rational(1)};
  inst.domains = {domain_of(d), domain_of(d), domain_of(d)};
  inst.family = FeasibleFamily::make_parallel({0b001u, 0b110u});
  return finish(inst);
}

SetSystemInstance make_dc_gap(int k) {
  if (k < 4 || k % 2 != 0) throw InvalidParams("dc-gap requires even k >= 4");
  const Rational rho = round_sig12((1.0L + std::sqrt(5.0L)) / 2.0L);
  const Rational tmin = 1;
  const Rational tmed = rho * k;
  const Rational tmax = Rational(k, 2) * (tmed + tmin);
  require(tmin < tmed, "tmin < tmed");
  require(tmed < tmax, "tmed < tmax");
  // tmax == (k/2)(tmed + tmin) holds exactly by construction; the case
  // analysis of the bundled algorithm relies on it.
  SetSystemInstance inst;
  inst.n = k + 1;
  inst.orientation = Orientation::Valuation;
  std::vector<Rational> d = {tmin, tmed, tmax};
  inst.domains.assign(inst.n, domain_of(d));
  const Mask T = ((1u << k) - 1) << 1;
  inst.family = FeasibleFamily::make_downward_closure({0b1u, T});
  return finish(inst);
}

SetSystemInstance make_two_solutions(int s, int k, const Rational& tmin,
                                     const Rational& tmax) {
  if (s < 1 || k < 1 || s + k > 24) throw InvalidParams("bad s/k");
  if (!(Rational(0) < tmin && tmin < tmax))
    throw InvalidParams("need 0 < tmin < tmax");
  SetSystemInstance inst;
  inst.n = s + k;
  inst.orientation = Orientation::Cost;
  inst.domains.assign(inst.n, domain_of({tmin, tmax}));
  const Mask S = (1u << s) - 1;
  const Mask T = ((1u << k) - 1) << s;
  inst.family = FeasibleFamily::make_parallel({S, T});
  return finish(inst);
}

SetSystemInstance make_asym_knapsack(int k, const Rational& tmin,
                                     const Rational& tmed,
                                     const Rational& tmax) {
  if (k < 2) throw InvalidParams("asym-knapsack requires k >= 2");
  require(Rational(0) <= tmin && tmin < tmed && tmed < tmax,
          "0 <= tmin < tmed < tmax");
  SetSystemInstance inst;
  inst.n = k + 1;
  inst.orientation = Orientation::Valuation;
  inst.domains.assign(inst.n, domain_of({tmin, tmed, tmax}));
  const Mask T = ((1u << k) - 1) << 1;
  inst.family = FeasibleFamily::make_parallel({0b1u, T});
  return finish(inst);
}

SetSystemInstance make_knapsack_log(int k) {
  if (k < 2) throw InvalidParams("knapsack-log requires k >= 2");
  std::vector<Rational> d;
  d.push_back(0);
  const long double scale = std::sqrt(2.0L * std::log(static_cast<long double>(k)));
  for (int x = k; x >= 1; --x) d.push_back(round_sig12(1.0L / (x * scale)));
  d.push_back(1);
  for (size_t i = 1; i < d.size(); ++i)
    require(d[i - 1] < d[i], "t_{x+1} < t_x chain stays strict");
  SetSystemInstance inst;
  inst.n = k + 1;
  inst.orientation = Orientation::Valuation;
  inst.domains.assign(inst.n, AgentDomain{d});
  const Mask T = ((1u << k) - 1) << 1;
  inst.family = FeasibleFamily::make_downward_closure({0b1u, T});
  return finish(inst);
}

SetSystemInstance make_ca_appendix_b(const Rational& tmed,
                                     const Rational& tmax) {
  require(Rational(0) < tmed && 2 * tmed < tmax, "0 < tmed, 2*tmed < tmax");
  SetSystemInstance inst;
  inst.n = 3;
  inst.orientation = Orientation::Valuation;
  inst.domains.assign(3, domain_of({Rational(0), tmed, tmax}));
  // Bidders 0 and 1 hold disjoint single items; bidder 2 wants both.
  inst.family = FeasibleFamily::make_downward_closure({0b011u, 0b100u});
  return finish(inst);
}

SetSystemInstance make_triangle_matroid() {
  return make_matroid_instance(
      {{0, 1}, {1, 2}, {0, 2}},
      {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
}

SetSystemInstance make_matroid_instance(
    std::vector<std::pair<int, int>> edges,
    std::vector<std::vector<Rational>> domains) {
  SetSystemInstance inst;
  inst.n = static_cast<int>(edges.size());
  inst.orientation = Orientation::Cost;
  for (auto& d : domains) inst.domains.push_back(domain_of(std::move(d)));
  inst.family = FeasibleFamily::make_graphic_matroid(std::move(edges));
  return finish(inst);
}

SetSystemInstance make_paper_instance(const std::string& id) {
  IdSpec spec = parse_id_spec(id);
  if (spec.name == "sc-parallel") return make_sc_parallel();
  if (spec.name == "sw-parallel") return make_sw_parallel();
  if (spec.name == "dc-gap") return make_dc_gap(spec.int_param("k"));
  if (spec.name == "two-solutions")
    return make_two_solutions(spec.int_param("s"), spec.int_param("k"),
                              spec.rat_param("tmin", "1"),
                              spec.rat_param("tmax", "100"));
  if (spec.name == "asym-knapsack")
    return make_asym_knapsack(spec.int_param("k"), spec.rat_param("tmin", "0"),
                              spec.rat_param("tmed"),
                              spec.rat_param("tmax", "1"));
  if (spec.name == "knapsack-log")
    return make_knapsack_log(spec.int_param("k"));
  if (spec.name == "ca-appendixB") return make_ca_appendix_b();
  if (spec.name == "matroid") return make_triangle_matroid();
  throw UnknownId("unknown instance id: " + id);
}

}  // namespace osp
