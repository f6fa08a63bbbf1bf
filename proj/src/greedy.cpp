#include "osp/greedy.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

#include "osp/errors.hpp"
#include "osp/idparse.hpp"

namespace osp {

std::string direction_str(Direction d) {
  return d == Direction::In ? "in" : "out";
}

bool history_extends(const History& h_super, const History& h_sub) {
  for (const auto& [agent, value] : h_sub) {
    auto it = h_super.find(agent);
    if (it == h_super.end() || it->second != value) return false;
  }
  return true;
}

void PriorityTable::add(PriorityEntry e) {
  if (ranks_.count(e.rank))
    throw InvalidParams("duplicate rank in priority table: " +
                        fraction_str(e.rank));
  const int d = e.dir == Direction::In ? 0 : 1;
  if (e.any_history) {
    AnyKey key{e.agent, d, e.type};
    if (any_.count(key))
      throw InvalidParams("duplicate wildcard priority entry");
    any_[key] = entries_.size();
  } else {
    ExactKey key{e.agent, d, e.type, e.history};
    if (exact_.count(key)) throw InvalidParams("duplicate priority entry");
    exact_[key] = entries_.size();
  }
  ranks_[e.rank] = entries_.size();
  entries_.push_back(std::move(e));
}

std::optional<Rational> PriorityTable::rank(int agent, Direction dir,
                                            const Rational& type,
                                            const History& h) const {
  const int d = dir == Direction::In ? 0 : 1;
  auto it = exact_.find(ExactKey{agent, d, type, h});
  if (it != exact_.end()) return entries_[it->second].rank;
  auto jt = any_.find(AnyKey{agent, d, type});
  if (jt != any_.end()) return entries_[jt->second].rank;
  return std::nullopt;
}

bool candidate_higher(const Candidate& a, const Candidate& b) {
  if (a.rank.has_value() != b.rank.has_value()) return a.rank.has_value();
  if (a.rank.has_value()) return *a.rank > *b.rank;
  // Floored ties: deterministic order by (agent, In-first, type).
  const int da = a.dir == Direction::In ? 0 : 1;
  const int db = b.dir == Direction::In ? 0 : 1;
  if (a.agent != b.agent) return a.agent < b.agent;
  if (da != db) return da < db;
  return a.type < b.type;
}

namespace {

struct EngineState {
  std::vector<Mask> pool;          // surviving feasible solutions
  std::vector<char> active;        // still in A
  std::vector<char> infeasible;    // in I
  History history;
};

bool can_commit(const std::vector<Mask>& pool, int agent, Direction dir) {
  for (Mask s : pool) {
    bool in = mask_contains(s, agent);
    if (dir == Direction::In ? in : !in) return true;
  }
  return false;
}

void commit(std::vector<Mask>& pool, int agent, Direction dir) {
  std::vector<Mask> kept;
  for (Mask s : pool) {
    bool in = mask_contains(s, agent);
    if (dir == Direction::In ? in : !in) kept.push_back(s);
  }
  pool.swap(kept);
}

}  // namespace

GreedyTrace run_engine(EngineKind kind, const SetSystemInstance& inst,
                       const PriorityTable& table,
                       const TypeProfile& profile) {
  if (static_cast<int>(profile.size()) != inst.n)
    throw InvalidParams("profile length != n");
  EngineState st;
  st.pool = enumerate_family(inst);
  st.active.assign(inst.n, 1);
  st.infeasible.assign(inst.n, 0);
  if (st.pool.empty()) throw NoProgress("family has no feasible set");

  GreedyTrace trace;
  int iterations = 0;
  while (st.pool.size() > 1) {
    if (++iterations > 2 * inst.n)
      throw NoProgress("engine exceeded 2n iterations");
    std::optional<Candidate> best;
    bool any_agent = false;
    for (int i = 0; i < inst.n; ++i) {
      if (!st.active[i] || st.infeasible[i]) continue;
      any_agent = true;
      auto consider = [&](Direction d) {
        auto r = table.rank(i, d, profile[i], st.history);
        if (!r && table.policy == MissingPolicy::FailOnMissing)
          throw MissingPriority("no priority for agent " + std::to_string(i) +
                                " " + direction_str(d) + " type " +
                                fraction_str(profile[i]));
        Candidate c{i, d, r, profile[i]};
        if (!best || candidate_higher(c, *best)) best = c;
      };
      if (kind != EngineKind::Reverse) consider(Direction::In);
      if (kind != EngineKind::Forward) consider(Direction::Out);
    }
    if (!any_agent || !best)
      throw NoProgress("no active agents left with " +
                       std::to_string(st.pool.size()) + " solutions in play");

    const int i = best->agent;
    if (can_commit(st.pool, i, best->dir)) {
      commit(st.pool, i, best->dir);
      st.active[i] = 0;
      st.history[i] = profile[i];
      trace.steps.push_back(
          TraceStep{i, best->dir, best->rank, StepAction::Committed});
    } else {
      st.infeasible[i] = 1;
      trace.steps.push_back(TraceStep{i, best->dir, best->rank,
                                      StepAction::MarkedInfeasibleOrIn});
    }
  }
  trace.final_solution = Solution{st.pool.front()};
  return trace;
}

GreedyTrace forward_greedy(const SetSystemInstance& inst,
                           const PriorityTable& table,
                           const TypeProfile& profile) {
  return run_engine(EngineKind::Forward, inst, table, profile);
}

GreedyTrace reverse_greedy(const SetSystemInstance& inst,
                           const PriorityTable& table,
                           const TypeProfile& profile) {
  return run_engine(EngineKind::Reverse, inst, table, profile);
}

GreedyTrace two_way_greedy(const SetSystemInstance& inst,
                           const PriorityTable& table,
                           const TypeProfile& profile) {
  return run_engine(EngineKind::TwoWay, inst, table, profile);
}

MonotoneReport check_all_monotone(const SetSystemInstance& inst,
                                  const PriorityTable& table) {
  // Group key: (agent, dir, wildcard?, history); entries within one group
  // must be strictly ordered by type quality.
  using GroupKey = std::tuple<int, int, int, History>;
  std::map<GroupKey, std::vector<const PriorityEntry*>> groups;
  for (const auto& e : table.entries()) {
    GroupKey key{e.agent, e.dir == Direction::In ? 0 : 1,
                 e.any_history ? 1 : 0,
                 e.any_history ? History{} : e.history};
    groups[key].push_back(&e);
  }
  for (auto& [key, list] : groups) {
    std::sort(list.begin(), list.end(),
              [](const PriorityEntry* a, const PriorityEntry* b) {
                return a->type < b->type;
              });
    for (size_t a = 0; a < list.size(); ++a)
      for (size_t b = a + 1; b < list.size(); ++b) {
        const auto *ea = list[a], *eb = list[b];
        const bool a_better =
            better_type(inst.orientation, ea->type, eb->type);
        const auto *better = a_better ? ea : eb, *worse = a_better ? eb : ea;
        const bool want_better_higher = ea->dir == Direction::In;
        const bool ok = want_better_higher ? better->rank > worse->rank
                                           : better->rank < worse->rank;
        if (!ok)
          return MonotoneReport{
              false, MonotoneViolation{ea->agent, ea->dir, better->type,
                                       worse->type}};
      }
  }
  return MonotoneReport{};
}

namespace {

// Effective priority of (agent, dir, type) at an exact history, floored
// entries included, comparable via candidate_higher.
Candidate effective(const PriorityTable& table, int agent, Direction d,
                    const Rational& type, const History& h) {
  return Candidate{agent, d, table.rank(agent, d, type, h), type};
}

bool sub_history_compatible(const PriorityEntry& e, bool any, const History& h) {
  // e's history must be a sub-map of h (earlier-or-equal exploration point).
  if (e.any_history || any) return true;
  return history_extends(h, e.history);
}

bool ext_history_compatible(const PriorityEntry& e, bool any, const History& h) {
  if (e.any_history || any) return true;
  return history_extends(e.history, h);
}

}  // namespace

InterleavingReport check_interleaving(const SetSystemInstance& inst,
                                      const PriorityTable& table) {
  const auto& entries = table.entries();
  std::vector<const PriorityEntry*> order;
  for (const auto& e : entries) order.push_back(&e);
  std::sort(order.begin(), order.end(),
            [](const PriorityEntry* a, const PriorityEntry* b) {
              return a->rank > b->rank;
            });

  // Explored types of agent j at exploration point `e`: any entry of j at a
  // compatible earlier history ranked above e, plus e's own bid for its
  // agent. Unexplored = domain complement.
  auto explored = [&](int j, const PriorityEntry& at) {
    std::set<Rational> out;
    for (const auto& o : entries) {
      if (o.agent != j || o.rank <= at.rank) continue;
      if (sub_history_compatible(o, at.any_history, at.history))
        out.insert(o.type);
    }
    if (j == at.agent) out.insert(at.type);
    return out;
  };
  auto unexplored = [&](int j, const PriorityEntry& at) {
    auto seen = explored(j, at);
    std::vector<Rational> out;
    for (const auto& v : inst.domains[j].values)
      if (!seen.count(v)) out.push_back(v);
    return out;
  };

  for (const PriorityEntry* e : order) {
    auto unexplored_at_e = unexplored(e->agent, *e);
    for (const PriorityEntry* e2 : order) {
      if (e2->agent != e->agent || e2->dir != opposite(e->dir)) continue;
      if (e2->rank >= e->rank) continue;
      if (!ext_history_compatible(*e2, e->any_history, e->history)) continue;
      if (std::find(unexplored_at_e.begin(), unexplored_at_e.end(),
                    e2->type) == unexplored_at_e.end())
        continue;
      // Direction change for e->agent at e2: all but at most one unexplored
      // type of the agent must rank above every other agent's unexplored
      // type at e2's history.
      const History h2 = e2->any_history ? History{} : e2->history;
      auto xs = unexplored(e->agent, *e2);
      int failing = 0;
      std::string first_fail;
      for (const auto& x : xs) {
        Candidate x_worst = effective(table, e->agent, Direction::In, x, h2);
        Candidate x_out = effective(table, e->agent, Direction::Out, x, h2);
        if (candidate_higher(x_worst, x_out)) x_worst = x_out;
        bool ok = true;
        for (int j = 0; j < inst.n && ok; ++j) {
          if (j == e->agent) continue;
          for (const auto& y : unexplored(j, *e2)) {
            Candidate y_best = effective(table, j, Direction::In, y, h2);
            Candidate y_out = effective(table, j, Direction::Out, y, h2);
            if (candidate_higher(y_out, y_best)) y_best = y_out;
            if (!candidate_higher(x_worst, y_best)) {
              ok = false;
              std::ostringstream msg;
              msg << "agent " << e->agent << " switches "
                  << direction_str(e->dir) << "->" << direction_str(e2->dir)
                  << " at type " << fraction_str(e2->type)
                  << "; unexplored type " << fraction_str(x)
                  << " does not outrank agent " << j << " type "
                  << fraction_str(y);
              first_fail = msg.str();
              break;
            }
          }
        }
        if (!ok) ++failing;
      }
      if (failing > 1) return InterleavingReport{false, first_fail};
    }
  }
  return InterleavingReport{};
}

PriorityTable make_thm8_two_way_table() {
  PriorityTable t;
  auto add = [&](int agent, Direction d, int type, int rank) {
    t.add(PriorityEntry{agent, d, Rational(type), true, {}, Rational(rank)});
  };
  // Agents: 0 = x (solution S), 1 = y, 2 = z (solution T); costs {10,22,36}.
  add(1, Direction::Out, 36, 1000);
  add(2, Direction::Out, 36, 999);
  add(0, Direction::In, 10, 998);
  add(0, Direction::In, 22, 997);
  add(1, Direction::In, 10, 996);
  add(2, Direction::In, 10, 995);
  add(0, Direction::In, 36, 994);
  add(1, Direction::In, 22, 500);
  add(1, Direction::In, 36, 499);
  add(2, Direction::In, 22, 498);
  add(2, Direction::In, 36, 497);
  add(1, Direction::Out, 22, 400);
  add(1, Direction::Out, 10, 399);
  add(2, Direction::Out, 22, 398);
  add(2, Direction::Out, 10, 397);
  add(0, Direction::Out, 36, 300);
  add(0, Direction::Out, 22, 299);
  add(0, Direction::Out, 10, 298);
  return t;
}

PriorityTable make_thm9_ordering_table() {
  const SetSystemInstance inst = make_sw_parallel();
  const Rational tmin = inst.domains[0].values[0];
  const Rational tmed = inst.domains[0].values[1];
  const Rational tmax = inst.domains[0].values[2];
  PriorityTable t;
  auto add = [&](int agent, Direction d, const Rational& type, int rank) {
    t.add(PriorityEntry{agent, d, type, true, {}, Rational(rank)});
  };
  add(1, Direction::In, tmax, 600);
  add(2, Direction::In, tmax, 500);
  add(0, Direction::Out, tmin, 400);
  add(1, Direction::Out, tmin, 300);
  add(2, Direction::Out, tmin, 200);
  add(1, Direction::In, tmed, 100);
  return t;
}

PriorityTable make_alg5_table(int k, const Rational& tmin, const Rational& tmed,
                              const Rational& tmax) {
  if (k < 2 || k > 900) throw InvalidParams("alg5 requires 2 <= k <= 900");
  if (!(tmin < tmed && tmed < tmax))
    throw InvalidParams("alg5 requires tmin < tmed < tmax");
  // Bands V=3000, V'=2000, V''=1000, unit spacing inside; only the order
  // matters. Agent 0 is the singleton solution, 1..k the large one.
  PriorityTable t;
  auto add = [&](int agent, Direction d, const Rational& type, int rank) {
    t.add(PriorityEntry{agent, d, type, true, {}, Rational(rank)});
  };
  for (int i = 1; i <= k; ++i) add(i, Direction::In, tmax, 3000 + i);

  const bool max_first =
      tmed <= tmax / k ||
      tmax / (tmed + (k - 1) * tmin) > Rational(k) * tmed / tmax;
  if (max_first) {
    for (int i = 1; i <= k; ++i) add(i, Direction::In, tmed, 2000 + i);
    add(0, Direction::In, tmax, 2000 + k + 1);
  } else {
    add(0, Direction::In, tmax, 2001);
    for (int i = 1; i <= k; ++i) add(i, Direction::In, tmed, 2001 + i);
  }
  if (tmed > Rational(k) * tmin) add(0, Direction::In, tmed, 1001);
  add(1, Direction::In, tmin, 999);  // dummy priority, returns the big side
  return t;
}

namespace {

// Materializes the adaptive dc-gap schedule by walking its extensive form:
// each probe asks one agent for an extreme of her remaining domain, emits
// one priority entry at the exact current history, and branches on the
// answer. Ranks decrease in emission order, which orders the no-chain at
// each history correctly.
class Alg4Builder {
 public:
  explicit Alg4Builder(int k)
      : k_(k), inst_(make_dc_gap(k)), next_rank_(1'000'000'000) {
    values_ = inst_.domains[0].values;  // {tmin, tmed, tmax}
  }

  PriorityTable build() {
    State st;
    st.dom.assign(inst_.n, {0, 1, 2});
    st.pool = enumerate_family(inst_);
    phase_top_queries(st, 1);
    return std::move(table_);
  }

 private:
  struct State {
    std::vector<std::vector<int>> dom;
    std::vector<Mask> pool;
    History history;
  };

  void emit(const State& st, int agent, Direction d, int type_idx) {
    // Probes are extremal: In asks the best remaining valuation (max), Out
    // the worst (min).
    const auto& dom = st.dom[agent];
    assert(!dom.empty());
    assert(type_idx == (d == Direction::In ? dom.back() : dom.front()));
    table_.add(PriorityEntry{agent, d, values_[type_idx], false, st.history,
                             Rational(static_cast<long>(next_rank_--))});
  }

  static void remove_type(State& st, int agent, int type_idx) {
    auto& dom = st.dom[agent];
    dom.erase(std::remove(dom.begin(), dom.end(), type_idx), dom.end());
  }

  State committed(const State& st, int agent, Direction d, int type_idx) {
    State out = st;
    std::vector<Mask> kept;
    for (Mask s : out.pool) {
      bool in = mask_contains(s, agent);
      if (d == Direction::In ? in : !in) kept.push_back(s);
    }
    assert(!kept.empty());
    out.pool.swap(kept);
    out.history[agent] = values_[type_idx];
    out.dom[agent] = {type_idx};
    return out;
  }

  bool done(const State& st) const { return st.pool.size() <= 1; }

  // Commits every remaining active T agent in, sweeping each domain from
  // its top value down. Ends once a single solution survives.
  void sweep_in(State st, int from_agent) {
    if (done(st)) return;
    for (int m = std::max(1, from_agent); m <= k_; ++m) {
      if (st.history.count(m)) continue;
      descend(st, m);
      return;
    }
    assert(false && "sweep ran out of agents with |pool| > 1");
  }

  void descend(const State& st, int agent) {
    const int t = st.dom[agent].back();
    emit(st, agent, Direction::In, t);
    sweep_in(committed(st, agent, Direction::In, t), agent + 1);
    if (st.dom[agent].size() > 1) {
      State no = st;
      remove_type(no, agent, t);
      descend(no, agent);
    }
  }

  // Line 1: return T outright when some member holds the top valuation.
  void phase_top_queries(const State& st, int j) {
    if (done(st)) return;
    if (j > k_) {
      phase_singleton_min(st);
      return;
    }
    emit(st, j, Direction::In, 2);
    sweep_in(committed(st, j, Direction::In, 2), 1);
    State no = st;
    remove_type(no, j, 2);
    phase_top_queries(no, j + 1);
  }

  // Line 2: drop the singleton solution when its agent bids the minimum.
  void phase_singleton_min(const State& st) {
    emit(st, 0, Direction::Out, 0);
    sweep_in(committed(st, 0, Direction::Out, 0), 1);
    State no = st;
    remove_type(no, 0, 0);
    phase_scan(no, 1, 0);
  }

  // Main loop: exclude T members bidding the minimum, stop at k/2 of them.
  void phase_scan(const State& st, int j, int excluded) {
    if (done(st)) return;
    if (j > k_) {
      sweep_in(st, 1);  // |R| < k/2: return the surviving T members
      return;
    }
    emit(st, j, Direction::Out, 0);
    {
      State yes = committed(st, j, Direction::Out, 0);
      if (excluded + 1 == k_ / 2)
        phase_after_break(yes, j);
      else
        phase_scan(yes, j + 1, excluded + 1);
    }
    State no = st;
    remove_type(no, j, 0);
    // The scanned member holds tmed; check the singleton for tmed once.
    if (no.dom[0].size() == 2) {
      emit(no, 0, Direction::Out, 1);
      sweep_in(committed(no, 0, Direction::Out, 1), 1);
      remove_type(no, 0, 1);
    }
    phase_scan(no, j + 1, excluded);
  }

  // Exactly k/2 members excluded; resolve via the singleton's top value.
  void phase_after_break(const State& st, int jstar) {
    if (done(st)) return;
    emit(st, 0, Direction::In, 2);
    {
      State yes = committed(st, 0, Direction::In, 2);
      assert(done(yes));
    }
    if (st.dom[0].size() == 2) {
      assert(jstar == k_ / 2);
      State no = st;
      remove_type(no, 0, 2);
      phase_second_chance(no, k_ / 2 + 1);
    }
  }

  // Singleton holds tmed and the first k/2 members were all minimum: keep T
  // members iff one of the untouched ones holds tmed.
  void phase_second_chance(const State& st, int j) {
    if (done(st)) return;
    if (j > k_) {
      emit(st, 0, Direction::In, 1);
      State yes = committed(st, 0, Direction::In, 1);
      assert(done(yes));
      return;
    }
    emit(st, j, Direction::In, 1);
    sweep_in(committed(st, j, Direction::In, 1), 1);
    State no = st;
    remove_type(no, j, 1);
    phase_second_chance(no, j + 1);
  }

  int k_;
  SetSystemInstance inst_;
  std::vector<Rational> values_;
  PriorityTable table_;
  long long next_rank_;
};

}  // namespace

PriorityTable make_alg4_table(int k) { return Alg4Builder(k).build(); }

PriorityTable make_paper_priority_table(const std::string& id) {
  IdSpec spec = parse_id_spec(id);
  if (spec.name == "thm8-two-way" || spec.name == "thm8")
    return make_thm8_two_way_table();
  if (spec.name == "thm9-ordering" || spec.name == "thm9")
    return make_thm9_ordering_table();
  if (spec.name == "alg4") return make_alg4_table(spec.int_param("k"));
  if (spec.name == "alg5")
    return make_alg5_table(spec.int_param("k"), spec.rat_param("tmin", "0"),
                           spec.rat_param("tmed", "1/2"),
                           spec.rat_param("tmax", "1"));
  throw UnknownId("unknown table id: " + id);
}

}  // namespace osp
