#include "osp/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "osp/errors.hpp"

#include <json.hpp>

namespace osp {

using json = nlohmann::ordered_json;

namespace {

Rational rational_field(const json& j, const char* what) {
  if (!j.is_string())
    throw ParseError(std::string(what) + " must be a decimal string");
  return parse_rational(j.get<std::string>());
}

Mask mask_from(const json& arr) {
  if (!arr.is_array()) throw ParseError("agent set must be an array");
  Mask m = 0;
  for (const auto& v : arr) {
    int i = v.get<int>();
    if (i < 0 || i >= 30) throw ParseError("agent index out of range");
    m |= 1u << i;
  }
  return m;
}

json mask_to(Mask m) {
  json arr = json::array();
  for (int i = 0; i < 30; ++i)
    if (mask_contains(m, i)) arr.push_back(i);
  return arr;
}

}  // namespace

SetSystemInstance parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad instance file: ") + e.what());
  }
  SetSystemInstance inst;
  inst.n = j.at("n").get<int>();
  const std::string orient = j.at("orientation").get<std::string>();
  if (orient == "cost")
    inst.orientation = Orientation::Cost;
  else if (orient == "valuation")
    inst.orientation = Orientation::Valuation;
  else
    throw ParseError("orientation must be cost or valuation");
  for (const auto& dom : j.at("domains")) {
    AgentDomain d;
    for (const auto& v : dom) d.values.push_back(rational_field(v, "domain value"));
    inst.domains.push_back(std::move(d));
  }
  const auto& fam = j.at("family");
  const std::string kind = fam.at("kind").get<std::string>();
  if (kind == "explicit") {
    std::vector<Mask> sets;
    for (const auto& s : fam.at("sets")) sets.push_back(mask_from(s));
    inst.family = FeasibleFamily::make_explicit(std::move(sets));
  } else if (kind == "knapsack") {
    std::vector<long long> sizes;
    for (const auto& s : fam.at("sizes")) sizes.push_back(s.get<long long>());
    inst.family = FeasibleFamily::make_knapsack(std::move(sizes),
                                                fam.at("capacity").get<long long>());
  } else if (kind == "graphic-matroid") {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : fam.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    inst.family = FeasibleFamily::make_graphic_matroid(std::move(edges));
  } else if (kind == "parallel-solutions") {
    std::vector<Mask> sets;
    for (const auto& s : fam.at("sets")) sets.push_back(mask_from(s));
    inst.family = FeasibleFamily::make_parallel(std::move(sets));
  } else if (kind == "downward-closure") {
    std::vector<Mask> bases;
    for (const auto& s : fam.at("bases")) bases.push_back(mask_from(s));
    inst.family = FeasibleFamily::make_downward_closure(std::move(bases));
  } else {
    throw ParseError("unknown family kind: " + kind);
  }
  inst.validate();
  return inst;
}

std::string instance_to_json(const SetSystemInstance& inst) {
  json j;
  j["n"] = inst.n;
  j["orientation"] =
      inst.orientation == Orientation::Cost ? "cost" : "valuation";
  json domains = json::array();
  for (const auto& d : inst.domains) {
    json dom = json::array();
    for (const auto& v : d.values) dom.push_back(fraction_str(v));
    domains.push_back(std::move(dom));
  }
  j["domains"] = std::move(domains);
  json fam;
  switch (inst.family.kind) {
    case FeasibleFamily::Kind::Explicit: {
      fam["kind"] = "explicit";
      json sets = json::array();
      for (Mask s : inst.family.sets) sets.push_back(mask_to(s));
      fam["sets"] = std::move(sets);
      break;
    }
    case FeasibleFamily::Kind::Knapsack:
      fam["kind"] = "knapsack";
      fam["sizes"] = inst.family.sizes;
      fam["capacity"] = inst.family.capacity;
      break;
    case FeasibleFamily::Kind::GraphicMatroid: {
      fam["kind"] = "graphic-matroid";
      json edges = json::array();
      for (auto& [u, v] : inst.family.edges) edges.push_back({u, v});
      fam["edges"] = std::move(edges);
      break;
    }
    case FeasibleFamily::Kind::ParallelSolutions: {
      fam["kind"] = "parallel-solutions";
      json sets = json::array();
      for (Mask s : inst.family.sets) sets.push_back(mask_to(s));
      fam["sets"] = std::move(sets);
      break;
    }
    case FeasibleFamily::Kind::DownwardClosure: {
      fam["kind"] = "downward-closure";
      json bases = json::array();
      for (Mask s : inst.family.sets) bases.push_back(mask_to(s));
      fam["bases"] = std::move(bases);
      break;
    }
  }
  j["family"] = std::move(fam);
  return j.dump(2) + "\n";
}

PriorityTable parse_table_json(const std::string& text,
                               const SetSystemInstance& inst) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad table file: ") + e.what());
  }
  PriorityTable t;
  if (j.is_object() && j.contains("policy")) {
    const std::string p = j.at("policy").get<std::string>();
    if (p == "fail-on-missing")
      t.policy = MissingPolicy::FailOnMissing;
    else if (p == "floor-missing")
      t.policy = MissingPolicy::FloorMissing;
    else
      throw ParseError("unknown missing policy: " + p);
  }
  const json& entries = j.is_array() ? j : j.at("entries");
  for (const auto& rec : entries) {
    PriorityEntry e;
    e.agent = rec.at("agent").get<int>();
    if (e.agent < 0 || e.agent >= inst.n)
      throw ParseError("table entry agent out of range");
    const std::string dir = rec.at("direction").get<std::string>();
    if (dir == "in")
      e.dir = Direction::In;
    else if (dir == "out")
      e.dir = Direction::Out;
    else
      throw ParseError("direction must be in or out");
    e.type = rational_field(rec.at("type"), "type");
    if (inst.domains[e.agent].index_of(e.type) < 0)
      throw ParseError("table entry type not in the agent's domain: " +
                       fraction_str(e.type));
    const auto& hist = rec.at("history");
    if (hist.is_string() && hist.get<std::string>() == "*") {
      e.any_history = true;
    } else if (hist.is_object()) {
      for (auto it = hist.begin(); it != hist.end(); ++it) {
        int agent = std::stoi(it.key());
        if (agent < 0 || agent >= inst.n)
          throw ParseError("history agent out of range");
        Rational v = rational_field(it.value(), "history value");
        if (inst.domains[agent].index_of(v) < 0)
          throw ParseError("history value not in the agent's domain");
        e.history[agent] = std::move(v);
      }
    } else {
      throw ParseError("history must be \"*\" or a map");
    }
    e.rank = rational_field(rec.at("rank"), "rank");
    t.add(std::move(e));  // enforces the strict total rank order
  }
  return t;
}

std::string table_to_json(const PriorityTable& table) {
  json j;
  j["policy"] = table.policy == MissingPolicy::FailOnMissing
                    ? "fail-on-missing"
                    : "floor-missing";
  json entries = json::array();
  for (const auto& e : table.entries()) {
    json rec;
    rec["agent"] = e.agent;
    rec["direction"] = e.dir == Direction::In ? "in" : "out";
    rec["type"] = fraction_str(e.type);
    if (e.any_history) {
      rec["history"] = "*";
    } else {
      json h = json::object();
      for (const auto& [agent, v] : e.history)
        h[std::to_string(agent)] = fraction_str(v);
      rec["history"] = std::move(h);
    }
    rec["rank"] = fraction_str(e.rank);
    entries.push_back(std::move(rec));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

namespace {

void dump_preorder(const SetSystemInstance& inst,
                   const ImplementationTree& tree, int id,
                   std::vector<int>& order, std::vector<int>& renumber) {
  renumber[id] = static_cast<int>(order.size());
  order.push_back(id);
  const auto& nd = tree.node(id);
  for (int c : nd.children) dump_preorder(inst, tree, c, order, renumber);
}

}  // namespace

std::string dump_tree(const SetSystemInstance& inst,
                      const ImplementationTree& tree) {
  std::vector<int> order;
  std::vector<int> renumber(tree.size(), -1);
  dump_preorder(inst, tree, tree.root, order, renumber);
  json nodes = json::array();
  for (int id : order) {
    const auto& nd = tree.node(id);
    json rec;
    rec["id"] = renumber[id];
    if (nd.is_leaf()) {
      rec["leaf"] = true;
      rec["solution"] = mask_to(nd.outcome->selected);
      if (nd.payments) {
        json pay = json::array();
        for (const auto& p : *nd.payments) pay.push_back(fraction_str(p));
        rec["payments"] = std::move(pay);
      }
    } else {
      rec["agent"] = nd.agent;
      json parts = json::array();
      for (const auto& part : nd.parts) {
        json p = json::array();
        std::vector<int> sorted = part;
        std::sort(sorted.begin(), sorted.end());
        for (int t : sorted)
          p.push_back(fraction_str(inst.domains[nd.agent].values[t]));
        parts.push_back(std::move(p));
      }
      rec["parts"] = std::move(parts);
      json children = json::array();
      for (int c : nd.children) children.push_back(renumber[c]);
      rec["children"] = std::move(children);
    }
    nodes.push_back(std::move(rec));
  }
  json j;
  j["root"] = 0;
  j["nodes"] = std::move(nodes);
  return j.dump(2) + "\n";
}

ImplementationTree parse_tree_json(const std::string& text,
                                   const SetSystemInstance& inst) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad tree file: ") + e.what());
  }
  const auto& nodes = j.at("nodes");
  ImplementationTree tree;
  tree.root = j.at("root").get<int>();
  tree.nodes.resize(nodes.size());
  for (const auto& rec : nodes) {
    const int id = rec.at("id").get<int>();
    if (id < 0 || id >= static_cast<int>(tree.nodes.size()))
      throw ParseError("tree node id out of range");
    TreeNode& nd = tree.nodes[id];
    if (rec.contains("leaf") && rec.at("leaf").get<bool>()) {
      nd.agent = -1;
      nd.outcome = Solution{mask_from(rec.at("solution"))};
      if (rec.contains("payments")) {
        std::vector<Rational> pay;
        for (const auto& p : rec.at("payments"))
          pay.push_back(rational_field(p, "payment"));
        nd.payments = std::move(pay);
      }
    } else {
      nd.agent = rec.at("agent").get<int>();
      if (nd.agent < 0 || nd.agent >= inst.n)
        throw ParseError("queried agent out of range");
      for (const auto& part : rec.at("parts")) {
        std::vector<int> p;
        for (const auto& v : part) {
          int t = inst.domains[nd.agent].index_of(rational_field(v, "part"));
          if (t < 0) throw ParseError("part value not in the agent's domain");
          p.push_back(t);
        }
        nd.parts.push_back(std::move(p));
      }
      for (const auto& c : rec.at("children"))
        nd.children.push_back(c.get<int>());
      if (nd.parts.size() != nd.children.size())
        throw ParseError("parts/children arity mismatch");
    }
  }
  // Reconstruct subdomains root-down.
  std::vector<std::vector<int>> full(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    full[i].resize(inst.domains[i].size());
    for (size_t t = 0; t < full[i].size(); ++t) full[i][t] = static_cast<int>(t);
  }
  std::vector<char> seen(tree.nodes.size(), 0);
  std::function<void(int, std::vector<std::vector<int>>)> assign =
      [&](int id, std::vector<std::vector<int>> sub) {
        if (seen[id]) throw ParseError("tree node reached twice");
        seen[id] = 1;
        TreeNode& nd = tree.nodes[id];
        nd.sub = std::move(sub);
        if (nd.is_leaf()) return;
        for (size_t c = 0; c < nd.children.size(); ++c) {
          auto child_sub = nd.sub;
          auto part = nd.parts[c];
          std::sort(part.begin(), part.end());
          child_sub[nd.agent] = std::move(part);
          assign(nd.children[c], std::move(child_sub));
        }
      };
  assign(tree.root, std::move(full));
  for (char s : seen)
    if (!s) throw ParseError("tree has unreachable nodes");
  tree.validate(inst);
  return tree;
}

std::string payments_to_json(const SetSystemInstance& inst,
                             const std::vector<std::vector<Rational>>& pay) {
  ProfileSpace space(inst);
  json j;
  j["profile_count"] = space.total;
  json agents = json::array();
  for (int i = 0; i < inst.n; ++i) {
    json arr = json::array();
    for (const auto& p : pay[i]) arr.push_back(fraction_str(p));
    agents.push_back(std::move(arr));
  }
  j["payments"] = std::move(agents);
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text;
}

SetSystemInstance load_instance_file(const std::string& path) {
  return parse_instance_json(read_file(path));
}

PriorityTable load_table_file(const std::string& path,
                              const SetSystemInstance& inst) {
  return parse_table_json(read_file(path), inst);
}

ImplementationTree load_tree_file(const std::string& path,
                                  const SetSystemInstance& inst) {
  return parse_tree_json(read_file(path), inst);
}

SetSystemInstance instance_from_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_instance_file(arg);
  return make_paper_instance(arg);
}

PriorityTable table_from_arg(const std::string& arg,
                             const SetSystemInstance& inst) {
  if (std::filesystem::exists(arg)) return load_table_file(arg, inst);
  return make_paper_priority_table(arg);
}

}  // namespace osp
