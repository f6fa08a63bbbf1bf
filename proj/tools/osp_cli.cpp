// Command-line front end: run greedy engines, verify OSP via the per-agent
// graphs, synthesize payments, and reproduce the bundled experiments.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "osp/analysis.hpp"
#include "osp/errors.hpp"
#include "osp/greedy.hpp"
#include "osp/io.hpp"
#include "osp/ospgraph.hpp"
#include "osp/tree.hpp"

namespace {

using json = nlohmann::ordered_json;

osp::EngineKind engine_of(const std::string& name) {
  if (name == "forward") return osp::EngineKind::Forward;
  if (name == "reverse") return osp::EngineKind::Reverse;
  if (name == "two-way") return osp::EngineKind::TwoWay;
  throw osp::InvalidParams("unknown engine: " + name);
}

osp::TypeProfile profile_of(const std::string& csv,
                            const osp::SetSystemInstance& inst) {
  osp::TypeProfile p;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) p.push_back(osp::parse_rational(item));
  if (static_cast<int>(p.size()) != inst.n)
    throw osp::InvalidParams("profile needs one value per agent");
  return p;
}

struct Options {
  std::string engine = "two-way";
  std::string instance;
  std::string table;
  std::string tree_path;
  std::string profile;
  std::string out;
  std::string theorem;
  bool explain = false;
  bool payments = false;
  int jobs = 1;
  long long profile_cap = 500'000;
  long long node_cap = 1'000'000;
  std::string epsilon = "1/10";
  unsigned long long seed = 0;
  int k = -1;
  int s = -1;
};

int cmd_run(const Options& opt) {
  osp::SetSystemInstance inst = osp::instance_from_arg(opt.instance);
  osp::PriorityTable table = osp::table_from_arg(opt.table, inst);
  osp::TypeProfile profile = profile_of(opt.profile, inst);
  osp::GreedyTrace trace;
  try {
    trace = osp::run_engine(engine_of(opt.engine), inst, table, profile);
  } catch (const osp::Error& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return 3;
  }
  int step = 0;
  for (const auto& st : trace.steps) {
    std::cout << "step " << ++step << ": agent " << st.agent << " "
              << osp::direction_str(st.dir) << " rank "
              << (st.rank_used ? osp::fraction_str(*st.rank_used) : "floored")
              << (st.action == osp::StepAction::Committed
                      ? " committed"
                      : " marked infeasible-or-in")
              << "\n";
  }
  const osp::Rational value =
      osp::objective_value(inst, profile, trace.final_solution);
  std::cout << "solution " << osp::mask_str(trace.final_solution.selected)
            << " objective " << osp::pretty_str(value) << "\n";
  return 0;
}

int cmd_verify_osp(const Options& opt) {
  osp::SetSystemInstance inst = osp::instance_from_arg(opt.instance);
  osp::ImplementationTree tree;
  if (!opt.tree_path.empty()) {
    tree = osp::load_tree_file(opt.tree_path, inst);
  } else {
    osp::PriorityTable table = osp::table_from_arg(opt.table, inst);
    tree = osp::build_tree_from_table(inst, table, opt.node_cap);
  }

  bool all_ok = true;
  std::vector<std::vector<osp::Rational>> payments;
  for (int agent = 0; agent < inst.n; ++agent) {
    osp::OspGraph graph =
        osp::build_osp_graph(inst, tree, agent, opt.profile_cap);
    auto two = osp::check_2cmon(graph);
    auto full = osp::check_cmon(graph);
    std::cout << "agent " << agent << ": 2CMON "
              << (two.ok ? "pass" : "FAIL") << ", CMON "
              << (full.ok ? "pass" : "FAIL") << "\n";
    if (!full.ok) {
      all_ok = false;
      if (opt.explain && full.witness)
        std::cout << osp::witness_str(inst, *full.witness);
    }
    if (opt.payments && full.ok)
      payments.push_back(osp::compute_payments(graph));
  }
  if (!all_ok) return 1;
  if (opt.payments) {
    auto oracle = osp::brute_force_osp_oracle(inst, tree, payments,
                                              opt.profile_cap);
    std::cout << "payments oracle: " << (oracle.ok ? "pass" : "FAIL");
    if (!oracle.ok) std::cout << " (" << oracle.detail << ")";
    std::cout << "\n";
    const std::string text = osp::payments_to_json(inst, payments);
    if (!opt.out.empty())
      osp::write_file(opt.out, text);
    else
      std::cout << text;
    if (!oracle.ok) return 1;
  }
  std::cout << "OSP: pass\n";
  return 0;
}

int cmd_repro(const Options& opt) {
  std::string id = opt.theorem;
  if (id.find('(') == std::string::npos) {
    std::vector<std::string> params;
    if (opt.k >= 0) params.push_back("k=" + std::to_string(opt.k));
    if (opt.s >= 0) params.push_back("s=" + std::to_string(opt.s));
    if (id == "thm14" && opt.epsilon != "1/10")
      params.push_back("epsilon=" + opt.epsilon);
    if (!params.empty()) {
      id += "(";
      for (size_t i = 0; i < params.size(); ++i)
        id += (i ? "," : "") + params[i];
      id += ")";
    }
  }
  osp::ReproReport rep = osp::repro_theorem(id);
  std::ostringstream machine;
  {
    json header;
    header["type"] = "header";
    header["id"] = rep.id;
    header["seed"] = opt.seed;
    machine << header.dump() << "\n";
  }
  for (const auto& l : rep.lines) {
    std::cout << (l.pass ? "pass" : "FAIL") << "  " << l.label
              << "  [claimed " << l.claimed << ", measured " << l.measured
              << "]\n";
    json rec;
    rec["type"] = "line";
    rec["label"] = l.label;
    rec["claimed"] = l.claimed;
    rec["measured"] = l.measured;
    rec["pass"] = l.pass;
    machine << rec.dump() << "\n";
  }
  for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
  std::cout << (rep.pass ? "REPRO PASS" : "REPRO FAIL") << " " << rep.id
            << "\n";
  if (!opt.out.empty()) osp::write_file(opt.out, machine.str());
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-way greedy mechanisms: engines, OSP verification, "
               "payment synthesis and experiment reproduction"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", opt.jobs, "worker threads for profile scans");
    cmd->add_option("--profile-cap", opt.profile_cap,
                    "maximum profile-space size");
    cmd->add_option("--node-cap", opt.node_cap, "maximum tree nodes");
    cmd->add_option("--seed", opt.seed, "seed echoed into reports");
    cmd->add_option("--out", opt.out, "write the machine-readable report");
  };

  CLI::App* run = app.add_subcommand("run", "run one engine on one profile");
  run->add_option("--engine", opt.engine, "forward|reverse|two-way");
  run->add_option("--instance", opt.instance, "instance id or file")
      ->required();
  run->add_option("--table", opt.table, "priority table id or file")
      ->required();
  run->add_option("--profile", opt.profile, "comma-separated bids")
      ->required();
  add_common(run);

  CLI::App* verify =
      app.add_subcommand("verify-osp", "cycle-monotonicity verification");
  verify->add_option("--instance", opt.instance, "instance id or file")
      ->required();
  verify->add_option("--table", opt.table, "priority table id or file");
  verify->add_option("--tree", opt.tree_path, "implementation tree file");
  verify->add_flag("--explain", opt.explain, "print the witness cycle");
  verify->add_flag("--payments", opt.payments,
                   "synthesize payments and re-check the raw definition");
  add_common(verify);

  CLI::App* repro =
      app.add_subcommand("repro", "reproduce a bundled experiment");
  repro->add_option("id", opt.theorem,
                    "thm8|thm9|thm10|thm11|thm12|thm13|thm14|"
                    "matroid-optimal|ca-sqrt-m (parameters in parentheses "
                    "or via flags)")
      ->required();
  repro->add_option("--k", opt.k, "size parameter");
  repro->add_option("--s", opt.s, "small-side size");
  repro->add_option("--epsilon", opt.epsilon, "slack for thm14");
  add_common(repro);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opt);
    if (verify->parsed()) {
      if (opt.table.empty() && opt.tree_path.empty()) {
        std::cerr << "verify-osp needs --table or --tree\n";
        return 2;
      }
      return cmd_verify_osp(opt);
    }
    if (repro->parsed()) return cmd_repro(opt);
  } catch (const osp::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const osp::UnknownId& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const osp::UnknownTheorem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const osp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
