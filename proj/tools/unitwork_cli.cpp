// unitwork: batch front end for building, querying and exporting models.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unitwork/unitwork.hpp"

namespace {

using namespace unitwork;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::load_failed, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::malformed_record, "'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : split_list(text)) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(Errc::invalid_argument, "pair '" + item + "' is not attribute:object");
    auto a = trim(item.substr(0, colon));
    auto b = trim(item.substr(colon + 1));
    if (a.empty() || b.empty()) throw Error(Errc::empty_label, "pair '" + item + "' has an empty side");
    out.emplace_back(a, b);
  }
  return out;
}

void print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

struct BuildArgs {
  std::string corpus;
  std::string config;
  std::string logic;
  std::string out;
};

int run_build(const BuildArgs& args) {
  BuildConfig config;
  if (!args.config.empty()) config = config_from_json(read_json_file(args.config));
  std::optional<LogicSpec> logic;
  if (!args.logic.empty()) logic = logic_spec_from_json(read_json_file(args.logic));

  std::ifstream in(args.corpus, std::ios::binary);
  if (!in) throw Error(Errc::load_failed, "cannot open corpus '" + args.corpus + "'");
  auto corpus = load_corpus(in);
  auto model = build_model(corpus, config, logic);

  std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::load_failed, "cannot write '" + args.out + "'");
  save_snapshot(model, out);
  if (!out.flush()) throw Error(Errc::load_failed, "write to '" + args.out + "' failed");
  std::cerr << "built " << args.out << ": " << model.units.size() << " units, " << model.net.types().size()
            << " types\n";
  return 0;
}

int run_recall(const std::string& snapshot, const std::string& symbols) {
  auto model = load_snapshot(read_file(snapshot));
  auto trace = recall(model, split_list(symbols));
  print(trace_json(model, trace));
  return 0;
}

int run_bind_check(const std::string& pairs_text, const std::string& query_text, const std::string& snapshot) {
  auto pairs = parse_pairs(pairs_text);
  std::optional<Model> model;
  SymbolTable local;
  if (!snapshot.empty()) model = load_snapshot(read_file(snapshot));
  auto id = [&](const std::string& label) { return model ? model->symbols.at(label) : local.intern(label); };

  std::vector<std::pair<SymbolId, SymbolId>> bound;
  for (const auto& [a, b] : pairs) bound.emplace_back(id(a), id(b));
  auto scene = bind_scene(bound);

  std::vector<std::pair<std::string, std::string>> queries;
  if (!query_text.empty()) {
    queries = parse_pairs(query_text);
  } else {
    // Every attribute x object combination, in first-mention order.
    std::vector<std::string> attributes, objects;
    for (const auto& [a, b] : pairs) {
      if (std::find(attributes.begin(), attributes.end(), a) == attributes.end()) attributes.push_back(a);
      if (std::find(objects.begin(), objects.end(), b) == objects.end()) objects.push_back(b);
    }
    for (const auto& a : attributes) {
      for (const auto& b : objects) queries.emplace_back(a, b);
    }
  }
  json rows = json::array();
  for (const auto& [a, b] : queries) {
    bool known = model ? model->symbols.find(a) && model->symbols.find(b) : local.find(a) && local.find(b);
    bool result = known && is_bound(scene, {id(a), id(b)});
    rows.push_back({{"attribute", a}, {"object", b}, {"bound", result}});
  }
  print({{"pairs", std::move(rows)}});
  return 0;
}

struct LogicArgs {
  std::string net;
  std::string stimulus;
  std::optional<int> max_steps;
  std::string schedule;
};

int run_logic(const LogicArgs& args) {
  auto doc = read_json_file(args.net);
  LogicNet net;
  int max_steps = kDefaultMaxSteps;
  if (doc.is_object() && doc.contains("format_version")) {
    auto model = load_snapshot(doc.dump());
    net = model.logic;
    max_steps = model.config.max_steps;
  } else {
    net = build_logic_net(logic_spec_from_json(doc));
  }
  if (args.max_steps) max_steps = *args.max_steps;

  json result;
  auto state = propagate(net, split_list(args.stimulus), max_steps);
  result["propagation"] = propagation_json(net, state);
  if (!args.schedule.empty()) {
    json spec;
    try {
      spec = trim(args.schedule).starts_with("[") ? json::parse(args.schedule) : read_json_file(args.schedule);
    } catch (const json::parse_error& e) {
      throw Error(Errc::malformed_record, std::string("schedule is not valid JSON: ") + e.what());
    }
    if (!spec.is_array()) throw Error(Errc::malformed_record, "schedule must be a JSON list of group ids");
    Schedule schedule;
    try {
      schedule.groups = spec.get<std::vector<GroupId>>();
    } catch (const json::exception& e) {
      throw Error(Errc::malformed_record, std::string("schedule must list group ids: ") + e.what());
    }
    result["schedule"] = schedule_json(run_schedule(net, schedule, {}, max_steps));
  }
  print(result);
  return 0;
}

int run_export(const std::string& snapshot, const std::string& target_name, const std::string& out_path) {
  auto target = parse_dot_target(target_name);
  auto model = load_snapshot(read_file(snapshot));
  auto text = export_dot(model, target);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw Error(Errc::load_failed, "cannot write '" + out_path + "'");
  }
  return 0;
}

int run_stats(const std::string& snapshot) {
  auto model = load_snapshot(read_file(snapshot));
  print(stats_json(model));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and query self-organising unit / type-set-match models"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* cmd_build = app.add_subcommand("build", "Build a snapshot from a JSON Lines corpus");
  cmd_build->add_option("--corpus", build.corpus, "Corpus file (JSON Lines)")->required();
  cmd_build->add_option("--config", build.config, "BuildConfig JSON document");
  cmd_build->add_option("--logic", build.logic, "Logic net JSON used instead of the scaffold");
  cmd_build->add_option("-o,--out", build.out, "Snapshot output path")->required();

  std::string snapshot, symbols;
  auto* cmd_recall = app.add_subcommand("recall", "Recognise a set of active symbols");
  cmd_recall->add_option("--snapshot", snapshot, "Snapshot file")->required();
  cmd_recall->add_option("--symbols", symbols, "Comma-separated active symbols")->expected(0, 1);

  std::string pairs, queries;
  auto* cmd_bind = app.add_subcommand("bind-check", "Bind attribute:object pairs and test combinations");
  cmd_bind->add_option("--pairs", pairs, "Comma-separated attribute:object pairs")->required();
  cmd_bind->add_option("--query", queries, "Pairs to test (default: every attribute x object)");
  cmd_bind->add_option("--snapshot", snapshot, "Resolve concepts against this snapshot");

  LogicArgs logic;
  auto* cmd_logic = app.add_subcommand("logic-run", "Propagate a stimulus through a logic net");
  cmd_logic->add_option("--net", logic.net, "Snapshot or logic net JSON")->required();
  cmd_logic->add_option("--stimulus", logic.stimulus, "Comma-separated concepts");
  cmd_logic->add_option("--max-steps", logic.max_steps, "Step limit")->check(CLI::PositiveNumber);
  cmd_logic->add_option("--schedule", logic.schedule, "JSON list of group ids, inline or a file path");

  std::string target, out_path;
  auto* cmd_export = app.add_subcommand("export-dot", "Export trees, net or logic as Graphviz DOT");
  cmd_export->add_option("--snapshot", snapshot, "Snapshot file")->required();
  cmd_export->add_option("--target", target, "trees | net | logic")->required();
  cmd_export->add_option("-o,--out", out_path, "Output path (default stdout)");

  auto* cmd_stats = app.add_subcommand("stats", "Print unit tables and regularity reports");
  cmd_stats->add_option("--snapshot", snapshot, "Snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_build) return run_build(build);
    if (*cmd_recall) return run_recall(snapshot, symbols);
    if (*cmd_bind) return run_bind_check(pairs, queries, snapshot);
    if (*cmd_logic) return run_logic(logic);
    if (*cmd_export) return run_export(snapshot, target, out_path);
    if (*cmd_stats) return run_stats(snapshot);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::invalid_argument && *cmd_export ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
