#pragma once
// JSON renderings used by the CLI query commands. Keys are sorted and
// arrays follow model order, so output is stable across runs.

#include <string>
#include <vector>

#include <json.hpp>

#include "unitwork/model.hpp"

namespace unitwork {

inline nlohmann::json labels_of(const SymbolTable& symbols, const SymbolSet& set) {
  auto out = nlohmann::json::array();
  for (auto s : set) out.push_back(symbols.label(s));
  return out;
}

inline nlohmann::json trace_json(const Model& m, const RecognitionTrace& trace) {
  using nlohmann::json;
  const auto& sym = m.symbols;
  json rounds = json::array();
  for (const auto& r : trace.rounds) {
    json types = json::object();
    for (const auto& [t, s] : r.type_scores) types[sym.label(t)] = s;
    json features = json::array();
    for (const auto& [f, a] : r.feature_activation) {
      features.push_back({{"feature", f}, {"members", labels_of(sym, m.net.features()[f].members)}, {"activation", a}});
    }
    json ensembles = json::array();
    for (const auto& [ref, a] : r.ensemble_activation) {
      const auto& p = m.net.regions()[ref.region].ensembles[ref.index];
      ensembles.push_back({{"region", ref.region},
                           {"index", ref.index},
                           {"label", p.label ? json(sym.label(*p.label)) : json(nullptr)},
                           {"activation", a}});
    }
    rounds.push_back({{"round", r.round},
                      {"leader", r.leader ? json(sym.label(*r.leader)) : json(nullptr)},
                      {"distinctness", r.distinctness},
                      {"types", std::move(types)},
                      {"features", std::move(features)},
                      {"ensembles", std::move(ensembles)}});
  }
  json ranking = json::array();
  for (const auto& r : trace.ranking) ranking.push_back({{"type", sym.label(r.type)}, {"score", r.score}});
  json fired = json::array();
  for (const auto& f : trace.fired_features) {
    json types = json::array();
    for (auto t : f.types) types.push_back(sym.label(t));
    fired.push_back({{"members", labels_of(sym, f.members)}, {"types", std::move(types)}});
  }
  return {{"rounds", std::move(rounds)},
          {"ranking", std::move(ranking)},
          {"fired_features", std::move(fired)},
          {"leader_changes", trace.leader_changes}};
}

inline nlohmann::json stats_json(const Model& m) {
  using nlohmann::json;
  const auto& sym = m.symbols;
  auto unit_rows = [&](const std::vector<Unit>& units, bool symbols) {
    json rows = json::array();
    for (const auto& u : units) {
      json members = json::array();
      for (auto id : u.members) {
        if (symbols) {
          members.push_back(sym.label(SymbolId{id}));
        } else {
          members.push_back(id);
        }
      }
      rows.push_back({{"unit", u.unit_id}, {"level", u.level}, {"members", std::move(members)}});
    }
    return rows;
  };
  auto report_rows = [](const std::vector<RegularityReport>& reports) {
    json rows = json::array();
    for (const auto& r : reports) {
      rows.push_back({{"unit", r.unit_id}, {"mean", r.mean}, {"cv", r.coefficient_of_variation}, {"pairs", r.pair_count}});
    }
    return rows;
  };
  json trees = json::array();
  for (const auto& t : m.trees) {
    trees.push_back({{"label", t.label ? json(sym.label(*t.label)) : json(nullptr)},
                     {"nodes", t.nodes.size()},
                     {"root_support", t.root().support},
                     {"ensemble", labels_of(sym, t.ensemble())}});
  }
  json induction = json::array();
  for (const auto& p : m.analysis.induction) {
    induction.push_back({{"types", {sym.label(p.first), sym.label(p.second)}}, {"shared_features", p.shared_features}});
  }
  json merges = json::array();
  for (const auto& p : m.analysis.merges) {
    merges.push_back({{"regions", {p.first, p.second}},
                      {"co_fired", p.co_fired},
                      {"ensemble", labels_of(sym, p.merged_ensemble)}});
  }
  return {
      {"events", m.event_count},
      {"symbols", sym.size()},
      {"link_pairs", m.links.size()},
      {"link_mass", m.links.total_mass()},
      {"levels",
       {{"level1", {{"units", unit_rows(m.units, true)}, {"regularity", report_rows(m.regularity_level1)}}},
        {"level2", {{"units", unit_rows(m.units, true)}, {"regularity", report_rows(m.regularity_level2)}}},
        {"level3", {{"units", unit_rows(m.super_units, false)}}}}},
      {"trees", std::move(trees)},
      {"types", m.net.types().size()},
      {"feature_sets", m.net.features().size()},
      {"regions", m.net.regions().size()},
      {"lateral_links", m.analysis.lateral_links.size()},
      {"induction", std::move(induction)},
      {"merges", std::move(merges)},
  };
}

inline nlohmann::json propagation_json(const LogicNet& net, const PropagationState& state) {
  using nlohmann::json;
  auto names = [&](const std::vector<bool>& flags) {
    json out = json::array();
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) out.push_back(net.concepts[i]);
    }
    return out;
  };
  json steps = json::array();
  for (const auto& f : state.history) {
    json groups = json::array();
    for (std::size_t g = 0; g < f.group_active.size(); ++g) {
      if (f.group_active[g]) groups.push_back(net.groups[g].group_id);
    }
    steps.push_back({{"step", f.step},
                     {"layer_a", names(f.active_a)},
                     {"layer_b", names(f.active_b)},
                     {"groups", std::move(groups)},
                     {"suppressed", f.suppressed}});
  }
  return {{"steps", std::move(steps)},
          {"outcome", to_string(state.outcome)},
          {"final_step", state.step},
          {"winners", state.active_groups(net)}};
}

inline nlohmann::json schedule_json(const std::vector<ScheduleStep>& trace) {
  auto out = nlohmann::json::array();
  for (const auto& s : trace) {
    out.push_back({{"group", s.group},
                   {"won", s.won},
                   {"winners", s.winners},
                   {"outcome", to_string(s.outcome)},
                   {"steps", s.steps}});
  }
  return out;
}

}  // namespace unitwork
