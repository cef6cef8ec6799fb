#pragma once
// Versioned canonical JSON snapshots.
//
// Only primary state is written. Everything derivable (tree distances and
// children, neighbor orders, path signatures, symbol index) is rebuilt on
// load, so two equal models always serialise to the same bytes.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "unitwork/model.hpp"

namespace unitwork {

inline constexpr int kSnapshotVersion = 1;

namespace detail {

using nlohmann::json;

inline json ids(const SymbolSet& s) {
  json out = json::array();
  for (auto id : s) out.push_back(id.value);
  return out;
}

inline SymbolSet ids_from(const json& j, std::size_t symbol_count) {
  std::vector<SymbolId> out;
  for (const auto& v : j) {
    auto id = v.get<std::uint32_t>();
    if (id >= symbol_count) throw Error(Errc::load_failed, "symbol id out of range");
    out.push_back(SymbolId{id});
  }
  auto set = make_set(out);
  if (set.size() != out.size() || set != out) throw Error(Errc::load_failed, "symbol set not canonical");
  return set;
}

inline json grid_json(const PairCountGrid& g) {
  json pairs = json::array();
  g.for_each_pair([&](NodeId a, NodeId b, Count c) { pairs.push_back({a, b, c}); });
  return {{"level", g.level()}, {"nodes", g.node_count()}, {"pairs", std::move(pairs)}};
}

inline PairCountGrid grid_from(const json& j) {
  PairCountGrid g(j.at("level").get<int>(), j.at("nodes").get<std::size_t>());
  for (const auto& p : j.at("pairs")) {
    auto a = p.at(0).get<NodeId>();
    auto b = p.at(1).get<NodeId>();
    auto c = p.at(2).get<Count>();
    if (a >= b || c == 0) throw Error(Errc::load_failed, "grid pair not canonical");
    g.add(a, b, c);
  }
  return g;
}

inline json units_json(const std::vector<Unit>& units) {
  json out = json::array();
  for (const auto& u : units) out.push_back(u.members);
  return out;
}

inline std::vector<Unit> units_from(const json& j, int level) {
  std::vector<Unit> out;
  for (const auto& members : j) {
    out.push_back(Unit{static_cast<std::uint32_t>(out.size()), members.get<std::vector<NodeId>>(), level});
  }
  return out;
}

inline json reports_json(const std::vector<RegularityReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    out.push_back({{"unit", r.unit_id}, {"mean", r.mean}, {"cv", r.coefficient_of_variation}, {"pairs", r.pair_count}});
  }
  return out;
}

inline std::vector<RegularityReport> reports_from(const json& j) {
  std::vector<RegularityReport> out;
  for (const auto& r : j) {
    out.push_back(RegularityReport{r.at("unit").get<std::uint32_t>(), r.at("mean").get<double>(),
                                   r.at("cv").get<double>(), r.at("pairs").get<std::size_t>()});
  }
  return out;
}

inline json optional_symbol(const std::optional<SymbolId>& s) {
  return s ? json(s->value) : json(nullptr);
}

inline std::optional<SymbolId> optional_symbol_from(const json& j, std::size_t symbol_count) {
  if (j.is_null()) return std::nullopt;
  auto id = j.get<std::uint32_t>();
  if (id >= symbol_count) throw Error(Errc::load_failed, "symbol id out of range");
  return SymbolId{id};
}

inline json tree_json(const ConceptTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    json secondary = json::array();
    for (const auto& [s, w] : n.secondary) secondary.push_back({s.value, w});
    nodes.push_back({{"members", ids(n.members)},
                     {"support", n.support},
                     {"parent", n.parent ? json(*n.parent) : json(nullptr)},
                     {"secondary", std::move(secondary)}});
  }
  return {{"unit", t.unit_id}, {"label", optional_symbol(t.label)}, {"nodes", std::move(nodes)}};
}

inline ConceptTree tree_from(const json& j, std::size_t symbol_count) {
  ConceptTree t;
  t.unit_id = j.at("unit").get<std::uint32_t>();
  t.label = optional_symbol_from(j.at("label"), symbol_count);
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.members = ids_from(n.at("members"), symbol_count);
    node.support = n.at("support").get<Count>();
    if (node.support == 0 || node.members.empty()) throw Error(Errc::load_failed, "invalid tree node");
    node.distance = distance_for(node.support);
    if (!n.at("parent").is_null()) node.parent = n.at("parent").get<std::size_t>();
    for (const auto& s : n.at("secondary")) {
      node.secondary[SymbolId{s.at(0).get<std::uint32_t>()}] = s.at(1).get<Count>();
    }
    t.nodes.push_back(std::move(node));
  }
  if (t.nodes.empty() || t.nodes[0].parent) throw Error(Errc::load_failed, "tree without root");
  for (std::size_t i = 1; i < t.nodes.size(); ++i) {
    auto p = t.nodes[i].parent;
    if (!p || *p >= t.nodes.size() || *p == i) throw Error(Errc::load_failed, "invalid tree parent");
    t.nodes[*p].children.push_back(i);
  }
  return t;
}

inline json net_json(const TypeSetMatchNet& net) {
  json features = json::array();
  for (const auto& f : net.features()) {
    json types = json::array();
    for (auto t : f.type_links) types.push_back(t.value);
    features.push_back({{"members", ids(f.members)}, {"regions", f.owning_regions}, {"types", std::move(types)}});
  }
  json types = json::array();
  for (const auto& [id, t] : net.types()) {
    json links = json::array();
    for (const auto& [fid, w] : t.feature_links) links.push_back({fid, w});
    types.push_back({{"type", id.value}, {"region", t.region}, {"links", std::move(links)}});
  }
  json regions = json::array();
  for (const auto& r : net.regions()) {
    json ensembles = json::array();
    for (const auto& p : r.ensembles) {
      ensembles.push_back({{"label", optional_symbol(p.label)}, {"members", ids(p.members)}});
    }
    regions.push_back({{"id", r.region_id}, {"ensembles", std::move(ensembles)}});
  }
  json type_links = json::array();
  for (const auto& [a, b] : net.type_links()) type_links.push_back({a.value, b.value});
  return {{"features", std::move(features)},
          {"types", std::move(types)},
          {"regions", std::move(regions)},
          {"type_links", std::move(type_links)}};
}

inline TypeSetMatchNet net_from(const json& j, std::size_t symbol_count) {
  std::vector<FeatureSetNode> features;
  for (const auto& f : j.at("features")) {
    FeatureSetNode node;
    node.members = ids_from(f.at("members"), symbol_count);
    node.owning_regions = f.at("regions").get<std::set<RegionId>>();
    for (const auto& t : f.at("types")) node.type_links.insert(SymbolId{t.get<std::uint32_t>()});
    features.push_back(std::move(node));
  }
  std::map<SymbolId, TypeNode> types;
  for (const auto& t : j.at("types")) {
    TypeNode node;
    node.type_id = SymbolId{t.at("type").get<std::uint32_t>()};
    node.region = t.at("region").get<RegionId>();
    for (const auto& l : t.at("links")) node.feature_links[l.at(0).get<FeatureId>()] = l.at(1).get<double>();
    types[node.type_id] = std::move(node);
  }
  std::vector<Region> regions;
  for (const auto& r : j.at("regions")) {
    Region region;
    region.region_id = r.at("id").get<RegionId>();
    if (region.region_id != regions.size()) throw Error(Errc::load_failed, "regions out of order");
    for (const auto& p : r.at("ensembles")) {
      region.ensembles.push_back(
          StoredPattern{optional_symbol_from(p.at("label"), symbol_count), ids_from(p.at("members"), symbol_count)});
    }
    regions.push_back(std::move(region));
  }
  std::set<SymbolPair> type_links;
  for (const auto& l : j.at("type_links")) {
    type_links.insert(ordered_pair(SymbolId{l.at(0).get<std::uint32_t>()}, SymbolId{l.at(1).get<std::uint32_t>()}));
  }
  return TypeSetMatchNet::assemble(std::move(features), std::move(types), std::move(regions), std::move(type_links));
}

inline json logic_json(const LogicNet& net) {
  json relations = json::array();
  for (const auto& [link, w] : net.relation_links) relations.push_back({link.first, link.second, w});
  json groups = json::array();
  for (const auto& g : net.groups) groups.push_back({{"id", g.group_id}, {"members", g.members}});
  json inhibitors = json::array();
  for (const auto& [a, b] : net.inhibitors) inhibitors.push_back({a, b});
  return {{"concepts", net.concepts},
          {"relations", std::move(relations)},
          {"groups", std::move(groups)},
          {"inhibitors", std::move(inhibitors)}};
}

// Rebuilds through build_logic_net so every load re-checks the invariants.
inline LogicNet logic_from(const json& j) {
  LogicSpec spec;
  spec.concepts = j.at("concepts").get<std::vector<std::string>>();
  auto name = [&](std::size_t i) -> const std::string& {
    if (i >= spec.concepts.size()) throw Error(Errc::load_failed, "logic concept index out of range");
    return spec.concepts[i];
  };
  for (const auto& r : j.at("relations")) {
    spec.relations.push_back(
        RelationSpec{name(r.at(0).get<std::size_t>()), name(r.at(1).get<std::size_t>()), r.at(2).get<double>()});
  }
  for (const auto& g : j.at("groups")) {
    GroupSpec gs;
    gs.id = g.at("id").get<GroupId>();
    for (const auto& m : g.at("members")) gs.members.push_back(name(m.get<std::size_t>()));
    spec.groups.push_back(std::move(gs));
  }
  for (const auto& i : j.at("inhibitors")) spec.inhibitors.emplace_back(i.at(0).get<GroupId>(), i.at(1).get<GroupId>());
  return build_logic_net(spec);
}

}  // namespace detail

// Standalone logic net description, as accepted by `build --logic` and
// `logic-run --net`:
// {"concepts": [...], "relations": [["a","b"] or ["a","b",w]],
//  "groups": [{"id": 1, "members": [...]}], "inhibitors": [[1, 2]]}
inline LogicSpec logic_spec_from_json(const nlohmann::json& j) {
  try {
    LogicSpec spec;
    spec.concepts = j.at("concepts").get<std::vector<std::string>>();
    if (j.contains("relations")) {
      for (const auto& r : j.at("relations")) {
        RelationSpec rs{r.at(0).get<std::string>(), r.at(1).get<std::string>(), 1.0};
        if (r.size() > 2) rs.weight = r.at(2).get<double>();
        spec.relations.push_back(std::move(rs));
      }
    }
    if (j.contains("groups")) {
      for (const auto& g : j.at("groups")) {
        spec.groups.push_back(GroupSpec{g.at("id").get<GroupId>(), g.at("members").get<std::vector<std::string>>()});
      }
    }
    if (j.contains("inhibitors")) {
      for (const auto& i : j.at("inhibitors")) {
        spec.inhibitors.emplace_back(i.at(0).get<GroupId>(), i.at(1).get<GroupId>());
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_record, std::string("logic net: ") + e.what());
  }
}

inline nlohmann::json snapshot_json(const Model& m) {
  using nlohmann::json;
  json links = json::array();
  for (const auto& [pair, w] : m.links.weights()) links.push_back({pair.first.value, pair.second.value, w});

  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(detail::tree_json(t));

  json lateral = json::array();
  for (const auto& l : m.analysis.lateral_links) lateral.push_back({l.from_tree, l.from_node, l.to_tree, l.to_node});
  json induction = json::array();
  for (const auto& p : m.analysis.induction) induction.push_back({p.first.value, p.second.value, p.shared_features});
  json merges = json::array();
  for (const auto& p : m.analysis.merges) {
    json retained = json::array();
    for (const auto& r : p.retained) {
      retained.push_back({{"label", detail::optional_symbol(r.label)}, {"members", detail::ids(r.members)}});
    }
    merges.push_back({{"regions", {p.first, p.second}},
                      {"co_fired", p.co_fired},
                      {"ensemble", detail::ids(p.merged_ensemble)},
                      {"retained", std::move(retained)}});
  }

  return {
      {"format_version", kSnapshotVersion},
      {"config", to_json(m.config)},
      {"symbols", m.symbols.labels()},
      {"event_count", m.event_count},
      {"links", std::move(links)},
      {"grids", {{"level1", detail::grid_json(m.level1)},
                 {"level2", detail::grid_json(m.level2)},
                 {"level3", detail::grid_json(m.level3)}}},
      {"units", {{"level1", detail::units_json(m.units)}, {"level3", detail::units_json(m.super_units)}}},
      {"regularity", {{"level1", detail::reports_json(m.regularity_level1)},
                      {"level2", detail::reports_json(m.regularity_level2)}}},
      {"unit_activity", m.unit_activity},
      {"trees", std::move(trees)},
      {"net", detail::net_json(m.net)},
      {"logic", detail::logic_json(m.logic)},
      {"analysis", {{"lateral_links", std::move(lateral)},
                    {"induction", std::move(induction)},
                    {"region_activity", m.analysis.region_activity},
                    {"merges", std::move(merges)}}},
  };
}

inline std::string save_snapshot(const Model& m) { return snapshot_json(m).dump(1) + "\n"; }

inline void save_snapshot(const Model& m, std::ostream& out) { out << save_snapshot(m); }

inline Model load_snapshot(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::load_failed, std::string("snapshot is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) {
      throw Error(Errc::load_failed, "snapshot has no format_version");
    }
    auto version = doc.at("format_version").get<int>();
    if (version != kSnapshotVersion) {
      throw Error(Errc::unsupported_version, "unsupported version " + std::to_string(version));
    }
    Model m;
    m.config = config_from_json(doc.at("config"));
    for (const auto& label : doc.at("symbols")) {
      auto before = m.symbols.size();
      m.symbols.intern(label.get<std::string>());
      if (m.symbols.size() == before) throw Error(Errc::load_failed, "duplicate symbol in table");
    }
    const auto n = m.symbols.size();
    m.event_count = doc.at("event_count").get<std::size_t>();
    for (const auto& l : doc.at("links")) {
      auto a = l.at(0).get<std::uint32_t>();
      auto b = l.at(1).get<std::uint32_t>();
      if (a >= b || b >= n) throw Error(Errc::load_failed, "link pair not canonical");
      m.links.add(SymbolId{a}, SymbolId{b}, l.at(2).get<std::uint64_t>());
    }
    const auto& grids = doc.at("grids");
    m.level1 = detail::grid_from(grids.at("level1"));
    m.level2 = detail::grid_from(grids.at("level2"));
    m.level3 = detail::grid_from(grids.at("level3"));
    m.units = detail::units_from(doc.at("units").at("level1"), m.level1.level());
    m.super_units = detail::units_from(doc.at("units").at("level3"), kAggregateLevel);
    m.regularity_level1 = detail::reports_from(doc.at("regularity").at("level1"));
    m.regularity_level2 = detail::reports_from(doc.at("regularity").at("level2"));
    m.unit_activity = doc.at("unit_activity").get<std::vector<std::vector<NodeId>>>();
    for (const auto& t : doc.at("trees")) m.trees.push_back(detail::tree_from(t, n));
    m.net = detail::net_from(doc.at("net"), n);
    m.logic = detail::logic_from(doc.at("logic"));

    const auto& a = doc.at("analysis");
    for (const auto& l : a.at("lateral_links")) {
      m.analysis.lateral_links.push_back(LateralLink{l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>(),
                                                     l.at(2).get<std::size_t>(), l.at(3).get<std::size_t>()});
    }
    for (const auto& p : a.at("induction")) {
      m.analysis.induction.push_back(InductionProposal{SymbolId{p.at(0).get<std::uint32_t>()},
                                                       SymbolId{p.at(1).get<std::uint32_t>()},
                                                       p.at(2).get<std::size_t>()});
    }
    m.analysis.region_activity = a.at("region_activity").get<std::vector<std::vector<RegionId>>>();
    for (const auto& p : a.at("merges")) {
      MergeProposal mp;
      mp.first = p.at("regions").at(0).get<RegionId>();
      mp.second = p.at("regions").at(1).get<RegionId>();
      mp.co_fired = p.at("co_fired").get<std::size_t>();
      mp.merged_ensemble = detail::ids_from(p.at("ensemble"), n);
      for (const auto& r : p.at("retained")) {
        mp.retained.push_back(StoredPattern{detail::optional_symbol_from(r.at("label"), n),
                                            detail::ids_from(r.at("members"), n)});
      }
      m.analysis.merges.push_back(std::move(mp));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::load_failed, std::string("snapshot is corrupt: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::unsupported_version || e.code() == Errc::load_failed) throw;
    throw Error(Errc::load_failed, std::string("snapshot is inconsistent: ") + e.what());
  }
}

inline Model load_snapshot(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_snapshot(buf.str());
}

}  // namespace unitwork
