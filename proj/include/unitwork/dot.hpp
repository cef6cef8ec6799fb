#pragma once
// Graphviz exports of concept trees, the type-set-match net and the logic
// net. Node names are positional, so re-exporting a model gives the same
// text byte for byte.

#include <sstream>
#include <string>
#include <string_view>

#include "unitwork/model.hpp"

namespace unitwork {

enum class DotTarget { trees, net, logic };

inline DotTarget parse_dot_target(std::string_view name) {
  if (name == "trees") return DotTarget::trees;
  if (name == "net") return DotTarget::net;
  if (name == "logic") return DotTarget::logic;
  throw Error(Errc::invalid_argument, "unknown export target '" + std::string(name) + "' (trees|net|logic)");
}

inline std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

inline std::string member_label(const SymbolTable& symbols, const SymbolSet& members) {
  std::string out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += ",";
    out += symbols.label(members[i]);
  }
  return out + "}";
}

inline std::string export_trees_dot(const Model& m) {
  std::ostringstream out;
  out << "digraph trees {\n  node [shape=box];\n";
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    const auto& tree = m.trees[t];
    const auto prefix = "t" + std::to_string(t) + "_";
    out << "  subgraph cluster_" << t << " {\n";
    out << "    label=" << dot_quote(tree.label ? m.symbols.label(*tree.label) : "unit " + std::to_string(tree.unit_id))
        << ";\n";
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const auto& n = tree.nodes[i];
      out << "    " << prefix << i << " [label="
          << dot_quote(member_label(m.symbols, n.members) + ":" + std::to_string(n.support)) << "];\n";
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      for (auto c : tree.nodes[i].children) out << "    " << prefix << i << " -> " << prefix << c << ";\n";
    }
    // Secondary links run from each aggregate node to the leaves of its
    // members.
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const auto& n = tree.nodes[i];
      if (n.members.size() < 2) continue;
      for (const auto& [member, weight] : n.secondary) {
        auto leaf = tree.find(SymbolSet{member});
        if (!leaf || *leaf == i) continue;
        out << "    " << prefix << i << " -> " << prefix << *leaf << " [style=dashed, label=\"" << weight
            << "\"];\n";
      }
    }
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_net_dot(const Model& m) {
  const auto& net = m.net;
  std::ostringstream out;
  out << "digraph net {\n  rankdir=TB;\n";
  out << "  subgraph types {\n    rank=same;\n";
  for (const auto& [id, _] : net.types()) {
    out << "    type_" << id.value << " [shape=ellipse, label=" << dot_quote(m.symbols.label(id)) << "];\n";
  }
  out << "  }\n  subgraph feature_sets {\n    rank=same;\n";
  for (FeatureId f = 0; f < net.features().size(); ++f) {
    out << "    feature_" << f << " [shape=box, label=" << dot_quote(member_label(m.symbols, net.features()[f].members))
        << "];\n";
  }
  out << "  }\n  subgraph regions {\n    rank=same;\n";
  for (const auto& r : net.regions()) {
    std::string label = "region " + std::to_string(r.region_id);
    for (const auto& p : r.ensembles) {
      label += "\n" + (p.label ? m.symbols.label(*p.label) + " " : std::string()) + member_label(m.symbols, p.members);
    }
    out << "    region_" << r.region_id << " [shape=folder, label=" << dot_quote(label) << "];\n";
  }
  out << "  }\n";
  for (const auto& [id, type] : net.types()) {
    for (const auto& [f, w] : type.feature_links) {
      out << "  type_" << id.value << " -> feature_" << f << " [label=\"" << w << "\"];\n";
    }
  }
  for (FeatureId f = 0; f < net.features().size(); ++f) {
    for (auto r : net.features()[f].owning_regions) out << "  feature_" << f << " -> region_" << r << ";\n";
  }
  for (const auto& [a, b] : net.type_links()) {
    out << "  type_" << a.value << " -> type_" << b.value << " [dir=none, style=bold];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_logic_dot(const LogicNet& net) {
  std::ostringstream out;
  out << "digraph logic {\n";
  if (!net.concepts.empty()) {
    out << "  subgraph layer_a {\n    rank=same;\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
      out << "    a_" << i << " [shape=box, label=" << dot_quote(net.concepts[i]) << "];\n";
    }
    out << "  }\n  subgraph layer_b {\n    rank=same;\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
      out << "    b_" << i << " [shape=box, label=" << dot_quote(net.concepts[i]) << "];\n";
    }
    out << "  }\n";
    for (std::size_t i = 0; i < net.size(); ++i) out << "  a_" << i << " -> b_" << i << " [dir=both];\n";
    for (const auto& [link, w] : net.relation_links) {
      out << "  a_" << link.first << " -> b_" << link.second << " [label=\"" << w << "\"];\n";
    }
  }
  for (const auto& g : net.groups) {
    out << "  group_" << g.group_id << " [shape=ellipse, label=\"G" << g.group_id << "\"];\n";
    for (auto m : g.members) out << "  group_" << g.group_id << " -> a_" << m << " [style=dotted];\n";
  }
  for (const auto& [a, b] : net.inhibitors) {
    out << "  group_" << a << " -> group_" << b << " [dir=both, arrowhead=tee, arrowtail=tee, color=red];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_dot(const Model& m, DotTarget target) {
  switch (target) {
    case DotTarget::trees: return export_trees_dot(m);
    case DotTarget::net: return export_net_dot(m);
    case DotTarget::logic: return export_logic_dot(m.logic);
  }
  return {};
}

}  // namespace unitwork
