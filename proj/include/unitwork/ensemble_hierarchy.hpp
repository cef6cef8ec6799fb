#pragma once
// Inverted concept trees over an ensemble.
//
// The root holds the whole ensemble and is the least supported node. Closed
// sub-patterns hang below it, each under its most supported strict superset,
// down to singleton leaves. Firing a tree and feeding the fired nodes back
// into their secondary links closes the ensemble/hierarchy loop.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "unitwork/core.hpp"
#include "unitwork/error.hpp"
#include "unitwork/frequency_grid.hpp"

namespace unitwork {

struct Subpattern {
  SymbolSet members;
  Count support = 0;

  friend bool operator==(const Subpattern&, const Subpattern&) = default;
};

inline Count support_of(const SymbolSet& members, const std::vector<Event>& events) {
  Count n = 0;
  for (const auto& e : events) {
    if (is_subset(members, e.actives)) ++n;
  }
  return n;
}

namespace detail {

inline SymbolSet intersect(const SymbolSet& a, const SymbolSet& b) {
  SymbolSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Larger sets first, then lexicographic.
inline bool tree_order(const SymbolSet& a, const SymbolSet& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

}  // namespace detail

// Closed frequent subsets of `ensemble`, plus the full ensemble and every
// singleton whenever their support reaches `min_support`.
//
// Closed sets are exactly the non-empty intersections of event projections
// onto the ensemble, so they are grown by intersecting each projection with
// everything collected so far.
inline std::vector<Subpattern> mine_subpatterns(const SymbolSet& ensemble, const std::vector<Event>& events,
                                                Count min_support = 1) {
  if (min_support < 1) throw Error(Errc::invalid_argument, "min_support must be >= 1");
  std::set<SymbolSet> closed;
  for (const auto& e : events) {
    auto projection = detail::intersect(e.actives, ensemble);
    if (projection.empty() || closed.contains(projection)) continue;
    std::vector<SymbolSet> fresh{projection};
    for (const auto& c : closed) {
      auto meet = detail::intersect(c, projection);
      if (!meet.empty()) fresh.push_back(std::move(meet));
    }
    closed.insert(fresh.begin(), fresh.end());
  }
  if (!ensemble.empty()) closed.insert(ensemble);
  for (auto s : ensemble) closed.insert(SymbolSet{s});

  std::vector<Subpattern> out;
  for (const auto& members : closed) {
    Count support = support_of(members, events);
    if (support >= min_support) out.push_back(Subpattern{members, support});
  }
  std::sort(out.begin(), out.end(),
            [](const Subpattern& a, const Subpattern& b) { return detail::tree_order(a.members, b.members); });
  return out;
}

inline std::vector<Subpattern> mine_subpatterns(const Unit& unit, const std::vector<Event>& events,
                                                Count min_support = 1) {
  return mine_subpatterns(to_symbols(unit.members), events, min_support);
}

struct TreeNode {
  SymbolSet members;
  Count support = 0;
  double distance = 0.0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  // Secondary links from this node to each of its ensemble members.
  std::map<SymbolId, Count> secondary;

  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct ConceptTree {
  std::uint32_t unit_id = 0;
  std::optional<SymbolId> label;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& root() const { return nodes.front(); }
  const SymbolSet& ensemble() const { return root().members; }

  std::optional<std::size_t> find(const SymbolSet& members) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].members == members) return i;
    }
    return std::nullopt;
  }

  std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].is_leaf()) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const ConceptTree&, const ConceptTree&) = default;
};

struct DistinctnessSignal {
  std::uint32_t unit_id = 0;
  double boost = 1.0;

  friend bool operator==(const DistinctnessSignal&, const DistinctnessSignal&) = default;
};

inline double distance_for(Count support) { return 1.0 / static_cast<double>(support); }

// Parent of each sub-pattern is the strict superset with the largest
// support (the nearest one); ties prefer the larger set, then the
// lexicographically smaller one.
inline ConceptTree build_inverted_tree(std::uint32_t unit_id, const SymbolSet& ensemble,
                                       std::vector<Subpattern> subpatterns,
                                       std::optional<SymbolId> label = std::nullopt) {
  std::map<SymbolSet, Count> unique;
  for (auto& p : subpatterns) {
    if (p.members.empty()) throw Error(Errc::build_failed, "empty sub-pattern");
    if (p.support == 0) throw Error(Errc::build_failed, "sub-pattern with zero support");
    if (!is_subset(p.members, ensemble)) throw Error(Errc::build_failed, "sub-pattern outside ensemble");
    auto [it, inserted] = unique.emplace(p.members, p.support);
    if (!inserted && it->second != p.support) {
      throw Error(Errc::build_failed, "conflicting supports for one sub-pattern");
    }
  }
  if (ensemble.empty() || !unique.contains(ensemble)) {
    throw Error(Errc::build_failed, "sub-patterns do not include the full ensemble");
  }
  for (auto s : ensemble) {
    if (!unique.contains(SymbolSet{s})) {
      throw Error(Errc::build_failed, "sub-patterns miss singleton " + std::to_string(s.value));
    }
  }

  std::vector<std::pair<SymbolSet, Count>> ordered(unique.begin(), unique.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return detail::tree_order(a.first, b.first); });

  ConceptTree tree;
  tree.unit_id = unit_id;
  tree.label = label;
  for (auto& [members, support] : ordered) {
    TreeNode node;
    node.members = members;
    node.support = support;
    node.distance = distance_for(support);
    tree.nodes.push_back(std::move(node));
  }
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < tree.nodes.size(); ++j) {
      const auto& cand = tree.nodes[j];
      if (cand.members.size() <= tree.nodes[i].members.size()) continue;
      if (!is_subset(tree.nodes[i].members, cand.members)) continue;
      if (!best) {
        best = j;
        continue;
      }
      const auto& cur = tree.nodes[*best];
      if (cand.support != cur.support) {
        if (cand.support > cur.support) best = j;
      } else if (detail::tree_order(cand.members, cur.members)) {
        best = j;
      }
    }
    // The root is a strict superset of every other node, so best is set.
    tree.nodes[i].parent = *best;
    tree.nodes[*best].children.push_back(i);
  }
  return tree;
}

inline ConceptTree build_inverted_tree(const Unit& unit, std::vector<Subpattern> subpatterns) {
  return build_inverted_tree(unit.unit_id, to_symbols(unit.members), std::move(subpatterns));
}

// A node fires iff all of its members are active.
inline std::vector<std::size_t> fire_tree(const ConceptTree& tree, const SymbolSet& actives) {
  std::vector<std::size_t> fired;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (is_subset(tree.nodes[i].members, actives)) fired.push_back(i);
  }
  return fired;
}

// Feedback step of the ensemble/hierarchy loop. Only nodes of `tree` change.
inline std::optional<DistinctnessSignal> reinforce(ConceptTree& tree, std::span<const std::size_t> fired,
                                                   double boost = 1.0) {
  bool root_fired = false;
  for (auto i : fired) {
    if (i >= tree.nodes.size()) throw Error(Errc::unknown_node, "fired node not in tree");
  }
  for (auto i : fired) {
    for (auto m : tree.nodes[i].members) tree.nodes[i].secondary[m] += 1;
    root_fired = root_fired || i == 0;
  }
  if (!root_fired) return std::nullopt;
  return DistinctnessSignal{tree.unit_id, boost};
}

// Root first, children in index order.
inline std::vector<std::size_t> top_down(const ConceptTree& tree) {
  std::vector<std::size_t> order;
  if (tree.nodes.empty()) return order;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    order.push_back(i);
    const auto& ch = tree.nodes[i].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

// Leaves first; every node appears after all of its descendants.
inline std::vector<std::size_t> bottom_up(const ConceptTree& tree) {
  std::vector<std::size_t> order;
  if (tree.nodes.empty()) return order;
  auto visit = [&](auto&& self, std::size_t i) -> void {
    for (auto c : tree.nodes[i].children) self(self, c);
    order.push_back(i);
  };
  visit(visit, 0);
  return order;
}

}  // namespace unitwork
