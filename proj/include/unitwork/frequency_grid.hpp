#pragma once
// Frequency grid: pairwise association counts per level, best-partner
// relations, unit derivation, within-unit refinement and unit aggregation.
//
// Level 1 nodes are symbol ids. The refined level 2 grid keeps the level 1
// node space with cross-unit pairs masked out. The level 3 grid is counted
// over unit activity, so its node space is the list of level 1 units.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unitwork/core.hpp"
#include "unitwork/error.hpp"

namespace unitwork {

using NodeId = std::uint32_t;
using Count = std::uint64_t;

class PairCountGrid {
 public:
  PairCountGrid() = default;
  PairCountGrid(int level, std::size_t node_count)
      : level_(level), adjacency_(node_count) {
    if (level < 1) throw Error(Errc::invalid_argument, "grid level must be >= 1");
  }

  int level() const { return level_; }
  std::size_t node_count() const { return adjacency_.size(); }

  Count count(NodeId a, NodeId b) const {
    check(a);
    check(b);
    if (a == b) return 0;
    auto it = adjacency_[a].find(b);
    return it == adjacency_[a].end() ? 0 : it->second;
  }

  void add(NodeId a, NodeId b, Count amount = 1) {
    check(a);
    check(b);
    if (a == b || amount == 0) return;
    adjacency_[a][b] += amount;
    adjacency_[b][a] += amount;
  }

  // Counted partners of `node`, keyed by partner id.
  const std::map<NodeId, Count>& partners(NodeId node) const {
    check(node);
    return adjacency_[node];
  }

  // Every counted pair once, as (a, b, count) with a < b.
  template <typename Fn>
  void for_each_pair(Fn&& fn) const {
    for (NodeId a = 0; a < adjacency_.size(); ++a) {
      for (const auto& [b, c] : adjacency_[a]) {
        if (a < b) fn(a, b, c);
      }
    }
  }

  std::size_t pair_count() const {
    std::size_t n = 0;
    for_each_pair([&](NodeId, NodeId, Count) { ++n; });
    return n;
  }

  void check(NodeId node) const {
    if (node >= adjacency_.size()) {
      throw Error(Errc::unknown_node, "node " + std::to_string(node) + " not in level " +
                                          std::to_string(level_) + " grid");
    }
  }

  friend bool operator==(const PairCountGrid&, const PairCountGrid&) = default;

 private:
  int level_ = 1;
  std::vector<std::map<NodeId, Count>> adjacency_;
};

struct Unit {
  std::uint32_t unit_id = 0;
  std::vector<NodeId> members;  // sorted
  int level = 1;

  friend bool operator==(const Unit&, const Unit&) = default;
};

struct RegularityReport {
  std::uint32_t unit_id = 0;
  double mean = 0.0;
  double coefficient_of_variation = 0.0;
  std::size_t pair_count = 0;

  friend bool operator==(const RegularityReport&, const RegularityReport&) = default;
};

inline PairCountGrid& update_counts(PairCountGrid& grid, std::span<const NodeId> actives) {
  for (NodeId n : actives) grid.check(n);
  for (std::size_t i = 0; i < actives.size(); ++i) {
    for (std::size_t j = i + 1; j < actives.size(); ++j) grid.add(actives[i], actives[j]);
  }
  return grid;
}

inline std::vector<NodeId> to_nodes(const SymbolSet& symbols) {
  std::vector<NodeId> nodes;
  nodes.reserve(symbols.size());
  for (auto s : symbols) nodes.push_back(s.value);
  return nodes;
}

inline SymbolSet to_symbols(std::span<const NodeId> nodes) {
  SymbolSet out;
  out.reserve(nodes.size());
  for (auto n : nodes) out.push_back(SymbolId{n});
  return make_set(std::move(out));
}

// Level 1 grid over a symbol space of `symbol_count` ids.
inline PairCountGrid count_events(const std::vector<Event>& events, std::size_t symbol_count) {
  PairCountGrid grid(1, symbol_count);
  for (const auto& e : events) {
    auto nodes = to_nodes(e.actives);
    update_counts(grid, nodes);
  }
  return grid;
}

// Partner with the largest count; ties go to the smallest id.
inline std::optional<NodeId> best_partner(const PairCountGrid& grid, NodeId node) {
  std::optional<NodeId> best;
  Count best_count = 0;
  for (const auto& [partner, c] : grid.partners(node)) {
    // partners() iterates in ascending id order, so strict > keeps the smallest.
    if (c > best_count) {
      best = partner;
      best_count = c;
    }
  }
  return best;
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

// Units are the connected components of the best-partner relation graph,
// numbered by their smallest member. Nodes without any counted pair stay out.
inline std::vector<Unit> derive_units(const PairCountGrid& grid) {
  const auto n = grid.node_count();
  detail::DisjointSets sets(n);
  std::vector<bool> related(n, false);
  for (NodeId node = 0; node < n; ++node) {
    if (auto partner = best_partner(grid, node)) {
      related[node] = related[*partner] = true;
      sets.unite(node, *partner);
    }
  }
  // Roots are always the smallest member, so walking ids in order yields
  // units already sorted by smallest member.
  std::map<std::size_t, std::vector<NodeId>> by_root;
  for (NodeId node = 0; node < n; ++node) {
    if (related[node]) by_root[sets.find(node)].push_back(node);
  }
  std::vector<Unit> units;
  units.reserve(by_root.size());
  for (auto& [root, members] : by_root) {
    units.push_back(Unit{static_cast<std::uint32_t>(units.size()), std::move(members), grid.level()});
  }
  return units;
}

inline RegularityReport regularity_of(std::uint32_t unit_id, const std::vector<Count>& counts) {
  RegularityReport report{unit_id, 0.0, 0.0, counts.size()};
  if (counts.empty()) return report;
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  const double mean = sum / static_cast<double>(counts.size());
  double sq = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    sq += d * d;
  }
  const double sd = std::sqrt(sq / static_cast<double>(counts.size()));
  report.mean = mean;
  report.coefficient_of_variation = mean > 0.0 ? sd / mean : 0.0;
  return report;
}

// Level 1 regularity of a unit: every counted pair with at least one end
// inside the unit.
inline RegularityReport touching_regularity(const PairCountGrid& grid, const Unit& unit) {
  std::vector<Count> counts;
  grid.for_each_pair([&](NodeId a, NodeId b, Count c) {
    bool in_a = std::binary_search(unit.members.begin(), unit.members.end(), a);
    bool in_b = std::binary_search(unit.members.begin(), unit.members.end(), b);
    if (in_a || in_b) counts.push_back(c);
  });
  return regularity_of(unit.unit_id, counts);
}

// Within-unit regularity: counted pairs with both ends inside the unit.
inline RegularityReport within_regularity(const PairCountGrid& grid, const Unit& unit) {
  std::vector<Count> counts;
  const auto& m = unit.members;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (auto c = grid.count(m[i], m[j]); c > 0) counts.push_back(c);
    }
  }
  return regularity_of(unit.unit_id, counts);
}

struct Refinement {
  PairCountGrid grid;                       // level 2, cross-unit pairs masked
  std::vector<RegularityReport> level1;     // pairs touching each unit
  std::vector<RegularityReport> level2;     // pairs inside each unit
};

inline Refinement refine_within_units(const std::vector<Event>& events, const std::vector<Unit>& units,
                                      std::size_t symbol_count) {
  constexpr NodeId kNoUnit = static_cast<NodeId>(-1);
  std::vector<NodeId> owner(symbol_count, kNoUnit);
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (NodeId m : units[u].members) {
      if (m >= symbol_count) throw Error(Errc::unknown_node, "unit member outside symbol space");
      owner[m] = static_cast<NodeId>(u);
    }
  }

  Refinement out{PairCountGrid(2, symbol_count), {}, {}};
  PairCountGrid level1(1, symbol_count);
  for (const auto& e : events) {
    auto nodes = to_nodes(e.actives);
    update_counts(level1, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (owner[nodes[i]] != kNoUnit && owner[nodes[i]] == owner[nodes[j]]) {
          out.grid.add(nodes[i], nodes[j]);
        }
      }
    }
  }
  for (const auto& unit : units) {
    out.level1.push_back(touching_regularity(level1, unit));
    out.level2.push_back(within_regularity(out.grid, unit));
  }
  return out;
}

// Smallest active-member count at which a unit of `size` members fires.
inline std::size_t activation_threshold(double theta, std::size_t size) {
  // Guard against theta * size landing a hair above an integer.
  return static_cast<std::size_t>(std::ceil(theta * static_cast<double>(size) - 1e-9));
}

inline std::vector<NodeId> active_units(const SymbolSet& actives, const std::vector<Unit>& units,
                                        double theta) {
  std::vector<NodeId> out;
  for (std::size_t u = 0; u < units.size(); ++u) {
    std::size_t hits = 0;
    for (NodeId m : units[u].members) {
      if (std::binary_search(actives.begin(), actives.end(), SymbolId{m})) ++hits;
    }
    if (hits > 0 && hits >= activation_threshold(theta, units[u].members.size())) {
      out.push_back(static_cast<NodeId>(u));
    }
  }
  return out;
}

struct Aggregation {
  std::vector<std::vector<NodeId>> activity;  // active unit indices per event
  PairCountGrid grid;                         // level 3, nodes are units
  std::vector<Unit> units;                    // super-units, members are unit indices
};

inline constexpr int kAggregateLevel = 3;

// Aggregates level 1 units into super-units by running the same counting,
// best-partner and component steps over unit activity. A unit that never
// co-fires with another becomes its own super-unit.
inline Aggregation aggregate_units(const std::vector<Event>& events, const std::vector<Unit>& units,
                                   double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(Errc::invalid_argument, "theta must lie in (0, 1]");
  }
  Aggregation out{{}, PairCountGrid(kAggregateLevel, units.size()), {}};
  for (const auto& e : events) {
    auto active = active_units(e.actives, units, theta);
    update_counts(out.grid, active);
    out.activity.push_back(std::move(active));
  }
  auto related = derive_units(out.grid);
  std::vector<bool> covered(units.size(), false);
  for (const auto& u : related) {
    for (NodeId m : u.members) covered[m] = true;
  }
  std::vector<std::vector<NodeId>> groups;
  for (auto& u : related) groups.push_back(std::move(u.members));
  for (NodeId u = 0; u < units.size(); ++u) {
    if (!covered[u]) groups.push_back({u});
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (auto& g : groups) {
    out.units.push_back(Unit{static_cast<std::uint32_t>(out.units.size()), std::move(g), kAggregateLevel});
  }
  return out;
}

}  // namespace unitwork
