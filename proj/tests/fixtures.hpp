#pragma once
// Shared corpora, nets and brute-force oracles for the test suites.
//
// The oracles deliberately avoid the library's algorithms: dense matrices
// instead of adjacency maps, DFS labelling instead of union-find, subset
// enumeration instead of intersection closure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "unitwork/unitwork.hpp"

namespace fixtures {

using namespace unitwork;

inline Corpus corpus_from_lines(const std::vector<std::string>& lines) {
  std::ostringstream text;
  for (const auto& l : lines) text << l << "\n";
  std::istringstream in(text.str());
  return load_corpus(in);
}

// Corpus HB: two labelled objects sharing window and door, plus the two
// partial views {wall,roof} and {hull,deck}.
inline Corpus houseboat() {
  return corpus_from_lines({
      R"({"seq": 1, "symbols": ["window", "door", "wall", "roof"], "label": "house"})",
      R"({"seq": 2, "symbols": ["window", "door", "hull", "deck"], "label": "boat"})",
      R"({"seq": 3, "symbols": ["wall", "roof"]})",
      R"({"seq": 4, "symbols": ["hull", "deck"]})",
  });
}

inline SymbolId sym(const Corpus& c, const std::string& label) { return c.symbols.at(label); }

inline SymbolSet syms(const SymbolTable& t, std::initializer_list<const char*> labels) {
  std::vector<SymbolId> out;
  for (auto l : labels) out.push_back(t.at(l));
  return make_set(out);
}

// Net PV: person may be avoided or spoken to, never both.
inline LogicSpec person_spec() {
  LogicSpec spec;
  spec.concepts = {"person", "avoid", "speak"};
  spec.relations = {{"person", "avoid", 1.0}, {"person", "speak", 1.0}};
  spec.groups = {{1, {"person", "avoid"}}, {2, {"person", "speak"}}};
  spec.inhibitors = {{1, 2}};
  return spec;
}

// ---------------------------------------------------------------------------
// Random corpora

inline std::vector<Event> random_events(std::mt19937& rng, std::size_t n_symbols, std::size_t n_events) {
  std::vector<Event> events;
  std::uniform_int_distribution<std::size_t> size_dist(1, std::min<std::size_t>(n_symbols, 6));
  std::vector<std::uint32_t> pool(n_symbols);
  for (std::uint32_t i = 0; i < n_symbols; ++i) pool[i] = i;
  for (std::size_t e = 0; e < n_events; ++e) {
    std::shuffle(pool.begin(), pool.end(), rng);
    auto k = size_dist(rng);
    std::vector<SymbolId> actives;
    for (std::size_t i = 0; i < k; ++i) actives.push_back(SymbolId{pool[i]});
    events.push_back(Event{e + 1, make_set(actives), std::nullopt});
  }
  return events;
}

// Block-structured corpus: each block recurs on its own at least three
// times, block pairs co-occur at most once, and a few noise events join
// single members of two different blocks at most once per pair. Within-block
// counts therefore stay uniform and strictly above every cross-block count.
struct BlockCorpus {
  std::vector<Event> events;
  std::vector<std::vector<NodeId>> blocks;
  std::size_t symbol_count = 0;
};

inline BlockCorpus block_corpus(std::mt19937& rng) {
  BlockCorpus out;
  std::uniform_int_distribution<int> n_blocks_dist(2, 4), size_dist(2, 4), reps_dist(3, 5);
  const int n_blocks = n_blocks_dist(rng);
  NodeId next = 0;
  for (int b = 0; b < n_blocks; ++b) {
    std::vector<NodeId> block;
    for (int i = size_dist(rng); i > 0; --i) block.push_back(next++);
    out.blocks.push_back(block);
  }
  out.symbol_count = next;

  std::vector<std::vector<NodeId>> raw;
  for (const auto& block : out.blocks) {
    for (int r = reps_dist(rng); r > 0; --r) raw.push_back(block);
  }
  std::bernoulli_distribution coin(0.5);
  for (int a = 0; a < n_blocks; ++a) {
    for (int b = a + 1; b < n_blocks; ++b) {
      if (coin(rng)) {
        auto merged = out.blocks[a];
        merged.insert(merged.end(), out.blocks[b].begin(), out.blocks[b].end());
        raw.push_back(merged);
      }
    }
  }
  std::set<std::pair<NodeId, NodeId>> noisy;
  for (int i = 0; i < 3; ++i) {
    std::uniform_int_distribution<int> pick_block(0, n_blocks - 1);
    int a = pick_block(rng), b = pick_block(rng);
    if (a == b) continue;
    std::uniform_int_distribution<std::size_t> pa(0, out.blocks[a].size() - 1), pb(0, out.blocks[b].size() - 1);
    NodeId x = out.blocks[a][pa(rng)], y = out.blocks[b][pb(rng)];
    if (!noisy.insert(std::minmax(x, y)).second) continue;
    raw.push_back({x, y});
  }
  std::shuffle(raw.begin(), raw.end(), rng);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<SymbolId> ids;
    for (auto n : raw[i]) ids.push_back(SymbolId{n});
    out.events.push_back(Event{i + 1, make_set(ids), std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

inline std::vector<std::vector<std::uint64_t>> dense_counts(const std::vector<Event>& events, std::size_t n) {
  std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      for (const auto& e : events) {
        bool has_a = false, has_b = false;
        for (auto s : e.actives) {
          has_a = has_a || s.value == a;
          has_b = has_b || s.value == b;
        }
        if (has_a && has_b) ++m[a][b];
      }
    }
  }
  return m;
}

// Units as sorted member lists, ordered by smallest member.
inline std::vector<std::vector<NodeId>> oracle_units(const std::vector<std::vector<std::uint64_t>>& counts) {
  const auto n = counts.size();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<bool> related(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    std::uint64_t best = 0;
    std::size_t partner = n;
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a && counts[a][b] > best) {
        best = counts[a][b];
        partner = b;
      }
    }
    if (partner == n) continue;
    adj[a].push_back(partner);
    adj[partner].push_back(a);
    related[a] = related[partner] = true;
  }
  std::vector<int> label(n, -1);
  std::vector<std::vector<NodeId>> units;
  for (std::size_t s = 0; s < n; ++s) {
    if (!related[s] || label[s] >= 0) continue;
    std::vector<NodeId> members;
    std::vector<std::size_t> stack{s};
    label[s] = static_cast<int>(units.size());
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      members.push_back(static_cast<NodeId>(v));
      for (auto w : adj[v]) {
        if (label[w] < 0) {
          label[w] = label[s];
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    units.push_back(members);
  }
  return units;
}

inline std::vector<std::vector<NodeId>> members_of(const std::vector<Unit>& units) {
  std::vector<std::vector<NodeId>> out;
  for (const auto& u : units) out.push_back(u.members);
  return out;
}

// Exhaustive closed-subset enumeration over an ensemble of at most ~16 members.
inline std::map<SymbolSet, std::uint64_t> oracle_closed_subsets(const SymbolSet& ensemble,
                                                                 const std::vector<Event>& events,
                                                                 std::uint64_t min_support) {
  const auto n = ensemble.size();
  std::map<std::uint32_t, std::uint64_t> support;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::uint64_t s = 0;
    for (const auto& e : events) {
      bool all = true;
      for (std::size_t i = 0; i < n && all; ++i) {
        if (mask & (1u << i)) {
          all = std::find(e.actives.begin(), e.actives.end(), ensemble[i]) != e.actives.end();
        }
      }
      s += all ? 1 : 0;
    }
    support[mask] = s;
  }
  const std::uint32_t full = (1u << n) - 1;
  std::map<SymbolSet, std::uint64_t> out;
  for (const auto& [mask, s] : support) {
    if (s < min_support) continue;
    bool closed = true;
    for (const auto& [other, t] : support) {
      if (other != mask && (other & mask) == mask && t == s) closed = false;
    }
    bool singleton = (mask & (mask - 1)) == 0;
    if (closed || singleton || mask == full) {
      SymbolSet members;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) members.push_back(ensemble[i]);
      }
      out[members] = s;
    }
  }
  return out;
}

// Independent scan: count pattern members covered by any feature the region
// owns, take the first region with the strictly largest count.
inline std::optional<RegionId> oracle_placement(const TypeSetMatchNet& net, const SymbolSet& pattern) {
  std::optional<RegionId> best;
  std::size_t best_count = 0;
  for (RegionId r = 0; r < net.regions().size(); ++r) {
    std::size_t count = 0;
    for (auto s : pattern) {
      bool covered = false;
      for (const auto& f : net.features()) {
        if (!f.owning_regions.contains(r)) continue;
        for (auto m : f.members) covered = covered || m == s;
      }
      count += covered;
    }
    if (count > best_count) {
      best_count = count;
      best = r;
    }
  }
  return best;
}

inline SymbolSet random_set(std::mt19937& rng, std::uint32_t vocabulary, std::size_t max_size) {
  std::uniform_int_distribution<std::uint32_t> pick(0, vocabulary - 1);
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::vector<SymbolId> out;
  for (auto k = size(rng); k > 0; --k) out.push_back(SymbolId{pick(rng)});
  return make_set(out);
}

// Random net: up to four regions holding up to six types over a ten-symbol
// vocabulary. Registrations that would collide are skipped.
inline TypeSetMatchNet random_type_net(std::mt19937& rng) {
  TypeSetMatchNet net;
  std::uniform_int_distribution<int> n_regions(1, 4), n_types(0, 6), n_sets(1, 3);
  for (int r = n_regions(rng); r > 0; --r) net.add_region();
  std::uniform_int_distribution<RegionId> pick_region(0, static_cast<RegionId>(net.regions().size() - 1));
  std::uint32_t next_type = 100;
  for (int t = n_types(rng); t > 0; --t) {
    std::vector<SymbolSet> sets;
    for (int k = n_sets(rng); k > 0; --k) sets.push_back(random_set(rng, 10, 3));
    try {
      net.register_type(SymbolId{next_type++}, sets, pick_region(rng));
    } catch (const Error& e) {
      if (e.code() != Errc::signature_collision) throw;
    }
  }
  return net;
}

// Places three random patterns and compares each against the scan. A pattern
// already stored verbatim returns its own region and is not checked.
inline bool placement_matches_scan(std::mt19937& rng, TypeSetMatchNet& net) {
  for (int p = 0; p < 3; ++p) {
    auto pattern = random_set(rng, 12, 4);
    const auto regions_before = net.regions().size();
    auto expected = oracle_placement(net, pattern);
    bool stored = false;
    for (const auto& r : net.regions()) {
      for (const auto& sp : r.ensembles) stored = stored || (sp.members == pattern && !sp.label);
    }
    auto got = net.place_pattern(pattern);
    if (stored) continue;
    if (expected ? got != *expected || net.regions().size() != regions_before
                 : got != regions_before || net.regions().size() != regions_before + 1) {
      return false;
    }
  }
  return true;
}

inline double population_cv(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (auto x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (auto x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return mean > 0.0 ? std::sqrt(var) / mean : 0.0;
}

// Random logic net over `n` concepts with random relations, groups and
// inhibitors. Groups get distinct member sets.
inline LogicSpec random_logic_spec(std::mt19937& rng, std::size_t n_concepts) {
  LogicSpec spec;
  for (std::size_t i = 0; i < n_concepts; ++i) spec.concepts.push_back("c" + std::to_string(i));
  std::bernoulli_distribution rel(0.3);
  for (std::size_t a = 0; a < n_concepts; ++a) {
    for (std::size_t b = 0; b < n_concepts; ++b) {
      if (a != b && rel(rng)) spec.relations.push_back({spec.concepts[a], spec.concepts[b], 1.0});
    }
  }
  std::uniform_int_distribution<int> n_groups_dist(1, 5);
  std::uniform_int_distribution<std::size_t> size_dist(1, std::min<std::size_t>(3, n_concepts));
  std::set<std::set<std::size_t>> seen;
  GroupId next = 1;
  for (int g = n_groups_dist(rng); g > 0; --g) {
    std::vector<std::size_t> pool(n_concepts);
    for (std::size_t i = 0; i < n_concepts; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::set<std::size_t> members(pool.begin(), pool.begin() + static_cast<long>(size_dist(rng)));
    if (!seen.insert(members).second) continue;
    GroupSpec gs{next++, {}};
    for (auto m : members) gs.members.push_back(spec.concepts[m]);
    spec.groups.push_back(gs);
  }
  std::bernoulli_distribution inh(0.5);
  for (std::size_t a = 0; a < spec.groups.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.groups.size(); ++b) {
      if (inh(rng)) spec.inhibitors.emplace_back(spec.groups[a].id, spec.groups[b].id);
    }
  }
  return spec;
}

}  // namespace fixtures
