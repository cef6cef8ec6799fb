// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "fixtures.hpp"

using namespace unitwork;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Model hb_model(int rounds = 2) {
  BuildConfig config;
  config.rounds = rounds;
  return build_model(fixtures::houseboat(), config);
}

bool parent_rule_holds(const ConceptTree& tree) {
  if (tree.root().members != tree.ensemble()) return false;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    const auto& child = tree.nodes[i];
    if (!child.parent) return false;
    const auto& parent = tree.nodes[*child.parent];
    if (!is_subset(child.members, parent.members) || child.members.size() >= parent.members.size()) return false;
    if (child.support < parent.support) return false;
  }
  return true;
}

Verdict unit_oracle() {
  Verdict v;
  std::mt19937 rng(101);
  std::uniform_int_distribution<std::size_t> ns(1, 12), ne(0, 40);
  int agree = 0;
  const int trials = 250;
  for (int t = 0; t < trials; ++t) {
    auto n = ns(rng);
    auto events = fixtures::random_events(rng, n, ne(rng));
    auto units = derive_units(count_events(events, n));
    if (fixtures::members_of(units) == fixtures::oracle_units(fixtures::dense_counts(events, n))) ++agree;
  }
  v.detail = std::to_string(agree) + "/" + std::to_string(trials) + " corpora agree";
  if (agree != trials) v.ok = false;
  return v;
}

Verdict regularity() {
  Verdict v;
  std::mt19937 rng(102);
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    auto bc = fixtures::block_corpus(rng);
    auto units = derive_units(count_events(bc.events, bc.symbol_count));
    auto refined = refine_within_units(bc.events, units, bc.symbol_count);
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (refined.level2[u].coefficient_of_variation > refined.level1[u].coefficient_of_variation + 1e-12) {
        v.fail("block corpus " + std::to_string(t) + " unit " + std::to_string(u) + " got less regular");
      }
    }
  }
  auto m = hb_model();
  if (m.regularity_level2.size() != 3) v.fail("HB has " + std::to_string(m.regularity_level2.size()) + " units");
  for (const auto& r : m.regularity_level2) {
    if (r.coefficient_of_variation != 0.0) v.fail("HB level-2 CV is not 0");
  }
  if (v.ok) v.detail = std::to_string(trials) + " block corpora monotone, HB level-2 CV = 0 for 3 units";
  return v;
}

Verdict counting_rule() {
  Verdict v;
  std::mt19937 rng(103);
  int trees = 0;
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<std::size_t> ns(1, 8), ne(1, 30);
    auto n = ns(rng);
    auto events = fixtures::random_events(rng, n, ne(rng));
    auto units = derive_units(count_events(events, n));
    for (const auto& u : units) {
      auto ensemble = to_symbols(u.members);
      if (support_of(ensemble, events) == 0) events.push_back(Event{events.size() + 1, ensemble, std::nullopt});
      auto tree = build_inverted_tree(u.unit_id, ensemble, mine_subpatterns(ensemble, events));
      ++trees;
      if (!parent_rule_holds(tree)) v.fail("random tree " + std::to_string(trees) + " breaks the rule");
    }
  }
  auto m = hb_model();
  const auto& house = m.trees.at(0);
  if (house.root().support != 1) v.fail("HB house root support != 1");
  if (house.root().children.size() != 2) v.fail("HB house root does not have 2 children");
  for (auto c : house.root().children) {
    if (house.nodes[c].support != 2 || house.nodes[c].members.size() != 2) v.fail("HB internal node mismatch");
  }
  if (!parent_rule_holds(house)) v.fail("HB house tree breaks the rule");
  if (v.ok) v.detail = std::to_string(trees) + " random trees, HB house root 1 / internal 2,2";
  return v;
}

Verdict disambiguation() {
  Verdict v;
  for (int rounds : {1, 2, 3}) {
    auto m = hb_model(rounds);
    auto house = m.symbols.at("house"), boat = m.symbols.at("boat");
    auto window = fixtures::syms(m.symbols, {"window"});
    auto t1 = recall(m, {"window", "wall", "roof"});
    if (t1.ranking.size() != 2 || t1.ranking[0].type != house || !(t1.ranking[0].score > t1.ranking[1].score)) {
      v.fail("R=" + std::to_string(rounds) + ": house not strictly first");
    } else if (associate_feature(t1, window) != house) {
      v.fail("R=" + std::to_string(rounds) + ": window not associated with house");
    }
    auto t2 = recall(m, {"window", "hull", "deck"});
    if (t2.ranking.size() != 2 || t2.ranking[0].type != boat || !(t2.ranking[0].score > t2.ranking[1].score)) {
      v.fail("R=" + std::to_string(rounds) + ": boat not strictly first");
    } else if (associate_feature(t2, window) != boat) {
      v.fail("R=" + std::to_string(rounds) + ": window not associated with boat");
    }
  }
  if (v.ok) v.detail = "house/boat ranked correctly for R in {1,2,3}";
  return v;
}

Verdict binding() {
  Verdict v;
  SymbolTable t;
  auto red = t.intern("red"), circle = t.intern("circle"), blue = t.intern("blue"), square = t.intern("square");
  auto scene = bind_scene({{red, circle}, {blue, square}});
  std::set<std::pair<SymbolId, SymbolId>> bound;
  for (auto a : {red, blue}) {
    for (auto o : {circle, square}) {
      if (is_bound(scene, {a, o})) bound.emplace(a, o);
    }
  }
  if (bound != std::set<std::pair<SymbolId, SymbolId>>{{red, circle}, {blue, square}}) v.fail("RB answers wrong");

  std::mt19937 rng(105);
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint32_t> ids(2 * n);
      for (std::uint32_t i = 0; i < 2 * n; ++i) ids[i] = i;
      std::shuffle(ids.begin(), ids.end(), rng);
      std::vector<std::pair<SymbolId, SymbolId>> pairs;
      for (std::uint32_t i = 0; i < n; ++i) pairs.emplace_back(SymbolId{ids[i]}, SymbolId{ids[n + i]});
      auto s = bind_scene(pairs);
      for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t o = 0; o < n; ++o) {
          if (is_bound(s, {pairs[a].first, pairs[o].second}) != (a == o)) {
            v.fail("n=" + std::to_string(n) + " confuses a pairing");
          }
        }
      }
    }
  }
  if (v.ok) v.detail = "RB exact, n <= 6 exhaustive";
  return v;
}

Verdict exclusivity() {
  Verdict v;
  std::mt19937 rng(106);
  std::uniform_int_distribution<std::size_t> n_dist(2, 8);
  std::bernoulli_distribution coin(0.4);
  const int trials = 600;
  int settled = 0, oscillating = 0;
  for (int t = 0; t < trials; ++t) {
    auto net = build_logic_net(fixtures::random_logic_spec(rng, n_dist(rng)));
    std::vector<ConceptIndex> stimulus;
    for (ConceptIndex i = 0; i < net.size(); ++i) {
      if (coin(rng)) stimulus.push_back(i);
    }
    auto state = propagate(net, stimulus, kDefaultMaxSteps);
    if (state.outcome == Outcome::step_limit) v.fail("net " + std::to_string(t) + " hit the step limit");
    (state.outcome == Outcome::settled ? settled : oscillating)++;
    for (auto [x, y] : net.inhibitors) {
      if (state.group_active[*net.group_index(x)] && state.group_active[*net.group_index(y)]) {
        v.fail("net " + std::to_string(t) + " keeps both sides of inhibitor " + std::to_string(x) + "-" +
               std::to_string(y));
      }
    }
  }
  auto pv = build_logic_net(fixtures::person_spec());
  auto state = propagate(pv, std::vector<std::string>{"person"});
  if (state.active_groups(pv).size() != 1) v.fail("PV {person} leaves " + std::to_string(state.active_groups(pv).size()) + " groups");
  if (v.ok) {
    v.detail = std::to_string(trials) + " nets: " + std::to_string(settled) + " settled, " +
               std::to_string(oscillating) + " oscillating; PV leaves one group";
  }
  return v;
}

Verdict unique_paths() {
  Verdict v;
  auto spec = fixtures::person_spec();
  spec.groups.push_back({3, {"speak", "person"}});
  try {
    build_logic_net(spec);
    v.fail("duplicate group path accepted");
  } catch (const Error& e) {
    if (e.code() != Errc::signature_collision) v.fail("duplicate group path gave the wrong error");
  }

  auto c = fixtures::houseboat();
  TypeSetMatchNet net;
  auto r = net.add_region();
  auto sets = std::vector<SymbolSet>{fixtures::syms(c.symbols, {"window"}), fixtures::syms(c.symbols, {"wall", "roof"})};
  net.register_type(c.symbols.at("house"), sets, r);
  try {
    net.register_type(c.symbols.at("boat"), sets, r);
    v.fail("duplicate type path accepted");
  } catch (const Error& e) {
    if (e.code() != Errc::signature_collision) v.fail("duplicate type path gave the wrong error");
  }

  try {
    auto m = build_model(fixtures::houseboat(), BuildConfig{}, fixtures::person_spec());
    std::set<std::string> seen;
    for (const auto& [_, t] : m.net.types()) seen.insert(t.path_signature);
    for (const auto& g : m.logic.groups) seen.insert(g.path_signature);
    if (seen.size() != m.net.types().size() + m.logic.groups.size()) v.fail("fixture signatures repeat");
  } catch (const Error& e) {
    v.fail(std::string("fixtures fail to build: ") + e.what());
  }
  if (v.ok) v.detail = "duplicates rejected, HB and PV build with distinct paths";
  return v;
}

Verdict placement() {
  Verdict v;
  auto c = fixtures::houseboat();
  TypeSetMatchNet net;
  auto house = c.symbols.at("house");
  auto r = net.place_pattern(fixtures::syms(c.symbols, {"window", "door", "wall", "roof"}), house);
  net.register_type(house,
                    {fixtures::syms(c.symbols, {"window"}), fixtures::syms(c.symbols, {"door"}),
                     fixtures::syms(c.symbols, {"wall", "roof"})},
                    r);
  if (net.place_pattern(fixtures::syms(c.symbols, {"window", "door", "hull", "deck"}), c.symbols.at("boat")) != r) {
    v.fail("boat did not join the house region");
  }
  std::mt19937 rng(108);
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    auto random_net = fixtures::random_type_net(rng);
    if (!fixtures::placement_matches_scan(rng, random_net)) v.fail("random net " + std::to_string(t) + " disagrees");
  }
  if (v.ok) v.detail = "boat joins house region; " + std::to_string(trials) + " random nets match the scan";
  return v;
}

Verdict persistence() {
  Verdict v;
  auto build = [] { return build_model(fixtures::houseboat(), BuildConfig{}, fixtures::person_spec()); };
  auto m = build();
  auto a = save_snapshot(m);
  if (a != save_snapshot(build())) v.fail("two builds differ");
  auto loaded = load_snapshot(a);
  if (save_snapshot(loaded) != a) v.fail("re-saving changes the bytes");
  const auto n = m.symbols.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::string> q;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) q.push_back(m.symbols.label(SymbolId{i}));
    }
    if (recall(m, q) != recall(loaded, q)) v.fail("recall differs after load");
  }
  for (ConceptIndex i = 0; i < m.logic.size(); ++i) {
    if (propagate(m.logic, std::vector<ConceptIndex>{i}).history !=
        propagate(loaded.logic, std::vector<ConceptIndex>{i}).history) {
      v.fail("propagation differs after load");
    }
  }
  for (auto target : {DotTarget::trees, DotTarget::net, DotTarget::logic}) {
    if (export_dot(m, target) != export_dot(loaded, target)) v.fail("DOT export differs after load");
  }
  if (stats_json(m) != stats_json(loaded)) v.fail("stats differ after load");
  if (v.ok) v.detail = "byte-identical builds, " + std::to_string(1u << n) + " recall queries preserved";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"unit-derivation oracle equivalence", unit_oracle},
      {"regularity monotonicity", regularity},
      {"inverted counting rule", counting_rule},
      {"disambiguation", disambiguation},
      {"binding", binding},
      {"inhibitor exclusivity", exclusivity},
      {"unique paths", unique_paths},
      {"stigmergic placement", placement},
      {"determinism and persistence", persistence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s (%lld ms)\n", v.ok ? "PASS" : "FAIL", static_cast<int>(i + 1),
                criteria[i].first.c_str(), v.detail.c_str(), static_cast<long long>(ms));
    failed += v.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
