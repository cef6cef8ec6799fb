#pragma once
// End-to-end build: corpus -> links -> grid levels -> concept trees ->
// type-set-match net -> logic net.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "unitwork/config.hpp"
#include "unitwork/core.hpp"
#include "unitwork/ensemble_hierarchy.hpp"
#include "unitwork/frequency_grid.hpp"
#include "unitwork/logic_layer.hpp"
#include "unitwork/semantic_net.hpp"

namespace unitwork {

struct Analysis {
  std::vector<LateralLink> lateral_links;
  std::vector<InductionProposal> induction;
  std::vector<std::vector<RegionId>> region_activity;
  std::vector<MergeProposal> merges;

  friend bool operator==(const Analysis&, const Analysis&) = default;
};

struct Model {
  BuildConfig config;
  SymbolTable symbols;
  std::size_t event_count = 0;
  LinkStore links;

  PairCountGrid level1;
  std::vector<Unit> units;  // level 1
  PairCountGrid level2;
  std::vector<RegularityReport> regularity_level1;
  std::vector<RegularityReport> regularity_level2;
  std::vector<std::vector<NodeId>> unit_activity;
  PairCountGrid level3;
  std::vector<Unit> super_units;

  std::vector<ConceptTree> trees;  // one per label, ascending label id
  TypeSetMatchNet net;
  LogicNet logic;
  Analysis analysis;

  friend bool operator==(const Model&, const Model&) = default;
};

inline std::vector<Event> ordered_events(const std::vector<Event>& events, Ordering ordering) {
  std::vector<Event> out = events;
  if (ordering == Ordering::reverse) std::reverse(out.begin(), out.end());
  return out;
}

// Feature sets a type registers: every sub-concept of its tree below the
// root, or the root itself for a single-member ensemble.
inline std::vector<SymbolSet> tree_feature_sets(const ConceptTree& tree) {
  std::vector<SymbolSet> out;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) out.push_back(tree.nodes[i].members);
  if (out.empty()) out.push_back(tree.root().members);
  return out;
}

// Types take their concepts from the labels; no relations, groups or
// inhibitors are inferred.
inline LogicSpec logic_scaffold(const Model& model) {
  LogicSpec spec;
  for (const auto& [id, _] : model.net.types()) spec.concepts.push_back(model.symbols.label(id));
  return spec;
}

inline Model build_model(const Corpus& corpus, const BuildConfig& config,
                         const std::optional<LogicSpec>& logic = std::nullopt) {
  config.validate();
  if (corpus.events.empty()) throw Error(Errc::empty_event, "no events");

  Model m;
  m.config = config;
  m.symbols = corpus.symbols;
  m.event_count = corpus.events.size();
  const auto events = ordered_events(corpus.events, config.ordering);
  const auto n_symbols = m.symbols.size();

  m.links = link_corpus(events);
  m.level1 = count_events(events, n_symbols);
  m.units = derive_units(m.level1);

  auto refined = refine_within_units(events, m.units, n_symbols);
  m.level2 = std::move(refined.grid);
  m.regularity_level1 = std::move(refined.level1);
  m.regularity_level2 = std::move(refined.level2);

  auto aggregated = aggregate_units(events, m.units, config.theta);
  m.unit_activity = std::move(aggregated.activity);
  m.level3 = std::move(aggregated.grid);
  m.super_units = std::move(aggregated.units);

  // Labelled ensembles: the union of actives over each label's events.
  std::map<SymbolId, std::vector<SymbolId>> ensembles;
  for (const auto& e : events) {
    if (!e.label) continue;
    auto& members = ensembles[*e.label];
    members.insert(members.end(), e.actives.begin(), e.actives.end());
  }
  for (auto& [label, members] : ensembles) {
    auto ensemble = make_set(std::move(members));
    auto support = support_of(ensemble, events);
    if (support < config.min_support) {
      throw Error(Errc::build_failed, "ensemble of label '" + m.symbols.label(label) + "' fires in full in " +
                                          std::to_string(support) + " events, below min_support");
    }
    auto patterns = mine_subpatterns(ensemble, events, config.min_support);
    m.trees.push_back(build_inverted_tree(static_cast<std::uint32_t>(m.trees.size()), ensemble,
                                          std::move(patterns), label));
  }

  for (const auto& tree : m.trees) {
    auto region = m.net.place_pattern(tree.ensemble(), tree.label);
    m.net.register_type(*tree.label, tree_feature_sets(tree), region);
  }

  // Ensemble/hierarchy loop over the corpus.
  for (const auto& e : events) {
    for (auto& tree : m.trees) {
      auto fired = fire_tree(tree, e.actives);
      reinforce(tree, fired, config.boost);
    }
  }

  m.logic = build_logic_net(logic ? *logic : logic_scaffold(m));

  if (m.trees.size() >= 2) m.analysis.lateral_links = transition_k2k(m.trees);
  m.analysis.induction = propose_induction(m.net, config.induction_k);
  m.analysis.region_activity = region_activity(m.net, events, config.theta);
  m.analysis.merges = global_merge(m.net, m.analysis.region_activity, config.merge_threshold);
  return m;
}

inline RecallOptions recall_options(const BuildConfig& config) {
  RecallOptions o;
  o.rounds = config.rounds;
  o.boost = config.boost;
  return o;
}

// Looks labels up without interning; unknown labels are an error.
inline SymbolSet resolve_symbols(const SymbolTable& table, const std::vector<std::string>& labels) {
  std::vector<SymbolId> ids;
  for (const auto& l : labels) ids.push_back(table.at(l));
  return make_set(std::move(ids));
}

inline RecognitionTrace recall(const Model& model, const std::vector<std::string>& labels) {
  return recognize(model.net, resolve_symbols(model.symbols, labels), recall_options(model.config));
}

}  // namespace unitwork
