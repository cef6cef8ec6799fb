#pragma once
// Type-set-match network.
//
// Three tiers: stored ensembles (grouped into regions) at the base, feature
// set nodes above them, and type nodes on top. Feature nodes are shared by
// every type that lists the same member set. Recognition scores types from
// the feature sets an input fires, then feeds a boost back into the leading
// type's ensemble for the remaining rounds.
//
// The same header carries the two-layer scene binding, lateral links between
// concept trees, induction proposals and global region merging.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "unitwork/core.hpp"
#include "unitwork/ensemble_hierarchy.hpp"
#include "unitwork/error.hpp"
#include "unitwork/frequency_grid.hpp"

namespace unitwork {

using RegionId = std::uint32_t;
using FeatureId = std::uint32_t;

struct FeatureSetNode {
  SymbolSet members;
  std::set<RegionId> owning_regions;
  std::set<SymbolId> type_links;

  friend bool operator==(const FeatureSetNode&, const FeatureSetNode&) = default;
};

struct TypeNode {
  SymbolId type_id;
  RegionId region = 0;
  std::map<FeatureId, double> feature_links;
  std::string path_signature;

  friend bool operator==(const TypeNode&, const TypeNode&) = default;
};

struct StoredPattern {
  std::optional<SymbolId> label;
  SymbolSet members;

  friend bool operator==(const StoredPattern&, const StoredPattern&) = default;
};

struct Region {
  RegionId region_id = 0;
  std::vector<StoredPattern> ensembles;
  std::vector<RegionId> neighbor_order;

  friend bool operator==(const Region&, const Region&) = default;
};

class TypeSetMatchNet {
 public:
  RegionId add_region() {
    RegionId id = static_cast<RegionId>(regions_.size());
    regions_.push_back(Region{id, {}, {}});
    return id;
  }

  // Links `label` to one feature node per member set, creating the nodes
  // that do not exist yet. Re-registering an identical type is a no-op;
  // registering more sets extends it. Two distinct types may not end up
  // with the same (feature sets, region) path.
  const TypeNode& register_type(SymbolId label, const std::vector<SymbolSet>& feature_sets,
                                RegionId region) {
    check_region(region);
    if (feature_sets.empty()) throw Error(Errc::invalid_argument, "type needs at least one feature set");
    std::set<SymbolSet> wanted;
    for (const auto& fs : feature_sets) {
      if (fs.empty()) throw Error(Errc::invalid_argument, "empty feature set");
      wanted.insert(make_set(fs));
    }

    auto existing = types_.find(label);
    if (existing != types_.end()) {
      if (existing->second.region != region) {
        throw Error(Errc::invalid_argument, "type already registered in region " +
                                                std::to_string(existing->second.region));
      }
      for (const auto& [fid, _] : existing->second.feature_links) wanted.insert(features_[fid].members);
    }
    std::string signature = path_signature(wanted, region);
    for (const auto& [other, node] : types_) {
      if (other != label && node.path_signature == signature) {
        throw Error(Errc::signature_collision, "type " + std::to_string(label.value) +
                                                   " repeats the feature path of type " +
                                                   std::to_string(other.value));
      }
    }

    TypeNode& type = types_[label];
    type.type_id = label;
    type.region = region;
    type.path_signature = std::move(signature);
    for (const auto& members : wanted) {
      FeatureId fid = feature_for(members);
      type.feature_links.emplace(fid, 1.0);
      features_[fid].type_links.insert(label);
      features_[fid].owning_regions.insert(region);
    }
    refresh_neighbors();
    return type;
  }

  // Number of pattern members that already appear in feature nodes owned by
  // `region`.
  std::size_t shared_feature_members(RegionId region, const SymbolSet& pattern) const {
    check_region(region);
    std::set<SymbolId> vocabulary;
    for (const auto& f : features_) {
      if (f.owning_regions.contains(region)) vocabulary.insert(f.members.begin(), f.members.end());
    }
    std::size_t n = 0;
    for (auto s : pattern) n += vocabulary.contains(s) ? 1 : 0;
    return n;
  }

  // Stigmergic placement: the region whose features already cover most of
  // the pattern takes it; zero overlap everywhere opens a new region.
  RegionId place_pattern(const SymbolSet& pattern, std::optional<SymbolId> label = std::nullopt) {
    if (pattern.empty()) throw Error(Errc::invalid_argument, "cannot place an empty pattern");
    StoredPattern stored{label, make_set(pattern)};
    for (const auto& r : regions_) {
      for (const auto& p : r.ensembles) {
        if (p == stored) return r.region_id;
      }
    }
    std::optional<RegionId> best;
    std::size_t best_overlap = 0;
    for (const auto& r : regions_) {
      auto overlap = shared_feature_members(r.region_id, stored.members);
      if (overlap > best_overlap) {
        best = r.region_id;
        best_overlap = overlap;
      }
    }
    RegionId target = best ? *best : add_region();
    regions_[target].ensembles.push_back(std::move(stored));
    refresh_neighbors();
    return target;
  }

  // Feature nodes owned by both regions.
  std::size_t region_overlap(RegionId a, RegionId b) const {
    std::size_t n = 0;
    for (const auto& f : features_) {
      if (f.owning_regions.contains(a) && f.owning_regions.contains(b)) ++n;
    }
    return n;
  }

  const std::vector<RegionId>& neighbor_index(RegionId region) const {
    check_region(region);
    return regions_[region].neighbor_order;
  }

  void commit_type_link(SymbolId a, SymbolId b) {
    if (!types_.contains(a) || !types_.contains(b)) {
      throw Error(Errc::unknown_symbol, "type link between unregistered types");
    }
    type_links_.insert(ordered_pair(a, b));
  }

  std::optional<FeatureId> find_feature(const SymbolSet& members) const {
    auto it = feature_index_.find(make_set(members));
    if (it == feature_index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<FeatureSetNode>& features() const { return features_; }
  const std::map<SymbolId, TypeNode>& types() const { return types_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::set<SymbolPair>& type_links() const { return type_links_; }

  void check_region(RegionId region) const {
    if (region >= regions_.size()) {
      throw Error(Errc::unknown_region, "unknown region " + std::to_string(region));
    }
  }

  friend bool operator==(const TypeSetMatchNet& a, const TypeSetMatchNet& b) {
    return a.features_ == b.features_ && a.types_ == b.types_ && a.regions_ == b.regions_ &&
           a.type_links_ == b.type_links_;
  }

  // Restores a net from its parts; used by snapshot loading.
  static TypeSetMatchNet assemble(std::vector<FeatureSetNode> features, std::map<SymbolId, TypeNode> types,
                                  std::vector<Region> regions, std::set<SymbolPair> type_links) {
    TypeSetMatchNet net;
    net.features_ = std::move(features);
    for (FeatureId f = 0; f < net.features_.size(); ++f) {
      if (!net.feature_index_.emplace(net.features_[f].members, f).second) {
        throw Error(Errc::load_failed, "duplicate feature node");
      }
    }
    net.types_ = std::move(types);
    net.regions_ = std::move(regions);
    net.type_links_ = std::move(type_links);
    for (auto& [id, type] : net.types_) {
      for (const auto& [fid, _] : type.feature_links) {
        if (fid >= net.features_.size()) throw Error(Errc::load_failed, "type links unknown feature");
      }
      net.check_region(type.region);
      std::set<SymbolSet> sets;
      for (const auto& [fid, _] : type.feature_links) sets.insert(net.features_[fid].members);
      type.path_signature = path_signature(sets, type.region);
    }
    net.refresh_neighbors();
    return net;
  }

  static std::string path_signature(const std::set<SymbolSet>& feature_sets, RegionId region) {
    std::ostringstream out;
    out << "r" << region;
    for (const auto& fs : feature_sets) {
      out << "|";
      for (std::size_t i = 0; i < fs.size(); ++i) out << (i ? "," : "") << fs[i].value;
    }
    return out.str();
  }

 private:
  FeatureId feature_for(const SymbolSet& members) {
    if (auto it = feature_index_.find(members); it != feature_index_.end()) return it->second;
    FeatureId id = static_cast<FeatureId>(features_.size());
    features_.push_back(FeatureSetNode{members, {}, {}});
    feature_index_.emplace(members, id);
    return id;
  }

  void refresh_neighbors() {
    for (auto& r : regions_) {
      std::vector<std::pair<std::size_t, RegionId>> ranked;
      for (const auto& other : regions_) {
        if (other.region_id == r.region_id) continue;
        if (auto n = region_overlap(r.region_id, other.region_id); n > 0) {
          ranked.emplace_back(n, other.region_id);
        }
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      r.neighbor_order.clear();
      for (const auto& [_, id] : ranked) r.neighbor_order.push_back(id);
    }
  }

  std::vector<FeatureSetNode> features_;
  std::map<SymbolSet, FeatureId> feature_index_;
  std::map<SymbolId, TypeNode> types_;
  std::vector<Region> regions_;
  std::set<SymbolPair> type_links_;
};

// ---------------------------------------------------------------------------
// Recognition

struct RecallOptions {
  int rounds = 2;
  double boost = 1.0;     // distinctness boost when a type's full ensemble fires
  double feedback = 1.0;  // ensemble feedback granted to the leader each round
};

struct RankedType {
  SymbolId type;
  double score = 0.0;

  friend bool operator==(const RankedType&, const RankedType&) = default;
};

struct FiredFeature {
  FeatureId feature = 0;
  SymbolSet members;
  std::vector<SymbolId> types;

  friend bool operator==(const FiredFeature&, const FiredFeature&) = default;
};

struct EnsembleRef {
  RegionId region = 0;
  std::size_t index = 0;

  friend auto operator<=>(const EnsembleRef&, const EnsembleRef&) = default;
};

struct RecognitionRound {
  int round = 0;
  std::map<SymbolId, double> type_scores;
  std::map<FeatureId, double> feature_activation;
  std::map<EnsembleRef, double> ensemble_activation;
  std::optional<SymbolId> leader;
  bool distinctness = false;  // leader's full ensemble fired during the boost

  friend bool operator==(const RecognitionRound&, const RecognitionRound&) = default;
};

struct RecognitionTrace {
  std::vector<RecognitionRound> rounds;
  std::vector<RankedType> ranking;
  std::vector<FiredFeature> fired_features;
  int leader_changes = 0;

  std::optional<std::size_t> rank_of(SymbolId type) const {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      if (ranking[i].type == type) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const RecognitionTrace&, const RecognitionTrace&) = default;
};

inline std::vector<RankedType> rank_types(const std::map<SymbolId, double>& scores) {
  std::vector<RankedType> out;
  for (const auto& [t, s] : scores) out.push_back(RankedType{t, s});
  std::stable_sort(out.begin(), out.end(), [](const RankedType& a, const RankedType& b) {
    return a.score != b.score ? a.score > b.score : a.type < b.type;
  });
  return out;
}

inline RecognitionTrace recognize(const TypeSetMatchNet& net, const SymbolSet& actives,
                                  const RecallOptions& options = {}) {
  if (options.rounds < 1) throw Error(Errc::invalid_argument, "rounds must be >= 1");
  const auto input = make_set(actives);

  RecognitionTrace trace;
  std::vector<bool> fired(net.features().size(), false);
  for (FeatureId f = 0; f < net.features().size(); ++f) {
    const auto& node = net.features()[f];
    if (is_subset(node.members, input)) {
      fired[f] = true;
      trace.fired_features.push_back(
          FiredFeature{f, node.members, std::vector<SymbolId>(node.type_links.begin(), node.type_links.end())});
    }
  }

  // Feedback accumulates over rounds; the distinctness boost lasts one round.
  std::map<EnsembleRef, double> feedback, boosts;
  for (const auto& r : net.regions()) {
    for (std::size_t i = 0; i < r.ensembles.size(); ++i) feedback[EnsembleRef{r.region_id, i}] = 0.0;
  }

  std::optional<SymbolId> previous_leader;
  for (int round = 0; round < options.rounds; ++round) {
    RecognitionRound rec;
    rec.round = round;

    boosts = feedback;
    if (round > 0) {
      // Feedback from the previous round's leader into its own ensembles.
      const auto leader = *previous_leader;
      const auto& region = net.regions()[net.types().at(leader).region];
      for (std::size_t i = 0; i < region.ensembles.size(); ++i) {
        const auto& p = region.ensembles[i];
        if (p.label != leader) continue;
        EnsembleRef ref{region.region_id, i};
        feedback[ref] += options.feedback;
        boosts[ref] = feedback[ref];
        if (is_subset(p.members, input)) {
          boosts[ref] += options.boost;
          rec.distinctness = true;
        }
      }
    }

    for (FeatureId f = 0; f < fired.size(); ++f) rec.feature_activation[f] = fired[f] ? 1.0 : 0.0;
    for (const auto& r : net.regions()) {
      for (std::size_t i = 0; i < r.ensembles.size(); ++i) {
        const auto& members = r.ensembles[i].members;
        std::size_t hits = 0;
        for (auto s : members) hits += std::binary_search(input.begin(), input.end(), s) ? 1 : 0;
        EnsembleRef ref{r.region_id, i};
        rec.ensemble_activation[ref] = static_cast<double>(hits) + boosts[ref];
      }
    }
    for (const auto& [id, type] : net.types()) {
      double score = 0.0;
      for (const auto& [fid, w] : type.feature_links) {
        if (fired[fid]) score += w;
      }
      const auto& region = net.regions()[type.region];
      for (std::size_t i = 0; i < region.ensembles.size(); ++i) {
        if (region.ensembles[i].label == id) score += boosts[EnsembleRef{region.region_id, i}];
      }
      rec.type_scores[id] = score;
    }

    auto ranking = rank_types(rec.type_scores);
    if (!ranking.empty() && ranking.front().score > 0.0) rec.leader = ranking.front().type;
    if (round > 0 && rec.leader != previous_leader) ++trace.leader_changes;
    previous_leader = rec.leader;
    trace.ranking = std::move(ranking);
    trace.rounds.push_back(std::move(rec));
    if (!previous_leader) break;  // nothing fired, no feedback to give
  }
  return trace;
}

// The best-ranked type among those the fired feature links to.
inline SymbolId associate_feature(const RecognitionTrace& trace, const SymbolSet& feature) {
  const auto members = make_set(feature);
  for (const auto& f : trace.fired_features) {
    if (f.members != members) continue;
    if (f.types.empty()) break;
    SymbolId best = f.types.front();
    for (auto t : f.types) {
      if (trace.rank_of(t) < trace.rank_of(best)) best = t;
    }
    return best;
  }
  throw Error(Errc::invalid_argument, "feature did not fire in this trace");
}

// ---------------------------------------------------------------------------
// Scene binding over two repeated concept layers

struct SceneBinding {
  SymbolSet layer_a;
  SymbolSet layer_b;
  std::set<SymbolPair> cross_links;  // (layer_a node, layer_b node), not symmetric

  friend bool operator==(const SceneBinding&, const SceneBinding&) = default;
};

inline SceneBinding bind_scene(const std::vector<std::pair<SymbolId, SymbolId>>& pairs) {
  SceneBinding scene;
  std::vector<SymbolId> concepts;
  for (const auto& [attribute, object] : pairs) {
    concepts.push_back(attribute);
    concepts.push_back(object);
    scene.cross_links.emplace(attribute, object);
  }
  scene.layer_a = make_set(std::move(concepts));
  scene.layer_b = scene.layer_a;
  for (auto c : scene.layer_a) scene.cross_links.emplace(c, c);
  return scene;
}

inline bool is_bound(const SceneBinding& scene, std::pair<SymbolId, SymbolId> pair) {
  return scene.cross_links.contains(pair);
}

// ---------------------------------------------------------------------------
// Knowledge transitions

struct LateralLink {
  std::size_t from_tree = 0;
  std::size_t from_node = 0;  // a leaf
  std::size_t to_tree = 0;
  std::size_t to_node = 0;    // always the root

  friend auto operator<=>(const LateralLink&, const LateralLink&) = default;
};

// Links every leaf of one tree to the root of each other tree whose
// ensemble also contains the leaf's members.
inline std::vector<LateralLink> transition_k2k(const std::vector<ConceptTree>& trees) {
  if (trees.size() < 2) throw Error(Errc::invalid_argument, "lateral links need at least two trees");
  std::vector<LateralLink> links;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = 0; j < trees.size(); ++j) {
      if (i == j) continue;
      for (auto leaf : trees[i].leaves()) {
        if (is_subset(trees[i].nodes[leaf].members, trees[j].ensemble())) {
          links.push_back(LateralLink{i, leaf, j, 0});
        }
      }
    }
  }
  return links;
}

struct InductionProposal {
  SymbolId first;
  SymbolId second;
  std::size_t shared_features = 0;

  friend bool operator==(const InductionProposal&, const InductionProposal&) = default;
};

// Suggests type-type links for types sharing at least k feature nodes.
// Nothing is committed.
inline std::vector<InductionProposal> propose_induction(const TypeSetMatchNet& net, std::size_t k) {
  if (k < 1) throw Error(Errc::invalid_argument, "k must be >= 1");
  std::vector<InductionProposal> out;
  const auto& types = net.types();
  for (auto a = types.begin(); a != types.end(); ++a) {
    for (auto b = std::next(a); b != types.end(); ++b) {
      if (net.type_links().contains(ordered_pair(a->first, b->first))) continue;
      std::size_t shared = 0;
      for (const auto& [fid, _] : a->second.feature_links) shared += b->second.feature_links.contains(fid);
      if (shared >= k) out.push_back(InductionProposal{a->first, b->first, shared});
    }
  }
  return out;
}

// Regions whose stored patterns fire in each event. A pattern fires when at
// least ceil(theta * size) of its members are active.
inline std::vector<std::vector<RegionId>> region_activity(const TypeSetMatchNet& net,
                                                          const std::vector<Event>& events, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(Errc::invalid_argument, "theta must lie in (0, 1]");
  std::vector<std::vector<RegionId>> out;
  for (const auto& e : events) {
    std::vector<RegionId> active;
    for (const auto& r : net.regions()) {
      bool fires = std::any_of(r.ensembles.begin(), r.ensembles.end(), [&](const StoredPattern& p) {
        std::size_t hits = 0;
        for (auto s : p.members) hits += std::binary_search(e.actives.begin(), e.actives.end(), s) ? 1 : 0;
        return hits > 0 && hits >= activation_threshold(theta, p.members.size());
      });
      if (fires) active.push_back(r.region_id);
    }
    out.push_back(std::move(active));
  }
  return out;
}

struct MergeProposal {
  RegionId first = 0;
  RegionId second = 0;
  std::size_t co_fired = 0;
  SymbolSet merged_ensemble;
  std::vector<StoredPattern> retained;

  friend bool operator==(const MergeProposal&, const MergeProposal&) = default;
};

inline std::vector<MergeProposal> global_merge(const TypeSetMatchNet& net,
                                               const std::vector<std::vector<RegionId>>& activity,
                                               std::size_t threshold) {
  if (threshold < 1) throw Error(Errc::invalid_argument, "merge threshold must be >= 1");
  std::map<std::pair<RegionId, RegionId>, std::size_t> co_fire;
  for (const auto& firing : activity) {
    std::set<RegionId> uniq(firing.begin(), firing.end());
    for (auto r : uniq) net.check_region(r);
    for (auto a = uniq.begin(); a != uniq.end(); ++a) {
      for (auto b = std::next(a); b != uniq.end(); ++b) ++co_fire[{*a, *b}];
    }
  }
  std::vector<MergeProposal> out;
  for (const auto& [pair, n] : co_fire) {
    if (n < threshold) continue;
    MergeProposal p{pair.first, pair.second, n, {}, {}};
    std::vector<SymbolId> all;
    for (auto r : {pair.first, pair.second}) {
      for (const auto& pat : net.regions()[r].ensembles) {
        all.insert(all.end(), pat.members.begin(), pat.members.end());
        p.retained.push_back(pat);
      }
    }
    p.merged_ensemble = make_set(std::move(all));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace unitwork
