#pragma once
// Procedural logic over two mirrored concept layers.
//
// Layer A receives stimulus and feeds layer B through self links (a_i -> b_i)
// and relation links (a_i -> b_j). Layer B feeds back into A through the
// self links only. Groups are sets of concepts that are active when all of
// their members are active in either layer; inhibitors between groups are
// resolved after every synchronous step so that at most one side survives.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "unitwork/core.hpp"
#include "unitwork/error.hpp"

namespace unitwork {

using ConceptIndex = std::uint32_t;
using GroupId = std::uint32_t;

enum class GroupKind { inclusive };

struct Group {
  GroupId group_id = 0;
  std::vector<ConceptIndex> members;  // sorted
  GroupKind kind = GroupKind::inclusive;
  std::string path_signature;

  friend bool operator==(const Group&, const Group&) = default;
};

// FNV-1a over the id-sorted member list.
inline std::string unique_path(std::vector<ConceptIndex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::uint64_t hash = 14695981039346656037ull;
  auto mix = [&](std::uint8_t byte) {
    hash ^= byte;
    hash *= 1099511628211ull;
  };
  for (auto m : members) {
    for (int shift = 0; shift < 32; shift += 8) mix(static_cast<std::uint8_t>(m >> shift));
    mix(0xff);
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

inline std::string unique_path(const Group& group) { return unique_path(group.members); }

struct LogicNet {
  std::vector<std::string> concepts;
  std::map<std::pair<ConceptIndex, ConceptIndex>, double> relation_links;  // (a_i, b_j)
  std::vector<Group> groups;                                               // ascending id
  std::set<std::pair<GroupId, GroupId>> inhibitors;                        // (smaller, larger)

  std::size_t size() const { return concepts.size(); }

  std::optional<ConceptIndex> find_concept(std::string_view label) const {
    for (ConceptIndex i = 0; i < concepts.size(); ++i) {
      if (concepts[i] == label) return i;
    }
    return std::nullopt;
  }

  ConceptIndex concept_at(std::string_view label) const {
    if (auto i = find_concept(label)) return *i;
    throw Error(Errc::unknown_symbol, "unknown concept '" + std::string(label) + "'");
  }

  std::optional<std::size_t> group_index(GroupId id) const {
    auto it = std::lower_bound(groups.begin(), groups.end(), id,
                               [](const Group& g, GroupId v) { return g.group_id < v; });
    if (it == groups.end() || it->group_id != id) return std::nullopt;
    return static_cast<std::size_t>(it - groups.begin());
  }

  // Self links are implicit: every concept links to its twin.
  std::vector<std::pair<ConceptIndex, ConceptIndex>> self_links() const {
    std::vector<std::pair<ConceptIndex, ConceptIndex>> out;
    for (ConceptIndex i = 0; i < concepts.size(); ++i) out.emplace_back(i, i);
    return out;
  }

  friend bool operator==(const LogicNet&, const LogicNet&) = default;
};

struct GroupSpec {
  GroupId id = 0;
  std::vector<std::string> members;
};

struct RelationSpec {
  std::string from;
  std::string to;
  double weight = 1.0;
};

struct LogicSpec {
  std::vector<std::string> concepts;
  std::vector<RelationSpec> relations;
  std::vector<GroupSpec> groups;
  std::vector<std::pair<GroupId, GroupId>> inhibitors;
};

inline LogicNet build_logic_net(const LogicSpec& spec) {
  LogicNet net;
  for (const auto& c : spec.concepts) {
    auto label = trim(c);
    if (label.empty()) throw Error(Errc::empty_label, "empty concept label");
    if (net.find_concept(label)) throw Error(Errc::invalid_argument, "duplicate concept '" + label + "'");
    net.concepts.push_back(label);
  }
  for (const auto& r : spec.relations) {
    if (!(r.weight > 0.0)) throw Error(Errc::invalid_argument, "relation weight must be positive");
    auto from = net.concept_at(r.from);
    auto to = net.concept_at(r.to);
    if (from == to) continue;  // already covered by the self link
    net.relation_links[{from, to}] = r.weight;
  }

  std::map<std::string, GroupId> seen_paths;
  for (const auto& g : spec.groups) {
    if (g.members.empty()) throw Error(Errc::invalid_argument, "group " + std::to_string(g.id) + " is empty");
    if (net.group_index(g.id)) {
      throw Error(Errc::invalid_argument, "duplicate group id " + std::to_string(g.id));
    }
    Group group;
    group.group_id = g.id;
    for (const auto& m : g.members) group.members.push_back(net.concept_at(m));
    std::sort(group.members.begin(), group.members.end());
    group.members.erase(std::unique(group.members.begin(), group.members.end()), group.members.end());
    group.path_signature = unique_path(group);
    auto [it, fresh] = seen_paths.emplace(group.path_signature, g.id);
    if (!fresh) {
      throw Error(Errc::signature_collision, "group " + std::to_string(g.id) + " repeats the path of group " +
                                                 std::to_string(it->second));
    }
    net.groups.push_back(std::move(group));
    std::sort(net.groups.begin(), net.groups.end(),
              [](const Group& a, const Group& b) { return a.group_id < b.group_id; });
  }
  for (auto [a, b] : spec.inhibitors) {
    if (!net.group_index(a) || !net.group_index(b)) {
      throw Error(Errc::unknown_group, "inhibitor references unknown group");
    }
    if (a == b) throw Error(Errc::invalid_argument, "inhibitor must join two distinct groups");
    net.inhibitors.insert(std::minmax(a, b));
  }
  return net;
}

enum class Outcome { settled, oscillation, step_limit };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::settled: return "settled";
    case Outcome::oscillation: return "oscillation";
    case Outcome::step_limit: return "step_limit";
  }
  return "unknown";
}

struct PropagationFrame {
  int step = 0;
  std::vector<bool> active_a;
  std::vector<bool> active_b;
  std::vector<bool> group_active;  // by group index
  std::vector<GroupId> suppressed;

  bool same_activity(const PropagationFrame& o) const {
    return active_a == o.active_a && active_b == o.active_b && group_active == o.group_active;
  }

  friend bool operator==(const PropagationFrame&, const PropagationFrame&) = default;
};

struct PropagationState {
  int step = 0;
  std::vector<bool> stimulus;
  std::vector<bool> active_a;
  std::vector<bool> active_b;
  std::vector<bool> group_active;
  std::vector<GroupId> suppressed;
  Outcome outcome = Outcome::settled;
  std::vector<PropagationFrame> history;

  std::vector<GroupId> active_groups(const LogicNet& net) const {
    std::vector<GroupId> out;
    for (std::size_t g = 0; g < group_active.size(); ++g) {
      if (group_active[g]) out.push_back(net.groups[g].group_id);
    }
    return out;
  }

  PropagationFrame frame() const { return {step, active_a, active_b, group_active, suppressed}; }
};

namespace detail {

inline bool member_active(const PropagationState& s, ConceptIndex m) { return s.active_a[m] || s.active_b[m]; }

inline bool group_on(const PropagationState& s, const Group& g) {
  return std::all_of(g.members.begin(), g.members.end(), [&](ConceptIndex m) { return member_active(s, m); });
}

// Active members (either layer) plus one per directly stimulated member.
inline int group_strength(const PropagationState& s, const Group& g) {
  int total = 0;
  for (auto m : g.members) total += int(member_active(s, m)) + int(s.stimulus[m]);
  return total;
}

}  // namespace detail

// For each inhibitor pair (ascending ids) with both groups active, the
// stronger group survives (ties: smaller id). The loser is suppressed and
// its members go quiet unless another surviving active group holds them.
inline PropagationState& resolve_inhibition(PropagationState& state, const LogicNet& net) {
  const auto n_groups = net.groups.size();
  std::vector<bool> suppressed(n_groups, false);
  auto active = [&](std::size_t g) { return !suppressed[g] && detail::group_on(state, net.groups[g]); };

  for (auto [first, second] : net.inhibitors) {
    auto gi = *net.group_index(first);
    auto hi = *net.group_index(second);
    if (!active(gi) || !active(hi)) continue;
    int sg = detail::group_strength(state, net.groups[gi]);
    int sh = detail::group_strength(state, net.groups[hi]);
    auto loser = sh > sg ? gi : hi;
    suppressed[loser] = true;
    std::vector<bool> held(net.size(), false);
    for (std::size_t g = 0; g < n_groups; ++g) {
      if (g == loser || !active(g)) continue;
      for (auto m : net.groups[g].members) held[m] = true;
    }
    for (auto m : net.groups[loser].members) {
      if (!held[m]) state.active_a[m] = state.active_b[m] = false;
    }
  }

  state.group_active.assign(n_groups, false);
  state.suppressed.clear();
  for (std::size_t g = 0; g < n_groups; ++g) {
    state.group_active[g] = active(g);
    if (suppressed[g]) state.suppressed.push_back(net.groups[g].group_id);
  }
  return state;
}

inline constexpr int kDefaultMaxSteps = 100;

inline PropagationState propagate(const LogicNet& net, const std::vector<ConceptIndex>& stimulus,
                                  int max_steps = kDefaultMaxSteps) {
  if (max_steps < 1) throw Error(Errc::invalid_argument, "max steps must be >= 1");
  const auto n = net.size();
  PropagationState state;
  state.stimulus.assign(n, false);
  for (auto s : stimulus) {
    if (s >= n) throw Error(Errc::unknown_symbol, "stimulus concept " + std::to_string(s) + " not in net");
    state.stimulus[s] = true;
  }
  state.active_a = state.stimulus;
  state.active_b.assign(n, false);
  resolve_inhibition(state, net);
  state.history.push_back(state.frame());

  std::vector<std::vector<ConceptIndex>> fan_out(n);
  for (const auto& [link, _] : net.relation_links) fan_out[link.first].push_back(link.second);

  for (int t = 1; t <= max_steps; ++t) {
    PropagationState next = state;
    next.step = t;
    next.history.clear();
    for (ConceptIndex i = 0; i < n; ++i) next.active_a[i] = state.stimulus[i] || state.active_b[i];
    next.active_b.assign(n, false);
    for (ConceptIndex i = 0; i < n; ++i) {
      if (!state.active_a[i]) continue;
      next.active_b[i] = true;
      for (auto j : fan_out[i]) next.active_b[j] = true;
    }
    resolve_inhibition(next, net);
    auto frame = next.frame();

    if (frame.same_activity(state.history.back())) {
      state.outcome = Outcome::settled;
      return state;
    }
    bool repeats = std::any_of(state.history.begin(), state.history.end(),
                               [&](const PropagationFrame& f) { return f.same_activity(frame); });
    next.history = std::move(state.history);
    next.history.push_back(std::move(frame));
    state = std::move(next);
    if (repeats) {
      state.outcome = Outcome::oscillation;
      return state;
    }
  }
  state.outcome = Outcome::step_limit;
  return state;
}

inline PropagationState propagate(const LogicNet& net, const std::vector<std::string>& stimulus,
                                  int max_steps = kDefaultMaxSteps) {
  std::vector<ConceptIndex> ids;
  for (const auto& s : stimulus) ids.push_back(net.concept_at(s));
  return propagate(net, ids, max_steps);
}

struct Schedule {
  std::vector<GroupId> groups;
};

struct ScheduleStep {
  GroupId group = 0;
  bool won = false;
  std::vector<GroupId> winners;
  Outcome outcome = Outcome::settled;
  int steps = 0;

  friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

// Linear executor: each entry stimulates its group's members (plus any extra
// stimulus given for that position) and propagates from a clean state.
inline std::vector<ScheduleStep> run_schedule(const LogicNet& net, const Schedule& schedule,
                                              const std::vector<std::vector<ConceptIndex>>& extra = {},
                                              int max_steps = kDefaultMaxSteps) {
  if (schedule.groups.empty()) throw Error(Errc::invalid_argument, "schedule is empty");
  for (auto g : schedule.groups) {
    if (!net.group_index(g)) throw Error(Errc::unknown_group, "schedule names unknown group " + std::to_string(g));
  }
  std::vector<ScheduleStep> trace;
  for (std::size_t i = 0; i < schedule.groups.size(); ++i) {
    const auto gid = schedule.groups[i];
    const auto& group = net.groups[*net.group_index(gid)];
    std::vector<ConceptIndex> stimulus = group.members;
    if (i < extra.size()) stimulus.insert(stimulus.end(), extra[i].begin(), extra[i].end());
    auto state = propagate(net, stimulus, max_steps);
    ScheduleStep step;
    step.group = gid;
    step.won = state.group_active[*net.group_index(gid)];
    step.winners = state.active_groups(net);
    step.outcome = state.outcome;
    step.steps = state.step;
    trace.push_back(std::move(step));
  }
  return trace;
}

}  // namespace unitwork
