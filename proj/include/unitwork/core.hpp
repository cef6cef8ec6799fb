#pragma once
// Symbol interning, event ingestion and the Hebbian full-linking store.
//
// Everything above this layer speaks in SymbolId values handed out by a
// SymbolTable. Ids are dense and assigned in first-seen order so a corpus
// always interns to the same table.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unitwork/error.hpp"

namespace unitwork {

struct SymbolId {
  std::uint32_t value = 0;

  friend auto operator<=>(SymbolId, SymbolId) = default;
};

// Sorted, duplicate-free list of symbols.
using SymbolSet = std::vector<SymbolId>;

inline SymbolSet make_set(std::vector<SymbolId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// True when every element of `part` is in `whole`. Both must be sorted.
template <typename T>
bool is_subset(const std::vector<T>& part, const std::vector<T>& whole) {
  return std::includes(whole.begin(), whole.end(), part.begin(), part.end());
}

inline std::string trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(ws);
  return std::string(text.substr(first, last - first + 1));
}

class SymbolTable {
 public:
  SymbolId intern(std::string_view label) {
    std::string key = trim(label);
    if (key.empty()) throw Error(Errc::empty_label, "symbol label is empty");
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    SymbolId id{static_cast<std::uint32_t>(labels_.size())};
    labels_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
  }

  std::optional<SymbolId> find(std::string_view label) const {
    auto it = index_.find(trim(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SymbolId at(std::string_view label) const {
    if (auto id = find(label)) return *id;
    throw Error(Errc::unknown_symbol, "unknown symbol '" + std::string(label) + "'");
  }

  const std::string& label(SymbolId id) const {
    if (id.value >= labels_.size()) {
      throw Error(Errc::unknown_symbol, "symbol id " + std::to_string(id.value) + " out of range");
    }
    return labels_[id.value];
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, SymbolId> index_;
};

inline SymbolId intern_symbol(SymbolTable& table, std::string_view label) {
  return table.intern(label);
}

struct Event {
  std::uint64_t seq = 0;
  SymbolSet actives;
  std::optional<SymbolId> label;

  friend bool operator==(const Event&, const Event&) = default;
};

// Parses one JSON Lines record: {"seq": 1, "symbols": [...], "label": "..."}.
// `previous_seq` is the seq of the preceding event in the same corpus.
inline Event ingest_event(std::string_view record, SymbolTable& table,
                          std::optional<std::uint64_t> previous_seq = std::nullopt) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(record);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::malformed_record, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::malformed_record, "record is not a JSON object");

  auto seq_it = doc.find("seq");
  // Non-negative integer literals parse as unsigned.
  if (seq_it == doc.end() || !seq_it->is_number_unsigned()) {
    throw Error(Errc::malformed_record, "missing or invalid non-negative integer 'seq'");
  }
  auto syms_it = doc.find("symbols");
  if (syms_it == doc.end() || !syms_it->is_array()) {
    throw Error(Errc::malformed_record, "missing 'symbols' array");
  }
  for (const auto& s : *syms_it) {
    if (!s.is_string()) throw Error(Errc::malformed_record, "'symbols' must contain strings");
  }
  auto label_it = doc.find("label");
  if (label_it != doc.end() && !label_it->is_string() && !label_it->is_null()) {
    throw Error(Errc::malformed_record, "'label' must be a string");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "seq" && key != "symbols" && key != "label") {
      throw Error(Errc::malformed_record, "unexpected field '" + key + "'");
    }
  }
  if (syms_it->empty()) throw Error(Errc::empty_event, "event has no symbols");

  Event event;
  event.seq = seq_it->get<std::uint64_t>();
  if (previous_seq && event.seq <= *previous_seq) {
    throw Error(Errc::non_monotone_seq, "seq " + std::to_string(event.seq) +
                                            " does not follow " + std::to_string(*previous_seq));
  }
  std::vector<SymbolId> ids;
  ids.reserve(syms_it->size());
  for (const auto& s : *syms_it) ids.push_back(table.intern(s.get<std::string>()));
  event.actives = make_set(std::move(ids));
  if (label_it != doc.end() && label_it->is_string()) {
    event.label = table.intern(label_it->get<std::string>());
  }
  return event;
}

struct Corpus {
  SymbolTable symbols;
  std::vector<Event> events;
};

// Reads a JSON Lines corpus. Blank lines are skipped; any other failure is
// rethrown with the 1-based line number prepended.
inline Corpus load_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::uint64_t> previous;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      corpus.events.push_back(ingest_event(line, corpus.symbols, previous));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
    previous = corpus.events.back().seq;
  }
  return corpus;
}

using SymbolPair = std::pair<SymbolId, SymbolId>;

inline SymbolPair ordered_pair(SymbolId a, SymbolId b) {
  return a < b ? SymbolPair{a, b} : SymbolPair{b, a};
}

// Symmetric co-occurrence weights. Only pairs with count >= 1 are stored.
class LinkStore {
 public:
  std::uint64_t weight(SymbolId a, SymbolId b) const {
    if (a == b) return 0;
    auto it = weights_.find(ordered_pair(a, b));
    return it == weights_.end() ? 0 : it->second;
  }

  void add(SymbolId a, SymbolId b, std::uint64_t amount = 1) {
    if (a == b || amount == 0) return;
    weights_[ordered_pair(a, b)] += amount;
  }

  std::uint64_t total_mass() const {
    std::uint64_t total = 0;
    for (const auto& [_, w] : weights_) total += w;
    return total;
  }

  const std::map<SymbolPair, std::uint64_t>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

  friend bool operator==(const LinkStore&, const LinkStore&) = default;

 private:
  std::map<SymbolPair, std::uint64_t> weights_;
};

// Full linking: every unordered pair of co-active symbols gains one unit.
inline LinkStore& hebbian_link(LinkStore& store, const Event& event) {
  if (event.actives.empty()) throw Error(Errc::empty_event, "event has no symbols");
  const auto& a = event.actives;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) store.add(a[i], a[j]);
  }
  return store;
}

inline LinkStore link_corpus(const std::vector<Event>& events) {
  LinkStore store;
  for (const auto& e : events) hebbian_link(store, e);
  return store;
}

}  // namespace unitwork
