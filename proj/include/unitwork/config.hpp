#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "unitwork/error.hpp"
#include "unitwork/logic_layer.hpp"

namespace unitwork {

enum class Ordering { corpus, reverse };

struct BuildConfig {
  std::uint64_t min_support = 1;    // >= 1
  double theta = 0.5;               // (0, 1]
  int rounds = 2;                   // >= 1
  double boost = 1.0;               // > 0
  int max_steps = kDefaultMaxSteps; // >= 1
  std::uint64_t merge_threshold = 2;  // >= 1
  std::uint64_t induction_k = 2;      // >= 1
  Ordering ordering = Ordering::corpus;

  void validate() const {
    auto fail = [](const std::string& what) { throw Error(Errc::invalid_argument, "config: " + what); };
    if (min_support < 1) fail("min_support must be >= 1");
    if (!(theta > 0.0 && theta <= 1.0)) fail("theta must lie in (0, 1]");
    if (rounds < 1) fail("rounds must be >= 1");
    if (!(boost > 0.0)) fail("boost must be > 0");
    if (max_steps < 1) fail("max_steps must be >= 1");
    if (merge_threshold < 1) fail("merge_threshold must be >= 1");
    if (induction_k < 1) fail("induction_k must be >= 1");
  }

  friend bool operator==(const BuildConfig&, const BuildConfig&) = default;
};

inline const char* to_string(Ordering o) { return o == Ordering::reverse ? "reverse" : "corpus"; }

inline nlohmann::json to_json(const BuildConfig& c) {
  return {{"min_support", c.min_support}, {"theta", c.theta},
          {"rounds", c.rounds},           {"boost", c.boost},
          {"max_steps", c.max_steps},     {"merge_threshold", c.merge_threshold},
          {"induction_k", c.induction_k}, {"ordering", to_string(c.ordering)}};
}

// Missing keys keep their defaults; unknown keys and out-of-range values are
// rejected.
inline BuildConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::invalid_argument, "config must be a JSON object");
  BuildConfig c;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "min_support") {
        c.min_support = value.get<std::uint64_t>();
      } else if (key == "theta") {
        c.theta = value.get<double>();
      } else if (key == "rounds") {
        c.rounds = value.get<int>();
      } else if (key == "boost") {
        c.boost = value.get<double>();
      } else if (key == "max_steps") {
        c.max_steps = value.get<int>();
      } else if (key == "merge_threshold") {
        c.merge_threshold = value.get<std::uint64_t>();
      } else if (key == "induction_k") {
        c.induction_k = value.get<std::uint64_t>();
      } else if (key == "ordering") {
        auto v = value.get<std::string>();
        if (v == "corpus") {
          c.ordering = Ordering::corpus;
        } else if (v == "reverse") {
          c.ordering = Ordering::reverse;
        } else {
          throw Error(Errc::invalid_argument, "config: unknown ordering '" + v + "'");
        }
      } else {
        throw Error(Errc::invalid_argument, "config: unknown key '" + key + "'");
      }
      if ((key == "min_support" || key == "merge_threshold" || key == "induction_k") &&
          !value.is_number_unsigned()) {
        throw Error(Errc::invalid_argument, "config: " + key + " must be a positive integer");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace unitwork
