#pragma once

// JSON forms of the tunable configuration: thresholds, aggregation
// constants and the caption skip policy.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "motiontext/captioner.hpp"
#include "motiontext/motion_io.hpp"
#include "motiontext/motioncode.hpp"
#include "motiontext/posecode.hpp"

namespace motiontext {

inline nlohmann::json thresholds_to_json(const ThresholdTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (auto f : kAllFamilies) {
    const auto& ft = t[f];
    j[std::string(family_key(f))] = {{"categories", ft.categories},
                                     {"boundaries", ft.boundaries},
                                     {"tolerance", ft.tolerance},
                                     {"unit", std::string(unit_of(f))}};
  }
  return j;
}

/// Applies per-family overrides on top of `base`. Each family entry may set
/// any of "categories", "boundaries", "tolerance".
inline ThresholdTable thresholds_from_json(const nlohmann::json& j,
                                           const ThresholdTable& base = ThresholdTable::defaults()) {
  if (!j.is_object()) throw ParseError("thresholds must be a JSON object keyed by family");
  ThresholdTable t = base;
  try {
    for (const auto& [key, value] : j.items()) {
      const auto family = family_from_key(key);
      if (!family) throw ParseError("unknown posecode family '" + key + "'");
      auto& ft = t[*family];
      if (value.contains("categories")) ft.categories = value.at("categories").get<std::vector<std::string>>();
      if (value.contains("boundaries")) ft.boundaries = value.at("boundaries").get<std::vector<double>>();
      if (value.contains("tolerance")) ft.tolerance = value.at("tolerance").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("thresholds: ") + e.what());
  }
  t.validate();
  return t;
}

inline nlohmann::json aggregation_to_json(const AggregationConfig& c) {
  return {{"min_run_seconds", c.min_run_seconds},
          {"stationary_min_fraction", c.stationary_min_fraction},
          {"oscillation_min_cycles", c.oscillation_min_cycles},
          {"oscillation_window_seconds", c.oscillation_window_seconds}};
}

inline nlohmann::json policy_to_json(const SkipPolicy& p) {
  return {{"p_timing", p.p_timing},
          {"p_duration", p.p_duration},
          {"max_stationary", p.max_stationary},
          {"max_transitions", p.max_transitions},
          {"max_clauses", p.max_clauses}};
}

inline AggregationConfig aggregation_from_json(const nlohmann::json& j, AggregationConfig c = {}) {
  try {
    c.min_run_seconds = j.value("min_run_seconds", c.min_run_seconds);
    c.stationary_min_fraction = j.value("stationary_min_fraction", c.stationary_min_fraction);
    c.oscillation_min_cycles = j.value("oscillation_min_cycles", c.oscillation_min_cycles);
    c.oscillation_window_seconds = j.value("oscillation_window_seconds", c.oscillation_window_seconds);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("aggregation: ") + e.what());
  }
  c.validate();
  return c;
}

inline SkipPolicy policy_from_json(const nlohmann::json& j, SkipPolicy p = {}) {
  try {
    p.p_timing = j.value("p_timing", p.p_timing);
    p.p_duration = j.value("p_duration", p.p_duration);
    p.max_stationary = j.value("max_stationary", p.max_stationary);
    p.max_transitions = j.value("max_transitions", p.max_transitions);
    p.max_clauses = j.value("max_clauses", p.max_clauses);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("skip_policy: ") + e.what());
  }
  p.validate();
  return p;
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  return detail::parse_json_text(detail::read_file(path), path.string());
}

}  // namespace motiontext
