#pragma once

// Variability bank: phrase-slot key -> ordered surface strings.
//
// Keys are category labels (state phrases), timecode labels, "angle
// swinging", and clause frames "frame:<group>:<kind>". Frames are templates
// over {subject}, {object} and {state}; any other {word} is a verb written in
// third-person singular and conjugated to agree with the subject.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "motiontext/error.hpp"
#include "motiontext/rng.hpp"

namespace motiontext {

class VariabilityBank {
 public:
  using Entries = std::map<std::string, std::vector<std::string>, std::less<>>;

  VariabilityBank() = default;
  explicit VariabilityBank(Entries entries) : entries_(std::move(entries)) {
    for (const auto& [key, phrases] : entries_) {
      if (phrases.empty()) throw ValidationError("bank entry '" + key + "' has no phrases");
    }
  }

  const std::vector<std::string>& at(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw MissingBankEntry(std::string(key));
    return it->second;
  }

  bool contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }
  const Entries& entries() const noexcept { return entries_; }

  /// Overrides or adds entries; keys absent from `other` are kept.
  void merge(const VariabilityBank& other) {
    for (const auto& [key, phrases] : other.entries_) entries_[key] = phrases;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, phrases] : entries_) j[key] = phrases;
    return j;
  }

  /// Keys starting with '#' are comments and skipped.
  static VariabilityBank from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("bank must be a JSON object of string arrays");
    Entries entries;
    for (const auto& [key, value] : j.items()) {
      if (!key.empty() && key.front() == '#') continue;
      if (!value.is_array()) throw ParseError("bank entry '" + key + "' must be an array");
      std::vector<std::string> phrases;
      for (const auto& p : value) {
        if (!p.is_string()) throw ParseError("bank entry '" + key + "' must contain strings");
        phrases.push_back(p.get<std::string>());
      }
      entries.emplace(key, std::move(phrases));
    }
    return VariabilityBank(std::move(entries));
  }

  std::uint64_t checksum() const { return fnv1a64(to_json().dump()); }

  static const VariabilityBank& defaults();

 private:
  Entries entries_;
};

inline const VariabilityBank& VariabilityBank::defaults() {
  static const VariabilityBank bank(Entries{
      // start timing
      {"begin stage",
       {"in the beginning", "initially", "at the start", "at first", "in the initial stages",
        "from the beginning", "in the initial phase", "in the initial stage"}},
      {"early stage", {"early on", "in the early stage", "shortly after the start", "soon after starting"}},
      {"mid stage", {"in the middle", "midway", "halfway through", "in the middle stage"}},
      {"late stage", {"later", "later on", "in the late stage", "towards the end"}},
      {"final stage", {"ultimately", "finally", "at the end", "in the end", "in the final stage"}},
      // duration
      {"for a short time",
       {"for a short time", "shortly", "for a brief period", "for a short duration",
        "for a fleeting moment", "for a short spell", "for a little while", "for a brief interval",
        "for a short stint"}},
      {"for a while", {"for a while", "for some time", "for a period"}},
      {"for a long time", {"for a long time", "for a long period", "for an extended period", "for a long while"}},
      {"for the whole period",
       {"for the whole period", "throughout", "the whole time", "all along", "for the entire motion"}},
      // oscillation
      {"angle swinging",
       {"swinging", "swinging continuously", "continuously bending and extending",
        "constantly bending and extending", "regularly bending and extending",
        "continually bending and extending"}},
      // angle
      {"completely bent", {"completely bent", "fully bent", "fully flexed"}},
      {"almost completely bent", {"almost completely bent", "nearly fully bent", "deeply bent"}},
      {"bent at right angle", {"bent at right angle", "bent at a right angle", "bent at about ninety degrees"}},
      {"partially bent", {"partially bent", "half bent", "partly bent"}},
      {"slightly bent", {"slightly bent", "a little bent", "barely bent"}},
      {"straight", {"straight", "extended", "fully extended", "stretched out"}},
      // distance
      {"close", {"close together", "close to each other", "near each other"}},
      {"shoulder width apart", {"shoulder width apart", "about shoulder width apart"}},
      {"spread", {"spread apart", "apart from each other"}},
      {"wide", {"wide apart", "far apart", "far from each other"}},
      // relative position
      {"at the right of", {"at the right of", "to the right of", "on the right side of"}},
      {"at the left of", {"at the left of", "to the left of", "on the left side of"}},
      {"below", {"below", "lower than", "under"}},
      {"above", {"above", "higher than", "over"}},
      {"behind", {"behind", "in back of"}},
      {"in front of", {"in front of", "ahead of"}},
      // pitch & roll
      {"vertical", {"vertical", "upright"}},
      {"horizontal", {"horizontal", "level"}},
      // ground contact
      {"on the ground", {"on the ground", "on the floor"}},
      // orientation x
      {"handstand", {"doing a handstand", "standing on the hands"}},
      {"lie backward", {"lying backward", "lying on the back"}},
      {"lean backward", {"leaning backward", "tilting backward", "bending backward"}},
      {"lean forward",
       {"leaning forward", "falling forward", "pitching forward", "toppling forward", "tilting forward",
        "lurching forward", "tipping forward", "bowing forward"}},
      {"lie forward", {"lying forward", "lying face down"}},
      {"backflip", {"doing a backflip", "flipping over"}},
      // orientation y
      {"turn back from right", {"turning back from the right", "turning around from the right"}},
      {"turn clockwise", {"turning clockwise", "rotating clockwise"}},
      {"slightly turn clockwise", {"slightly turning clockwise", "turning a little clockwise"}},
      {"slightly turn counter-clockwise",
       {"slightly turning counter-clockwise", "turning a little counter-clockwise"}},
      {"turn counter-clockwise", {"turning counter-clockwise", "rotating counter-clockwise"}},
      {"turn back from left", {"turning back from the left", "turning around from the left"}},
      // orientation z
      {"lie on the right", {"lying on the right side", "lying on the right"}},
      {"lean right", {"leaning right", "leaning to the right", "tilting to the right"}},
      {"slightly lean right", {"slightly leaning right", "leaning a little to the right"}},
      {"slightly lean left", {"slightly leaning left", "leaning a little to the left"}},
      {"lean left", {"leaning left", "leaning to the left", "tilting to the left"}},
      {"lie on the left", {"lying on the left side", "lying on the left"}},
      // translation
      {"move right", {"moving right", "moving to the right", "stepping to the right", "shifting to the right"}},
      {"move left", {"moving left", "moving to the left", "stepping to the left", "shifting to the left"}},
      {"squat down", {"squatting down", "crouching down", "lowering the body"}},
      {"jump up", {"jumping up", "rising up", "moving up"}},
      {"go backward", {"going backward", "stepping back", "moving backward", "walking backward", "backing up"}},
      {"go forward", {"going forward", "moving forward", "stepping forward", "walking forward"}},
      // clause frames
      {"frame:limb:stationary", {"{subject} {is} {state}", "{subject} {stays} {state}", "{subject} {remains} {state}"}},
      {"frame:limb:transition", {"{subject} {becomes} {state}", "{subject} {gets} {state}", "{subject} {ends} up {state}"}},
      {"frame:limb:release", {"{subject} {is} no longer {state}", "{subject} {stops} being {state}"}},
      {"frame:limb:oscillation", {"{subject} {is} {state}", "{subject} {keeps} {state}"}},
      {"frame:contact:stationary", {"{subject} {is} {state}", "{subject} {stays} {state}", "{subject} {rests} {state}"}},
      {"frame:contact:transition", {"{subject} {is} placed {state}", "{subject} {comes} down {state}"}},
      {"frame:contact:release", {"{subject} {leaves} the ground", "{subject} {is} lifted off the ground"}},
      {"frame:pair:stationary", {"{subject} {is} {state}", "{subject} {stays} {state}", "{subject} {remains} {state}"}},
      {"frame:pair:transition", {"{subject} {moves} {state}", "{subject} {becomes} {state}"}},
      {"frame:pair:release", {"{subject} {is} no longer {state}"}},
      {"frame:relpos:stationary", {"{subject} {is} {state} {object}", "{subject} {stays} {state} {object}"}},
      {"frame:relpos:transition", {"{subject} {moves} {state} {object}", "{subject} {goes} {state} {object}"}},
      {"frame:relpos:release", {"{subject} {is} no longer {state} {object}"}},
      {"frame:root:stationary", {"{subject} {keeps} {state}", "{subject} {is} {state}", "{subject} {continues} {state}"}},
      {"frame:root:transition", {"{subject} {starts} {state}", "{subject} {begins} {state}"}},
      {"frame:root:release", {"{subject} {stops} {state}", "{subject} {is} no longer {state}"}},
  });
  return bank;
}

}  // namespace motiontext
