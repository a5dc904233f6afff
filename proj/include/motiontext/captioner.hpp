#pragma once

// Caption realization: motioncode events -> clauses -> caption text.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "motiontext/bank.hpp"
#include "motiontext/error.hpp"
#include "motiontext/motion.hpp"
#include "motiontext/motioncode.hpp"
#include "motiontext/posecode.hpp"
#include "motiontext/rng.hpp"

namespace motiontext {

struct SkipPolicy {
  double p_timing = 0.3;
  double p_duration = 0.3;
  std::size_t max_stationary = 2;   // per body region
  std::size_t max_transitions = 3;  // per body region, oscillations included
  std::size_t max_clauses = 12;

  void validate() const {
    const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(p_timing) || !prob(p_duration)) throw ValidationError("skip probabilities must be in [0, 1]");
    if (max_stationary < 1 || max_transitions < 1 || max_clauses < 1) {
      throw ValidationError("caption caps must be at least 1");
    }
  }
};

/// Anything with `double uniform()` and `std::size_t pick(std::size_t)`.
template <class R>
concept PhraseRng = requires(R r, std::size_t n) {
  { r.uniform() } -> std::convertible_to<double>;
  { r.pick(n) } -> std::convertible_to<std::size_t>;
};

enum class BodyRegion : std::uint8_t { Arms, Legs, Trunk, Global };

inline BodyRegion region_of(const PosecodeDef& def) {
  if (def.joints.empty()) return BodyRegion::Global;
  switch (def.joints.front()) {
    case JointId::LShoulder:
    case JointId::RShoulder:
    case JointId::LElbow:
    case JointId::RElbow:
    case JointId::LWrist:
    case JointId::RWrist:
    case JointId::LHand:
    case JointId::RHand:
      return BodyRegion::Arms;
    case JointId::LHip:
    case JointId::RHip:
    case JointId::LKnee:
    case JointId::RKnee:
    case JointId::LAnkle:
    case JointId::RAnkle:
    case JointId::LFoot:
    case JointId::RFoot:
      return BodyRegion::Legs;
    default:
      return BodyRegion::Trunk;
  }
}

namespace detail {

struct Subject {
  std::string text;
  bool plural = false;
};

inline std::string_view joint_noun(JointId j, bool plural) {
  switch (j) {
    case JointId::Pelvis: return plural ? "pelvises" : "pelvis";
    case JointId::Neck: return plural ? "necks" : "neck";
    case JointId::Torso: return plural ? "torsos" : "torso";
    case JointId::LShoulder: case JointId::RShoulder: return plural ? "shoulders" : "shoulder";
    case JointId::LElbow: case JointId::RElbow: return plural ? "elbows" : "elbow";
    case JointId::LWrist: case JointId::RWrist: return plural ? "wrists" : "wrist";
    case JointId::LHand: case JointId::RHand: return plural ? "hands" : "hand";
    case JointId::LHip: case JointId::RHip: return plural ? "hips" : "hip";
    case JointId::LKnee: case JointId::RKnee: return plural ? "knees" : "knee";
    case JointId::LAnkle: case JointId::RAnkle: return plural ? "ankles" : "ankle";
    case JointId::LFoot: case JointId::RFoot: return plural ? "feet" : "foot";
  }
  return "joint";
}

inline std::string joint_phrase(JointId j) {
  std::string s = "the ";
  if (side_of(j) == Side::Left) s += "left ";
  if (side_of(j) == Side::Right) s += "right ";
  return s + std::string(joint_noun(j, false));
}

/// Bone name (singular, plural) for a pitch-roll pair, without article.
inline std::pair<std::string, std::string> bone_name(JointId a, JointId b) {
  using J = JointId;
  const auto same = [&](J x, J y) { return (a == x && b == y) || (a == mirror(x) && b == mirror(y)); };
  const std::string side = side_of(a) == Side::Left ? "left " : side_of(a) == Side::Right ? "right " : "";
  if (same(J::LHip, J::LKnee)) return {side + "thigh", "thighs"};
  if (same(J::LKnee, J::LAnkle)) return {side + "shin", "shins"};
  if (same(J::LShoulder, J::LElbow)) return {side + "upper arm", "upper arms"};
  if (same(J::LElbow, J::LWrist)) return {side + "forearm", "forearms"};
  if (a == J::Pelvis && (b == J::LShoulder || b == J::RShoulder)) {
    return {std::string(side_of(b) == Side::Left ? "left" : "right") + " side of the torso",
            "sides of the torso"};
  }
  if (a == J::Pelvis && b == J::Neck) return {"torso", "torsos"};
  if (mirror(a) == b) {
    return {"line between the " + std::string(joint_noun(a, true)),
            "lines between the " + std::string(joint_noun(a, true))};
  }
  return {std::string(joint_label(a)) + " to " + std::string(joint_label(b)) + " segment",
          std::string(joint_label(a)) + " to " + std::string(joint_label(b)) + " segments"};
}

inline Subject subject_of(const PosecodeDef& def, bool both) {
  switch (def.family) {
    case PosecodeFamily::Angle:
      if (both) return {"both " + std::string(joint_noun(def.joints[1], true)), true};
      return {joint_phrase(def.joints[1]), false};
    case PosecodeFamily::GroundContact:
      if (both) return {"both " + std::string(joint_noun(def.joints[0], true)), true};
      return {joint_phrase(def.joints[0]), false};
    case PosecodeFamily::PitchRoll: {
      const auto [one, many] = bone_name(def.joints[0], def.joints[1]);
      if (both) return {"both " + many, true};
      return {"the " + one, false};
    }
    case PosecodeFamily::Distance:
      if (mirror(def.joints[0]) == def.joints[1] && def.joints[0] != def.joints[1]) {
        return {"the " + std::string(joint_noun(def.joints[0], true)), true};
      }
      return {joint_phrase(def.joints[0]) + " and " + joint_phrase(def.joints[1]), true};
    case PosecodeFamily::RelPosX:
    case PosecodeFamily::RelPosY:
    case PosecodeFamily::RelPosZ:
      if (both) return {"both " + std::string(joint_noun(def.joints[0], true)), true};
      return {joint_phrase(def.joints[0]), false};
    default:
      return {"the person", false};
  }
}

inline std::string_view frame_group(PosecodeFamily f) {
  switch (f) {
    case PosecodeFamily::Angle:
    case PosecodeFamily::PitchRoll:
      return "limb";
    case PosecodeFamily::GroundContact:
      return "contact";
    case PosecodeFamily::Distance:
      return "pair";
    case PosecodeFamily::RelPosX:
    case PosecodeFamily::RelPosY:
    case PosecodeFamily::RelPosZ:
      return "relpos";
    default:
      return "root";
  }
}

inline std::string plural_verb(std::string_view v) {
  if (v == "is") return "are";
  if (v == "has") return "have";
  if (v == "does") return "do";
  if (v == "goes") return "go";
  const auto ends = [&](std::string_view s) { return v.size() > s.size() && v.substr(v.size() - s.size()) == s; };
  if (ends("ies")) return std::string(v.substr(0, v.size() - 3)) + "y";
  if (ends("ches") || ends("shes") || ends("sses") || ends("xes") || ends("zes")) {
    return std::string(v.substr(0, v.size() - 2));
  }
  if (ends("s")) return std::string(v.substr(0, v.size() - 1));
  return std::string(v);
}

inline std::string render(std::string_view tmpl, const Subject& subject, std::string_view state,
                          std::string_view object) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    const auto close = tmpl.find('}', i);
    if (close == std::string_view::npos) throw ValidationError("unterminated '{' in frame: " + std::string(tmpl));
    const std::string_view token = tmpl.substr(i + 1, close - i - 1);
    if (token == "subject") {
      out += subject.text;
    } else if (token == "state") {
      out += state;
    } else if (token == "object") {
      out += object;
    } else {
      out += subject.plural ? plural_verb(token) : std::string(token);
    }
    i = close + 1;
  }
  return out;
}

/// Slots of one clause. Every slot consumes exactly one draw.
struct ClauseDraws {
  double timing_skip;
  std::size_t timing_pick;
  std::size_t frame_pick;
  std::size_t state_pick;
  double duration_skip;
  std::size_t duration_pick;
};

template <PhraseRng Rng>
ClauseDraws draw_slots(Rng& rng, const VariabilityBank& bank, std::string_view timing_key,
                       std::string_view frame_key, std::string_view state_key,
                       std::string_view duration_key) {
  ClauseDraws d{};
  d.timing_skip = rng.uniform();
  d.timing_pick = rng.pick(bank.at(timing_key).size());
  d.frame_pick = rng.pick(bank.at(frame_key).size());
  d.state_pick = rng.pick(bank.at(state_key).size());
  d.duration_skip = rng.uniform();
  d.duration_pick = rng.pick(bank.at(duration_key).size());
  return d;
}

template <PhraseRng Rng>
std::string realize_with_subject(const MotioncodeEvent& event, const Subject& subject,
                                 const VariabilityBank& bank, Rng& rng, const SkipPolicy& policy) {
  const PosecodeDef& def = *event.def;
  const std::string group(frame_group(def.family));
  std::string kind;
  std::string state_key;
  switch (event.kind) {
    case EventKind::Stationary:
      kind = "stationary";
      state_key = event.to_label;
      break;
    case EventKind::Oscillation:
      kind = "oscillation";
      state_key = "angle swinging";
      break;
    case EventKind::Transition:
      if (is_ignored_label(event.to_label)) {
        kind = "release";
        state_key = event.from_label;
      } else {
        kind = "transition";
        state_key = event.to_label;
      }
      break;
  }
  const std::string frame_key = "frame:" + group + ":" + kind;
  const std::string timing_key(label(event.start_timing));
  const std::string duration_key(label(event.duration));

  const auto d = draw_slots(rng, bank, timing_key, frame_key, state_key, duration_key);
  const bool keep_timing = d.timing_skip >= policy.p_timing;
  const bool keep_duration = d.duration_skip >= policy.p_duration;

  const std::string object = def.joints.size() >= 2 && frame_group(def.family) == "relpos"
                                 ? joint_phrase(def.joints[1])
                                 : std::string();
  const std::string core = render(bank.at(frame_key)[d.frame_pick], subject,
                                  bank.at(state_key)[d.state_pick], object);
  const std::string& timing = bank.at(timing_key)[d.timing_pick];
  const std::string& duration = bank.at(duration_key)[d.duration_pick];

  if (event.duration == DurationBin::WholePeriod) {
    // Start timing is implied by a whole-period duration.
    return keep_duration ? duration + ", " + core : core;
  }
  std::string clause = keep_timing ? timing + ", " + core : core;
  if (keep_duration) clause += " " + duration;
  return clause;
}

inline std::string realize_raw(const MotioncodeEvent& e) {
  std::string s = std::string(label(e.start_timing)) + " | " + e.code_label() + " | " + std::string(label(e.kind)) + " | ";
  if (e.kind == EventKind::Stationary) {
    s += e.to_label;
  } else {
    s += e.from_label + " -> " + e.to_label;
  }
  if (e.kind == EventKind::Oscillation) s += " x" + std::to_string(e.cycle_count);
  return s + " | " + std::string(label(e.duration));
}

}  // namespace detail

/// One clause for one event: optional timing, subject, predicate, optional
/// duration. Throws MissingBankEntry when a needed slot is absent.
template <PhraseRng Rng>
std::string realize(const MotioncodeEvent& event, const VariabilityBank& bank, Rng& rng,
                    const SkipPolicy& policy = {}) {
  return detail::realize_with_subject(event, detail::subject_of(*event.def, false), bank, rng, policy);
}

struct Clause {
  std::vector<std::size_t> events;  // indices into CaptionDocument::codes
  std::string text;
};

struct CaptionDocument {
  std::string sequence_id;
  std::uint64_t seed = 0;
  std::vector<Clause> clauses;
  std::string full_text;
  std::vector<MotioncodeEvent> codes;
};

namespace detail {

/// Mirror-image events (left/right) that can be voiced as "both ...".
inline bool mergeable(const MotioncodeEvent& a, const MotioncodeEvent& b) {
  if (a.kind != b.kind || a.family() != b.family() || a.from_label != b.from_label ||
      a.to_label != b.to_label || a.start_timing != b.start_timing || a.duration != b.duration) {
    return false;
  }
  const auto& ja = a.def->joints;
  const auto& jb = b.def->joints;
  if (ja.empty() || ja.size() != jb.size() || side_of(ja.front()) != Side::Left) return false;
  switch (a.family()) {
    case PosecodeFamily::Angle:
    case PosecodeFamily::PitchRoll:
    case PosecodeFamily::GroundContact:
      break;
    case PosecodeFamily::RelPosY:
    case PosecodeFamily::RelPosZ:
      // "both hands are above the neck" needs a shared, central object.
      if (side_of(ja[1]) != Side::Center) return false;
      break;
    default:
      return false;
  }
  for (std::size_t i = 0; i < ja.size(); ++i) {
    if (mirror(ja[i]) != jb[i]) return false;
  }
  return ja != jb;
}

inline int family_priority(PosecodeFamily f) {
  switch (f) {
    case PosecodeFamily::TranslX:
    case PosecodeFamily::TranslY:
    case PosecodeFamily::TranslZ:
      return 0;
    case PosecodeFamily::OrientX:
    case PosecodeFamily::OrientY:
    case PosecodeFamily::OrientZ:
      return 1;
    case PosecodeFamily::Angle:
      return 2;
    case PosecodeFamily::GroundContact:
      return 3;
    case PosecodeFamily::PitchRoll:
      return 4;
    case PosecodeFamily::RelPosX:
    case PosecodeFamily::RelPosY:
    case PosecodeFamily::RelPosZ:
      return 5;
    case PosecodeFamily::Distance:
      return 6;
  }
  return 7;
}

inline void capitalize_first(std::string& s) {
  if (!s.empty()) s.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(s.front())));
}

}  // namespace detail

/// Builds the caption. Mirror events merge into "both ..." clauses, caps
/// keep the highest-priority clauses, whole-period stationary clauses lead
/// and the rest follow in start order. Each clause draws from its own
/// stream keyed by (seed, first event index), so caps and skip settings
/// never shift another clause's choices.
inline CaptionDocument assemble(std::vector<MotioncodeEvent> events, const VariabilityBank& bank,
                                const SkipPolicy& policy, std::uint64_t seed, bool raw = false) {
  CaptionDocument doc;
  doc.seed = seed;
  doc.codes = std::move(events);
  const auto& ev = doc.codes;

  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> g{i};
    if (!raw) {
      for (std::size_t k = i + 1; k < ev.size(); ++k) {
        if (!used[k] && detail::mergeable(ev[i], ev[k])) {
          used[k] = true;
          g.push_back(k);
          break;
        }
      }
    }
    groups.push_back(std::move(g));
  }

  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto priority = [&](std::size_t gi) {
    const auto& e = ev[groups[gi].front()];
    const int kind_rank = e.kind == EventKind::Stationary ? 1 : 0;
    return std::make_tuple(kind_rank, detail::family_priority(e.family()), e.start_frame, groups[gi].front());
  };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return priority(a) < priority(b); });

  std::array<std::size_t, 4> stationary_used{};
  std::array<std::size_t, 4> dynamic_used{};
  std::vector<std::size_t> selected;
  for (std::size_t gi : order) {
    if (selected.size() >= policy.max_clauses) break;
    const auto& e = ev[groups[gi].front()];
    const auto region = static_cast<std::size_t>(region_of(*e.def));
    auto& counter = e.kind == EventKind::Stationary ? stationary_used : dynamic_used;
    const std::size_t cap = e.kind == EventKind::Stationary ? policy.max_stationary : policy.max_transitions;
    if (counter[region] >= cap) continue;
    ++counter[region];
    selected.push_back(gi);
  }

  const auto whole = [&](std::size_t gi) {
    const auto& e = ev[groups[gi].front()];
    return e.kind == EventKind::Stationary && e.duration == DurationBin::WholePeriod;
  };
  std::stable_sort(selected.begin(), selected.end(), [&](auto a, auto b) {
    const auto& ea = ev[groups[a].front()];
    const auto& eb = ev[groups[b].front()];
    return std::make_tuple(!whole(a), ea.start_frame, groups[a].front()) <
           std::make_tuple(!whole(b), eb.start_frame, groups[b].front());
  });

  for (std::size_t gi : selected) {
    const auto& g = groups[gi];
    const auto& e = ev[g.front()];
    Clause c;
    c.events = g;
    if (raw) {
      c.text = detail::realize_raw(e);
    } else {
      CounterRng rng(splitmix64(seed ^ splitmix64(0x5EEDull + g.front())));
      c.text = detail::realize_with_subject(e, detail::subject_of(*e.def, g.size() > 1), bank, rng, policy);
    }
    doc.clauses.push_back(std::move(c));
  }

  if (raw) {
    for (std::size_t i = 0; i < doc.clauses.size(); ++i) {
      if (i > 0) doc.full_text += '\n';
      doc.full_text += doc.clauses[i].text;
    }
    return doc;
  }

  // Whole-period clauses stand alone; the rest pair up with "then" or,
  // when the second starts before the first ends, "while".
  std::vector<std::string> sentences;
  std::size_t i = 0;
  for (; i < selected.size() && whole(selected[i]); ++i) sentences.push_back(doc.clauses[i].text);
  while (i < selected.size()) {
    std::string s = doc.clauses[i].text;
    if (i + 1 < selected.size()) {
      const auto& a = ev[groups[selected[i]].front()];
      const auto& b = ev[groups[selected[i + 1]].front()];
      s += b.start_frame < a.end_frame ? ", while " : ", then ";
      s += doc.clauses[i + 1].text;
      i += 2;
    } else {
      ++i;
    }
    sentences.push_back(std::move(s));
  }
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    detail::capitalize_first(sentences[k]);
    if (k > 0) doc.full_text += ' ';
    doc.full_text += sentences[k] + ".";
  }
  return doc;
}

/// Everything that shapes a caption besides the motion and the seed.
struct CaptionConfig {
  std::span<const PosecodeDef> registry = default_registry();
  ThresholdTable thresholds = ThresholdTable::defaults();
  AggregationConfig aggregation{};
  SkipPolicy policy{};
  VariabilityBank bank = VariabilityBank::defaults();
  GroundMode ground = GroundMode::Zero;
  bool raw = false;
};

/// Extract, aggregate and assemble. `global_seed` is combined with the
/// sequence id into the document seed.
inline CaptionDocument caption_sequence(const MotionSequence& seq, const CaptionConfig& config,
                                        std::uint64_t global_seed) {
  const double ground = estimate_ground(seq, config.ground);
  const auto states = extract_all(seq, config.registry, config.thresholds, ground);
  auto events = aggregate(states, config.registry, config.thresholds, seq.fps(), config.aggregation);
  auto doc = assemble(std::move(events), config.bank, config.policy, sequence_seed(global_seed, seq.id()),
                      config.raw);
  doc.sequence_id = seq.id();
  return doc;
}

}  // namespace motiontext
