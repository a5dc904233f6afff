#pragma once

// Per-frame posecodes: the geometric measurements, the default code
// registry, the categorical threshold tables and the tolerance-band
// classifier.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motiontext/error.hpp"
#include "motiontext/motion.hpp"

namespace motiontext {

enum class PosecodeFamily : std::uint8_t {
  Angle,
  Distance,
  RelPosX,
  RelPosY,
  RelPosZ,
  PitchRoll,
  GroundContact,
  OrientX,
  OrientY,
  OrientZ,
  TranslX,
  TranslY,
  TranslZ,
};

inline constexpr std::size_t kFamilyCount = 13;

inline constexpr std::array<PosecodeFamily, kFamilyCount> kAllFamilies = {
    PosecodeFamily::Angle,    PosecodeFamily::Distance,  PosecodeFamily::RelPosX,
    PosecodeFamily::RelPosY,  PosecodeFamily::RelPosZ,   PosecodeFamily::PitchRoll,
    PosecodeFamily::GroundContact, PosecodeFamily::OrientX, PosecodeFamily::OrientY,
    PosecodeFamily::OrientZ,  PosecodeFamily::TranslX,   PosecodeFamily::TranslY,
    PosecodeFamily::TranslZ,
};

constexpr std::size_t index_of(PosecodeFamily f) noexcept { return static_cast<std::size_t>(f); }

constexpr std::string_view family_key(PosecodeFamily f) noexcept {
  constexpr std::array<std::string_view, kFamilyCount> keys = {
      "angle",    "distance", "relpos_x", "relpos_y", "relpos_z", "pitch_roll", "ground_contact",
      "orient_x", "orient_y", "orient_z", "transl_x", "transl_y", "transl_z"};
  return keys[index_of(f)];
}

inline std::optional<PosecodeFamily> family_from_key(std::string_view key) {
  for (auto f : kAllFamilies) {
    if (family_key(f) == key) return f;
  }
  return std::nullopt;
}

constexpr bool is_angular(PosecodeFamily f) noexcept {
  switch (f) {
    case PosecodeFamily::Angle:
    case PosecodeFamily::PitchRoll:
    case PosecodeFamily::OrientX:
    case PosecodeFamily::OrientY:
    case PosecodeFamily::OrientZ:
      return true;
    default:
      return false;
  }
}

constexpr std::string_view unit_of(PosecodeFamily f) noexcept { return is_angular(f) ? "deg" : "m"; }

constexpr bool is_root_relative(PosecodeFamily f) noexcept {
  return index_of(f) >= index_of(PosecodeFamily::OrientX);
}

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

constexpr char axis_char(Axis a) noexcept { return "xyz"[static_cast<int>(a)]; }

constexpr Axis axis_of(PosecodeFamily f) noexcept {
  switch (f) {
    case PosecodeFamily::RelPosX:
    case PosecodeFamily::OrientX:
    case PosecodeFamily::TranslX:
      return Axis::X;
    case PosecodeFamily::RelPosZ:
    case PosecodeFamily::OrientZ:
    case PosecodeFamily::TranslZ:
      return Axis::Z;
    default:
      return Axis::Y;
  }
}

struct PosecodeDef {
  PosecodeFamily family;
  std::vector<JointId> joints;  // 3 for angle, 2 for pairs, 1 for ground contact, 0 for root codes
  std::string label;
};

namespace detail {

inline std::string pair_label(JointId a, JointId b) {
  return std::string(joint_label(a)) + " vs " + std::string(joint_label(b));
}

inline std::vector<PosecodeDef> build_default_registry() {
  using J = JointId;
  using F = PosecodeFamily;
  std::vector<PosecodeDef> reg;

  const std::array<std::array<J, 3>, 4> angles = {{{J::LHip, J::LKnee, J::LAnkle},
                                                   {J::RHip, J::RKnee, J::RAnkle},
                                                   {J::LShoulder, J::LElbow, J::LWrist},
                                                   {J::RShoulder, J::RElbow, J::RWrist}}};
  for (const auto& t : angles) {
    reg.push_back({F::Angle, {t[0], t[1], t[2]}, std::string(joint_label(t[1])) + " angle"});
  }

  const std::array<std::pair<J, J>, 22> distances = {{
      {J::LElbow, J::RElbow}, {J::LHand, J::RHand},     {J::LKnee, J::RKnee},
      {J::LFoot, J::RFoot},   {J::LHand, J::LShoulder}, {J::LHand, J::RShoulder},
      {J::RHand, J::LShoulder}, {J::RHand, J::RShoulder}, {J::LHand, J::RElbow},
      {J::RHand, J::LElbow},  {J::LHand, J::LKnee},     {J::LHand, J::RKnee},
      {J::RHand, J::LKnee},   {J::RHand, J::RKnee},     {J::LHand, J::LFoot},
      {J::LHand, J::RFoot},   {J::RHand, J::LFoot},     {J::RHand, J::RFoot},
      {J::LHand, J::LAnkle},  {J::LHand, J::RAnkle},    {J::RHand, J::LAnkle},
      {J::RHand, J::RAnkle},
  }};
  for (const auto& [a, b] : distances) {
    reg.push_back({F::Distance, {a, b}, pair_label(a, b) + " distance"});
  }

  struct RelPosRow {
    J a, b;
    std::string_view axes;
  };
  const std::array<RelPosRow, 22> relpos = {{
      {J::LShoulder, J::RShoulder, "yz"}, {J::LElbow, J::RElbow, "yz"},
      {J::LHand, J::RHand, "xyz"},        {J::Neck, J::Pelvis, "xz"},
      {J::LAnkle, J::Neck, "y"},          {J::RAnkle, J::Neck, "y"},
      {J::LHip, J::LKnee, "y"},           {J::RHip, J::RKnee, "y"},
      {J::LHand, J::LShoulder, "xy"},     {J::RHand, J::RShoulder, "xy"},
      {J::LFoot, J::LHip, "xy"},          {J::RFoot, J::RHip, "xy"},
      {J::LWrist, J::Neck, "y"},          {J::RWrist, J::Neck, "y"},
      {J::LHand, J::LHip, "y"},           {J::RHand, J::RHip, "y"},
      {J::LHand, J::Torso, "z"},          {J::RHand, J::Torso, "z"},
      {J::LFoot, J::Torso, "z"},          {J::RFoot, J::Torso, "z"},
      {J::LKnee, J::RKnee, "yz"},         {J::LFoot, J::RFoot, "xyz"},
  }};
  for (const auto& row : relpos) {
    for (char ax : row.axes) {
      const F fam = ax == 'x' ? F::RelPosX : ax == 'y' ? F::RelPosY : F::RelPosZ;
      reg.push_back({fam, {row.a, row.b}, pair_label(row.a, row.b) + " " + ax + "-position"});
    }
  }

  const std::array<std::pair<J, J>, 13> bones = {{
      {J::LHip, J::LKnee},       {J::RHip, J::RKnee},       {J::LKnee, J::LAnkle},
      {J::RKnee, J::RAnkle},     {J::LShoulder, J::LElbow}, {J::RShoulder, J::RElbow},
      {J::LElbow, J::LWrist},    {J::RElbow, J::RWrist},    {J::Pelvis, J::LShoulder},
      {J::Pelvis, J::RShoulder}, {J::Pelvis, J::Neck},      {J::LHand, J::RHand},
      {J::LFoot, J::RFoot},
  }};
  for (const auto& [a, b] : bones) {
    reg.push_back({F::PitchRoll, {a, b}, pair_label(a, b) + " pitch-roll"});
  }

  for (J j : {J::LKnee, J::RKnee, J::LFoot, J::RFoot, J::LHand, J::RHand}) {
    reg.push_back({F::GroundContact, {j}, std::string(joint_label(j)) + " ground-contact"});
  }

  for (F f : {F::OrientX, F::OrientY, F::OrientZ}) {
    reg.push_back({f, {}, std::string("root orientation ") + axis_char(axis_of(f))});
  }
  for (F f : {F::TranslX, F::TranslY, F::TranslZ}) {
    reg.push_back({f, {}, std::string("root translation ") + axis_char(axis_of(f))});
  }
  return reg;
}

}  // namespace detail

/// The full posecode registry, in a fixed order that also orders all outputs.
inline const std::vector<PosecodeDef>& default_registry() {
  static const std::vector<PosecodeDef> registry = detail::build_default_registry();
  return registry;
}

using CategoryIndex = std::int16_t;
inline constexpr CategoryIndex kAmbiguous = -1;
inline constexpr std::string_view kAmbiguousLabel = "ambiguous";

/// A label is ignored-class when it is "ignored" or ends in "-ignored".
inline bool is_ignored_label(std::string_view label) noexcept {
  constexpr std::string_view suffix = "-ignored";
  return label == "ignored" ||
         (label.size() > suffix.size() && label.substr(label.size() - suffix.size()) == suffix);
}

/// Ordered bins for one family. Bin i covers (boundaries[i-1], boundaries[i]].
struct FamilyThresholds {
  std::vector<std::string> categories;
  std::vector<double> boundaries;
  double tolerance = 0.0;

  std::size_t size() const noexcept { return categories.size(); }

  const std::string& label(CategoryIndex c) const {
    static const std::string ambiguous(kAmbiguousLabel);
    if (c == kAmbiguous) return ambiguous;
    return categories.at(static_cast<std::size_t>(c));
  }

  std::optional<CategoryIndex> find(std::string_view label) const {
    for (std::size_t i = 0; i < categories.size(); ++i) {
      if (categories[i] == label) return static_cast<CategoryIndex>(i);
    }
    return std::nullopt;
  }

  bool eligible(CategoryIndex c) const {
    return c != kAmbiguous && !is_ignored_label(categories.at(static_cast<std::size_t>(c)));
  }

  void validate(std::string_view family) const {
    const std::string f(family);
    if (categories.size() != boundaries.size() + 1) {
      throw ValidationError("thresholds '" + f + "': need exactly one more category than boundaries");
    }
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
      throw ValidationError("thresholds '" + f + "': tolerance must be positive and finite");
    }
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      if (!std::isfinite(boundaries[i])) {
        throw ValidationError("thresholds '" + f + "': boundaries must be finite");
      }
      if (i > 0 && !(boundaries[i] > boundaries[i - 1])) {
        throw ValidationError("thresholds '" + f + "': boundaries must be strictly increasing");
      }
    }
    if (categories.size() > static_cast<std::size_t>(std::numeric_limits<CategoryIndex>::max())) {
      throw ValidationError("thresholds '" + f + "': too many categories");
    }
  }
};

class ThresholdTable {
 public:
  FamilyThresholds& operator[](PosecodeFamily f) noexcept { return families_[index_of(f)]; }
  const FamilyThresholds& operator[](PosecodeFamily f) const noexcept {
    return families_[index_of(f)];
  }

  void validate() const {
    for (auto f : kAllFamilies) (*this)[f].validate(family_key(f));
  }

  static const ThresholdTable& defaults() {
    static const ThresholdTable table = [] {
      using F = PosecodeFamily;
      ThresholdTable t;
      t[F::Angle] = {{"completely bent", "almost completely bent", "bent at right angle",
                      "partially bent", "slightly bent", "straight"},
                     {45, 75, 105, 135, 160},
                     5.0};
      t[F::Distance] = {{"close", "shoulder width apart", "spread", "wide"}, {0.20, 0.40, 0.80}, 0.05};
      t[F::RelPosX] = {{"at the right of", "x-ignored", "at the left of"}, {-0.15, 0.15}, 0.05};
      t[F::RelPosY] = {{"below", "y-ignored", "above"}, {-0.15, 0.15}, 0.05};
      t[F::RelPosZ] = {{"behind", "z-ignored", "in front of"}, {-0.15, 0.15}, 0.05};
      t[F::PitchRoll] = {{"vertical", "ignored", "horizontal"}, {10, 80}, 5.0};
      t[F::GroundContact] = {{"on the ground", "ground-ignored"}, {0.10}, 0.05};
      t[F::OrientX] = {{"handstand", "lie backward", "lean backward", "orix-ignored", "lean forward",
                        "lie forward", "backflip"},
                       {-120, -80, -30, 30, 80, 120},
                       5.0};
      t[F::OrientY] = {{"turn back from right", "turn clockwise", "slightly turn clockwise",
                        "oriy-ignored", "slightly turn counter-clockwise", "turn counter-clockwise",
                        "turn back from left"},
                       {-150, -80, -30, 30, 80, 150},
                       5.0};
      t[F::OrientZ] = {{"lie on the right", "lean right", "slightly lean right", "oriz-ignored",
                        "slightly lean left", "lean left", "lie on the left"},
                       {-80, -45, -20, 20, 45, 80},
                       5.0};
      t[F::TranslX] = {{"move right", "transx-ignored", "move left"}, {-0.3, 0.3}, 0.05};
      t[F::TranslY] = {{"squat down", "transy-ignored", "jump up"}, {-0.2, 0.2}, 0.05};
      t[F::TranslZ] = {{"go backward", "transz-ignored", "go forward"}, {-0.5, 0.5}, 0.05};
      return t;
    }();
    return table;
  }

 private:
  std::array<FamilyThresholds, kFamilyCount> families_;
};

/// Returns the bin that contains the whole band [value - tol, value + tol],
/// or kAmbiguous when the band straddles a boundary.
inline CategoryIndex classify(double value, const FamilyThresholds& t) noexcept {
  if (!std::isfinite(value)) return kAmbiguous;
  const auto bin = [&](double x) {
    return std::lower_bound(t.boundaries.begin(), t.boundaries.end(), x) - t.boundaries.begin();
  };
  const auto lo = bin(value - t.tolerance);
  const auto hi = bin(value + t.tolerance);
  return lo == hi ? static_cast<CategoryIndex>(lo) : kAmbiguous;
}

inline constexpr double kMinLimbLength = 1e-8;

inline double rad_to_deg(double r) noexcept { return r * (180.0 / std::numbers::pi); }

/// Interior angle at `b` in degrees, in [0, 180].
inline double angle_posecode(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = a - b;
  const Vec3 v = c - b;
  if (u.norm() < kMinLimbLength || v.norm() < kMinLimbLength) {
    throw DegenerateGeometry("angle posecode: zero-length limb");
  }
  return rad_to_deg(std::atan2(u.cross(v).norm(), u.dot(v)));
}

inline double distance_posecode(const Vec3& p, const Vec3& q) noexcept { return (p - q).norm(); }

/// Signed p[axis] - q[axis].
inline double relpos_posecode(const Vec3& p, const Vec3& q, Axis axis) noexcept {
  const int i = static_cast<int>(axis);
  return p[i] - q[i];
}

/// Angle between the bone and the vertical, folded to [0, 90] degrees.
inline double pitchroll_posecode(const Vec3& top, const Vec3& bottom) {
  const Vec3 d = top - bottom;
  if (d.norm() < kMinLimbLength) throw DegenerateGeometry("pitch-roll posecode: zero-length bone");
  return rad_to_deg(std::atan2(std::hypot(d.x(), d.z()), std::abs(d.y())));
}

inline double ground_contact_posecode(const Vec3& p, double ground_y) noexcept { return p.y() - ground_y; }

/// Root rotation split as R = Ry(yaw) * Rz(roll) * Rx(pitch).
///
/// `x` is pitch (positive leans forward), `y` is yaw (positive turns
/// counter-clockwise seen from above) and `z` is roll reported so that
/// positive tilts the body toward its left. All in degrees, (-180, 180].
struct RootEuler {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool gimbal_degenerate = false;  // |roll| within kGimbalMarginDeg of 90

  double operator[](Axis a) const noexcept { return a == Axis::X ? x : a == Axis::Y ? y : z; }
};

inline constexpr double kGimbalMarginDeg = 1.0;

inline RootEuler root_euler(const Rotation& rel_rot) {
  const Eigen::Matrix3d r = rel_rot.normalized().toRotationMatrix();
  const auto wrap = [](double deg) { return deg <= -180.0 ? deg + 360.0 : deg; };
  RootEuler e;
  const double roll = rad_to_deg(std::atan2(r(1, 0), std::hypot(r(1, 1), r(1, 2))));
  e.x = wrap(rad_to_deg(std::atan2(-r(1, 2), r(1, 1))));
  e.y = wrap(rad_to_deg(std::atan2(-r(2, 0), r(0, 0))));
  e.z = wrap(-roll);
  e.gimbal_degenerate = std::abs(roll) > 90.0 - kGimbalMarginDeg;
  return e;
}

inline double orientation_posecode(const Rotation& rel_rot, Axis axis) { return root_euler(rel_rot)[axis]; }

inline double translation_posecode(const Vec3& rel_t, Axis axis) noexcept {
  return rel_t[static_cast<int>(axis)];
}

struct PosecodeState {
  const PosecodeDef* def = nullptr;
  std::size_t frame = 0;
  double value = 0.0;  // NaN when the geometry is degenerate
  CategoryIndex category = kAmbiguous;
  bool eligible = false;
};

enum class GroundMode : std::uint8_t { Zero, Auto };

inline constexpr double kAutoGroundPercentile = 5.0;

/// Ground height for a sequence. Auto mode takes the 5th percentile (linear
/// interpolation) of the per-frame lower foot height.
inline double estimate_ground(const MotionSequence& seq, GroundMode mode) {
  if (mode == GroundMode::Zero) return 0.0;
  std::vector<double> lows(seq.size());
  for (std::size_t f = 0; f < seq.size(); ++f) {
    lows[f] = std::min(seq.joint_unchecked(f, JointId::LFoot).y(),
                       seq.joint_unchecked(f, JointId::RFoot).y());
  }
  std::sort(lows.begin(), lows.end());
  const double pos = kAutoGroundPercentile / 100.0 * static_cast<double>(lows.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return i + 1 < lows.size() ? lows[i] + frac * (lows[i + 1] - lows[i]) : lows[i];
}

namespace detail {

/// Root pose quantities shared by all root-relative codes of one frame.
struct RootContext {
  RootPose pose;
  RootEuler euler;
};

inline RootContext root_context(const MotionSequence& seq, std::size_t frame) {
  RootContext ctx;
  ctx.pose = seq.relative_root(frame);
  ctx.euler = root_euler(ctx.pose.rotation);
  return ctx;
}

struct Measurement {
  double value;
  bool forced_ambiguous;
};

inline Measurement measure(const PosecodeDef& def, const MotionSequence& seq, std::size_t f,
                           const RootContext& root, double ground_y) {
  const auto joint = [&](std::size_t i) { return seq.joint_unchecked(f, def.joints[i]); };
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  switch (def.family) {
    case PosecodeFamily::Angle:
      try {
        return {angle_posecode(joint(0), joint(1), joint(2)), false};
      } catch (const DegenerateGeometry&) {
        return {nan, true};
      }
    case PosecodeFamily::Distance:
      return {distance_posecode(joint(0), joint(1)), false};
    case PosecodeFamily::RelPosX:
    case PosecodeFamily::RelPosY:
    case PosecodeFamily::RelPosZ:
      return {relpos_posecode(joint(0), joint(1), axis_of(def.family)), false};
    case PosecodeFamily::PitchRoll:
      try {
        return {pitchroll_posecode(joint(0), joint(1)), false};
      } catch (const DegenerateGeometry&) {
        return {nan, true};
      }
    case PosecodeFamily::GroundContact:
      return {ground_contact_posecode(joint(0), ground_y), false};
    case PosecodeFamily::OrientX:
    case PosecodeFamily::OrientY:
    case PosecodeFamily::OrientZ:
      return {root.euler[axis_of(def.family)], root.euler.gimbal_degenerate};
    case PosecodeFamily::TranslX:
    case PosecodeFamily::TranslY:
    case PosecodeFamily::TranslZ:
      return {translation_posecode(root.pose.translation, axis_of(def.family)), false};
  }
  return {nan, true};
}

}  // namespace detail

/// One state per registry entry for `frame`, in registry order.
inline std::vector<PosecodeState> extract_frame(const MotionSequence& seq, std::size_t frame,
                                                std::span<const PosecodeDef> registry,
                                                const ThresholdTable& table, double ground_y) {
  if (frame >= seq.size()) throw IndexOutOfRange(frame, seq.size());
  const auto root = detail::root_context(seq, frame);
  std::vector<PosecodeState> out;
  out.reserve(registry.size());
  for (const PosecodeDef& def : registry) {
    const auto& t = table[def.family];
    const auto m = detail::measure(def, seq, frame, root, ground_y);
    PosecodeState s{&def, frame, m.value, m.forced_ambiguous ? kAmbiguous : classify(m.value, t), false};
    s.eligible = t.eligible(s.category);
    out.push_back(s);
  }
  return out;
}

/// Values and categories for every (code, frame), stored code-major.
class FrameStates {
 public:
  FrameStates() = default;
  FrameStates(std::size_t codes, std::size_t frames)
      : codes_(codes), frames_(frames), values_(codes * frames), categories_(codes * frames) {}

  std::size_t codes() const noexcept { return codes_; }
  std::size_t frames() const noexcept { return frames_; }

  double value(std::size_t code, std::size_t f) const { return values_[code * frames_ + f]; }
  CategoryIndex category(std::size_t code, std::size_t f) const {
    return categories_[code * frames_ + f];
  }
  std::span<const CategoryIndex> track(std::size_t code) const {
    return {categories_.data() + code * frames_, frames_};
  }
  std::span<const double> values(std::size_t code) const {
    return {values_.data() + code * frames_, frames_};
  }

  void set(std::size_t code, std::size_t f, double value, CategoryIndex c) {
    values_[code * frames_ + f] = value;
    categories_[code * frames_ + f] = c;
  }

 private:
  std::size_t codes_ = 0;
  std::size_t frames_ = 0;
  std::vector<double> values_;
  std::vector<CategoryIndex> categories_;
};

inline FrameStates extract_all(const MotionSequence& seq, std::span<const PosecodeDef> registry,
                               const ThresholdTable& table, double ground_y) {
  FrameStates states(registry.size(), seq.size());
  for (std::size_t f = 0; f < seq.size(); ++f) {
    const auto root = detail::root_context(seq, f);
    for (std::size_t c = 0; c < registry.size(); ++c) {
      const PosecodeDef& def = registry[c];
      const auto m = detail::measure(def, seq, f, root, ground_y);
      states.set(c, f, m.value, m.forced_ambiguous ? kAmbiguous : classify(m.value, table[def.family]));
    }
  }
  return states;
}

}  // namespace motiontext
