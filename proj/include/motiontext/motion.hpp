#pragma once

// Motion data model: named joints, skeleton layouts that map source joint
// arrays onto them, and the immutable MotionSequence.
//
// Coordinates are right-handed and y-up with the ground nominally at y=0.
// +x points from the body's right to its left and +z points forward.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "motiontext/error.hpp"

namespace motiontext {

using Vec3 = Eigen::Vector3d;
using Rotation = Eigen::Quaterniond;

enum class JointId : std::uint8_t {
  Pelvis,
  Neck,
  Torso,
  LShoulder,
  RShoulder,
  LElbow,
  RElbow,
  LWrist,
  RWrist,
  LHand,
  RHand,
  LHip,
  RHip,
  LKnee,
  RKnee,
  LAnkle,
  RAnkle,
  LFoot,
  RFoot,
};

inline constexpr std::size_t kJointCount = 19;

inline constexpr std::array<JointId, kJointCount> kAllJoints = {
    JointId::Pelvis, JointId::Neck,   JointId::Torso,     JointId::LShoulder, JointId::RShoulder,
    JointId::LElbow, JointId::RElbow, JointId::LWrist,    JointId::RWrist,    JointId::LHand,
    JointId::RHand,  JointId::LHip,   JointId::RHip,      JointId::LKnee,     JointId::RKnee,
    JointId::LAnkle, JointId::RAnkle, JointId::LFoot,     JointId::RFoot,
};

constexpr std::size_t index_of(JointId j) noexcept { return static_cast<std::size_t>(j); }

namespace detail {
struct JointNames {
  std::string_view snake;  // wire/layout-file name
  std::string_view brief;  // label form used in posecode names
};
inline constexpr std::array<JointNames, kJointCount> kJointNames = {{
    {"pelvis", "pelvis"},
    {"neck", "neck"},
    {"torso", "torso"},
    {"left_shoulder", "L-shoulder"},
    {"right_shoulder", "R-shoulder"},
    {"left_elbow", "L-elbow"},
    {"right_elbow", "R-elbow"},
    {"left_wrist", "L-wrist"},
    {"right_wrist", "R-wrist"},
    {"left_hand", "L-hand"},
    {"right_hand", "R-hand"},
    {"left_hip", "L-hip"},
    {"right_hip", "R-hip"},
    {"left_knee", "L-knee"},
    {"right_knee", "R-knee"},
    {"left_ankle", "L-ankle"},
    {"right_ankle", "R-ankle"},
    {"left_foot", "L-foot"},
    {"right_foot", "R-foot"},
}};
}  // namespace detail

constexpr std::string_view joint_name(JointId j) noexcept {
  return detail::kJointNames[index_of(j)].snake;
}

constexpr std::string_view joint_label(JointId j) noexcept {
  return detail::kJointNames[index_of(j)].brief;
}

/// Accepts either the snake_case name ("left_knee") or the label ("L-knee").
inline std::optional<JointId> joint_from_name(std::string_view name) {
  for (JointId j : kAllJoints) {
    if (joint_name(j) == name || joint_label(j) == name) return j;
  }
  return std::nullopt;
}

enum class Side : std::uint8_t { Center, Left, Right };

constexpr Side side_of(JointId j) noexcept {
  switch (j) {
    case JointId::Pelvis:
    case JointId::Neck:
    case JointId::Torso:
      return Side::Center;
    default:
      // Left/right joints alternate starting at LShoulder.
      return (index_of(j) - index_of(JointId::LShoulder)) % 2 == 0 ? Side::Left : Side::Right;
  }
}

/// Left/right counterpart; center joints map to themselves.
constexpr JointId mirror(JointId j) noexcept {
  switch (side_of(j)) {
    case Side::Left:
      return static_cast<JointId>(index_of(j) + 1);
    case Side::Right:
      return static_cast<JointId>(index_of(j) - 1);
    default:
      return j;
  }
}

/// How a named joint is obtained from a source joint array.
struct JointSource {
  enum class Kind : std::uint8_t { Column, Midpoint, Alias };
  Kind kind = Kind::Column;
  std::size_t column = 0;          // Column
  JointId a = JointId::Pelvis;     // Midpoint / Alias
  JointId b = JointId::Pelvis;     // Midpoint

  friend bool operator==(const JointSource&, const JointSource&) = default;
};

class SkeletonLayout {
 public:
  /// Builds a layout from direct column assignments. Unmapped joints are
  /// synthesized where a recipe exists (torso = midpoint of neck and pelvis,
  /// hand = wrist); anything else left unmapped is a ValidationError.
  SkeletonLayout(std::string name, std::size_t column_count,
                 const std::map<JointId, std::size_t>& columns)
      : name_(std::move(name)), column_count_(column_count) {
    std::vector<bool> used(column_count, false);
    std::array<bool, kJointCount> mapped{};
    for (const auto& [joint, column] : columns) {
      if (column >= column_count) {
        throw ValidationError("layout '" + name_ + "': column " + std::to_string(column) +
                              " for " + std::string(joint_name(joint)) + " exceeds joint count " +
                              std::to_string(column_count));
      }
      if (used[column]) {
        throw ValidationError("layout '" + name_ + "': column " + std::to_string(column) +
                              " mapped twice");
      }
      used[column] = true;
      mapped[index_of(joint)] = true;
      sources_[index_of(joint)] = JointSource{JointSource::Kind::Column, column, joint, joint};
    }
    for (JointId j : kAllJoints) {
      if (mapped[index_of(j)]) continue;
      JointSource src;
      if (j == JointId::Torso && mapped[index_of(JointId::Neck)] &&
          mapped[index_of(JointId::Pelvis)]) {
        src = {JointSource::Kind::Midpoint, 0, JointId::Neck, JointId::Pelvis};
      } else if (j == JointId::LHand && mapped[index_of(JointId::LWrist)]) {
        src = {JointSource::Kind::Alias, 0, JointId::LWrist, JointId::LWrist};
      } else if (j == JointId::RHand && mapped[index_of(JointId::RWrist)]) {
        src = {JointSource::Kind::Alias, 0, JointId::RWrist, JointId::RWrist};
      } else {
        throw ValidationError("layout '" + name_ + "' does not provide joint '" +
                              std::string(joint_name(j)) + "'");
      }
      sources_[index_of(j)] = src;
      synthesized_.emplace_back(j, src);
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t column_count() const noexcept { return column_count_; }
  const JointSource& source(JointId j) const noexcept { return sources_[index_of(j)]; }

  std::optional<std::size_t> column(JointId j) const noexcept {
    const auto& s = source(j);
    if (s.kind != JointSource::Kind::Column) return std::nullopt;
    return s.column;
  }

  const std::vector<std::pair<JointId, JointSource>>& synthesized() const noexcept {
    return synthesized_;
  }

  /// SMPL body joint order (24 joints, including the two hand joints).
  static const SkeletonLayout& smpl24() {
    static const SkeletonLayout layout("smpl24", 24,
                                       {{JointId::Pelvis, 0},     {JointId::LHip, 1},
                                        {JointId::RHip, 2},       {JointId::LKnee, 4},
                                        {JointId::RKnee, 5},      {JointId::LAnkle, 7},
                                        {JointId::RAnkle, 8},     {JointId::LFoot, 10},
                                        {JointId::RFoot, 11},     {JointId::Neck, 12},
                                        {JointId::LShoulder, 16}, {JointId::RShoulder, 17},
                                        {JointId::LElbow, 18},    {JointId::RElbow, 19},
                                        {JointId::LWrist, 20},    {JointId::RWrist, 21},
                                        {JointId::LHand, 22},     {JointId::RHand, 23}});
    return layout;
  }

  /// One explicit column per JointId, in JointId order.
  static const SkeletonLayout& named21() {
    static const SkeletonLayout layout = [] {
      std::map<JointId, std::size_t> columns;
      for (JointId j : kAllJoints) columns[j] = index_of(j);
      return SkeletonLayout("named21", kJointCount, columns);
    }();
    return layout;
  }

  static const SkeletonLayout* builtin(std::string_view name) {
    if (name == "smpl24") return &smpl24();
    if (name == "named21") return &named21();
    return nullptr;
  }

 private:
  std::string name_;
  std::size_t column_count_;
  std::array<JointSource, kJointCount> sources_{};
  std::vector<std::pair<JointId, JointSource>> synthesized_;
};

struct Frame {
  std::vector<Vec3> joints;
  Rotation root_orient = Rotation::Identity();
  Vec3 root_transl = Vec3::Zero();
};

/// Root pose of one frame relative to frame 0.
struct RootPose {
  Rotation rotation = Rotation::Identity();
  Vec3 translation = Vec3::Zero();
};

inline bool all_finite(const Vec3& v) noexcept {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

/// Immutable after construction; safe to share across threads.
class MotionSequence {
 public:
  MotionSequence(std::string id, double fps, SkeletonLayout layout, std::vector<Frame> frames)
      : id_(std::move(id)), fps_(fps), layout_(std::move(layout)), frames_(std::move(frames)) {
    if (!std::isfinite(fps_) || fps_ <= 0.0) {
      throw ValidationError("fps must be finite and positive");
    }
    if (frames_.size() < 2) {
      throw ValidationError("a motion needs at least 2 frames, got " +
                            std::to_string(frames_.size()));
    }
    for (std::size_t f = 0; f < frames_.size(); ++f) {
      const Frame& fr = frames_[f];
      const long fl = static_cast<long>(f);
      if (fr.joints.size() != layout_.column_count()) {
        throw ValidationError("expected " + std::to_string(layout_.column_count()) +
                                  " joints for layout '" + layout_.name() + "', got " +
                                  std::to_string(fr.joints.size()),
                              fl);
      }
      for (const Vec3& p : fr.joints) {
        if (!all_finite(p)) throw ValidationError("non-finite joint coordinate", fl);
      }
      if (!all_finite(fr.root_transl)) throw ValidationError("non-finite root translation", fl);
      const double n = fr.root_orient.norm();
      if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
        throw ValidationError("root orientation is not a unit quaternion", fl);
      }
    }
  }

  const std::string& id() const noexcept { return id_; }
  double fps() const noexcept { return fps_; }
  const SkeletonLayout& layout() const noexcept { return layout_; }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  std::size_t size() const noexcept { return frames_.size(); }
  double duration() const noexcept { return static_cast<double>(frames_.size()) / fps_; }

  const Frame& frame(std::size_t f) const {
    if (f >= frames_.size()) throw IndexOutOfRange(f, frames_.size());
    return frames_[f];
  }

  Vec3 joint_position(std::size_t f, JointId j) const {
    return resolve(frame(f), j);
  }

  /// Unchecked variant for hot loops; `f` must be < size().
  Vec3 joint_unchecked(std::size_t f, JointId j) const noexcept {
    return resolve(frames_[f], j);
  }

  RootPose relative_root(std::size_t f) const {
    const Frame& fr = frame(f);
    if (f == 0) return {};
    const Frame& first = frames_.front();
    return {(fr.root_orient * first.root_orient.conjugate()).normalized(),
            fr.root_transl - first.root_transl};
  }

 private:
  Vec3 resolve(const Frame& fr, JointId j) const noexcept {
    const JointSource& s = layout_.source(j);
    switch (s.kind) {
      case JointSource::Kind::Column:
        return fr.joints[s.column];
      case JointSource::Kind::Midpoint:
        return 0.5 * (resolve(fr, s.a) + resolve(fr, s.b));
      case JointSource::Kind::Alias:
        return resolve(fr, s.a);
    }
    return Vec3::Zero();
  }

  std::string id_;
  double fps_;
  SkeletonLayout layout_;
  std::vector<Frame> frames_;
};

inline Vec3 joint_position(const MotionSequence& seq, std::size_t frame, JointId joint) {
  return seq.joint_position(frame, joint);
}

inline RootPose relative_root(const MotionSequence& seq, std::size_t frame) {
  return seq.relative_root(frame);
}

}  // namespace motiontext
