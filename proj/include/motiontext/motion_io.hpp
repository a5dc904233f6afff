#pragma once

// JSON ingestion and serialization of motion sequences and skeleton layouts.
//
//   { "id": str, "fps": num, "layout": str,
//     "frames": [ { "joints": [[x,y,z], ...],
//                   "root_orient": [rx,ry,rz] | [qw,qx,qy,qz],
//                   "root_transl": [x,y,z] }, ... ] }
//
// root_orient is axis-angle (radians) when it has three components and a
// quaternion when it has four. Both root fields default to identity/zero.

#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "motiontext/error.hpp"
#include "motiontext/motion.hpp"

namespace motiontext {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline Vec3 read_vec3(const nlohmann::json& j, const char* what, long record) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(std::string(what) + " must be an array of 3 numbers", record);
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    // JSON has no NaN; writers emit null instead. Let validation reject it.
    if (j[i].is_null()) {
      v[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (!j[i].is_number()) throw ParseError(std::string(what) + " has a non-numeric entry", record);
    v[i] = j[i].get<double>();
  }
  return v;
}

inline Rotation read_rotation(const nlohmann::json& j, long record) {
  if (!j.is_array() || (j.size() != 3 && j.size() != 4)) {
    throw ParseError("root_orient must have 3 (axis-angle) or 4 (quaternion) components", record);
  }
  double c[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("root_orient has a non-numeric entry", record);
    c[i] = j[i].get<double>();
  }
  for (double x : c) {
    if (!std::isfinite(x)) throw ValidationError("non-finite root orientation", record);
  }
  if (j.size() == 3) {
    const Vec3 axis_angle(c[0], c[1], c[2]);
    const double angle = axis_angle.norm();
    if (angle < 1e-12) return Rotation::Identity();
    return Rotation(Eigen::AngleAxisd(angle, axis_angle / angle));
  }
  Rotation q(c[0], c[1], c[2], c[3]);
  const double n = q.norm();
  if (n < 1e-12) throw ValidationError("zero-norm root orientation quaternion", record);
  q.coeffs() /= n;
  return q;
}

}  // namespace detail

/// Reads a layout file: either { "name":..., "joint_count": N, "joints": {name: index} }
/// or a bare { name: index } mapping.
inline SkeletonLayout layout_from_json(const nlohmann::json& doc, const std::string& fallback_name) {
  if (!doc.is_object()) throw ParseError("layout must be a JSON object");
  const nlohmann::json& joints = doc.contains("joints") ? doc.at("joints") : doc;
  std::map<JointId, std::size_t> columns;
  std::size_t max_column = 0;
  for (const auto& [key, value] : joints.items()) {
    if (&joints == &doc && (key == "name" || key == "joint_count")) continue;
    auto joint = joint_from_name(key);
    if (!joint) throw ParseError("layout names unknown joint '" + key + "'");
    if (!value.is_number_unsigned()) {
      throw ParseError("layout column for '" + key + "' must be a non-negative integer");
    }
    const auto col = value.get<std::size_t>();
    columns[*joint] = col;
    max_column = std::max(max_column, col);
  }
  std::size_t count = max_column + 1;
  if (doc.contains("joint_count")) count = doc.at("joint_count").get<std::size_t>();
  std::string name = doc.value("name", fallback_name);
  return SkeletonLayout(std::move(name), count, columns);
}

/// Built-in layout name, or a path to a layout file.
inline SkeletonLayout resolve_layout(std::string_view name_or_path) {
  if (const auto* builtin = SkeletonLayout::builtin(name_or_path)) return *builtin;
  const std::filesystem::path path{std::string(name_or_path)};
  std::error_code ec;
  if (!name_or_path.empty() && std::filesystem::is_regular_file(path, ec)) {
    return layout_from_json(detail::parse_json_text(detail::read_file(path), path.string()),
                            path.stem().string());
  }
  throw LayoutUnknown(std::string(name_or_path));
}

/// Builds a sequence from a parsed document. When `layout` is null the
/// document's "layout" field is resolved.
inline MotionSequence motion_from_json(const nlohmann::json& doc,
                                       const SkeletonLayout* layout = nullptr) {
  if (!doc.is_object()) throw ParseError("motion document must be a JSON object");
  if (!doc.contains("fps") || !doc.at("fps").is_number()) throw ParseError("missing numeric 'fps'");
  if (!doc.contains("frames") || !doc.at("frames").is_array()) {
    throw ParseError("missing 'frames' array");
  }
  std::string id = doc.contains("id") && doc.at("id").is_string() ? doc.at("id").get<std::string>()
                                                                  : std::string();
  std::optional<SkeletonLayout> resolved;
  if (layout == nullptr) {
    if (!doc.contains("layout") || !doc.at("layout").is_string()) {
      throw ParseError("missing 'layout' and no layout override given");
    }
    resolved.emplace(resolve_layout(doc.at("layout").get<std::string>()));
    layout = &*resolved;
  }

  const auto& jframes = doc.at("frames");
  std::vector<Frame> frames;
  frames.reserve(jframes.size());
  for (std::size_t f = 0; f < jframes.size(); ++f) {
    const auto& jf = jframes[f];
    const long rec = static_cast<long>(f);
    if (!jf.is_object() || !jf.contains("joints") || !jf.at("joints").is_array()) {
      throw ParseError("frame must be an object with a 'joints' array", rec);
    }
    Frame fr;
    const auto& jj = jf.at("joints");
    fr.joints.reserve(jj.size());
    for (const auto& p : jj) fr.joints.push_back(detail::read_vec3(p, "joint", rec));
    if (jf.contains("root_orient")) fr.root_orient = detail::read_rotation(jf.at("root_orient"), rec);
    if (jf.contains("root_transl")) {
      fr.root_transl = detail::read_vec3(jf.at("root_transl"), "root_transl", rec);
    }
    frames.push_back(std::move(fr));
  }
  return MotionSequence(std::move(id), doc.at("fps").get<double>(), *layout, std::move(frames));
}

inline MotionSequence load_motion(const std::filesystem::path& path, std::string_view layout_name = {}) {
  const auto doc = detail::parse_json_text(detail::read_file(path), path.string());
  if (layout_name.empty()) return motion_from_json(doc);
  const SkeletonLayout layout = resolve_layout(layout_name);
  return motion_from_json(doc, &layout);
}

inline MotionSequence load_motion(const std::filesystem::path& path, const SkeletonLayout& layout) {
  return motion_from_json(detail::parse_json_text(detail::read_file(path), path.string()), &layout);
}

/// Serializes with round-trip double precision; orientations are written as
/// [qw,qx,qy,qz].
inline nlohmann::json motion_to_json(const MotionSequence& seq) {
  nlohmann::json frames = nlohmann::json::array();
  for (const Frame& fr : seq.frames()) {
    nlohmann::json joints = nlohmann::json::array();
    for (const Vec3& p : fr.joints) joints.push_back({p.x(), p.y(), p.z()});
    const Rotation& q = fr.root_orient;
    frames.push_back({{"joints", std::move(joints)},
                      {"root_orient", {q.w(), q.x(), q.y(), q.z()}},
                      {"root_transl", {fr.root_transl.x(), fr.root_transl.y(), fr.root_transl.z()}}});
  }
  return {{"id", seq.id()},
          {"fps", seq.fps()},
          {"layout", seq.layout().name()},
          {"frames", std::move(frames)}};
}

}  // namespace motiontext
