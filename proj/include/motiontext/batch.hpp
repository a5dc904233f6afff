#pragma once

// Batch commands behind the command-line tool: caption, codes, stats and
// dump-config. Each processes a list of input files with a worker pool and
// writes outputs atomically (temp file + rename).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "motiontext/captioner.hpp"
#include "motiontext/config_io.hpp"
#include "motiontext/error.hpp"
#include "motiontext/motion_io.hpp"
#include "motiontext/parallel.hpp"
#include "motiontext/posecode.hpp"
#include "motiontext/stats.hpp"

namespace motiontext {

inline constexpr std::string_view kToolName = "motiontext";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitPartialFailure = 1, kExitUsage = 2 };

/// Bad invocation, detected before any input is processed.
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// JSON records

inline nlohmann::json event_to_json(const MotioncodeEvent& e) {
  nlohmann::json j = {{"kind", std::string(label(e.kind))},
                      {"code", e.code},
                      {"code_label", e.code_label()},
                      {"family", std::string(family_key(e.family()))},
                      {"from_category", nullptr},
                      {"to_category", e.to_label},
                      {"start_frame", e.start_frame},
                      {"end_frame", e.end_frame},
                      {"start_timing", std::string(label(e.start_timing))},
                      {"duration", std::string(label(e.duration))}};
  if (e.kind != EventKind::Stationary) j["from_category"] = e.from_label;
  if (e.kind == EventKind::Oscillation) j["cycle_count"] = e.cycle_count;
  return j;
}

inline nlohmann::json state_record(std::size_t frame, const PosecodeDef& def, double value,
                                   const FamilyThresholds& t, CategoryIndex c) {
  nlohmann::json j = {{"frame", frame},
                      {"code_label", def.label},
                      {"value", nullptr},
                      {"unit", std::string(unit_of(def.family))},
                      {"category", t.label(c)},
                      {"eligible", t.eligible(c)}};
  if (std::isfinite(value)) j["value"] = value;
  return j;
}

inline nlohmann::json document_to_json(const CaptionDocument& doc) {
  nlohmann::json clauses = nlohmann::json::array();
  for (const auto& c : doc.clauses) clauses.push_back({{"events", c.events}, {"text", c.text}});
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : doc.codes) events.push_back(event_to_json(e));
  return {{"id", doc.sequence_id},
          {"seed", doc.seed},
          {"text", doc.full_text},
          {"clauses", std::move(clauses)},
          {"events", std::move(events)}};
}

inline nlohmann::json config_snapshot(const CaptionConfig& c, std::string_view layout) {
  return {{"thresholds", thresholds_to_json(c.thresholds)},
          {"aggregation", aggregation_to_json(c.aggregation)},
          {"skip_policy", policy_to_json(c.policy)},
          {"bank_checksum", c.bank.checksum()},
          {"ground", c.ground == GroundMode::Auto ? "auto" : "zero"},
          {"layout", layout.empty() ? nlohmann::json(nullptr) : nlohmann::json(std::string(layout))},
          {"raw", c.raw}};
}

// ---------------------------------------------------------------------------
// Files

inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// Files are kept as given; directories expand to their *.json files in
/// name order. Missing paths are usage errors.
inline std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : inputs) {
    std::error_code ec;
    if (std::filesystem::is_directory(p, ec)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (std::filesystem::exists(p, ec)) {
      files.push_back(p);
    } else {
      throw UsageError("input does not exist: " + p.string());
    }
  }
  return files;
}

// ---------------------------------------------------------------------------
// Commands

struct BatchOptions {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string layout;  // empty: use each file's own layout field
  CaptionConfig config;
  bool emit_frames = true;  // codes only
  bool emit_events = true;  // codes only
  bool quiet = false;
};

struct FileStatus {
  std::string path;
  bool ok = false;
  std::string message;
  std::string id;
  std::uint64_t seed = 0;
};

struct BatchResult {
  std::vector<FileStatus> files;
  int exit_code = kExitOk;
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(files.begin(), files.end(), [](const auto& f) { return !f.ok; }));
  }
};

namespace detail {

struct PreparedBatch {
  std::vector<std::filesystem::path> files;
  std::optional<SkeletonLayout> layout;
};

inline PreparedBatch prepare(const BatchOptions& opt) {
  if (opt.jobs == 0) throw UsageError("--jobs must be at least 1");
  PreparedBatch p;
  p.files = expand_inputs(opt.inputs);
  if (p.files.empty()) throw UsageError("no input files");
  std::set<std::string> stems;
  for (const auto& f : p.files) {
    if (!stems.insert(f.stem().string()).second) {
      throw UsageError("two inputs share the output name '" + f.stem().string() + "'");
    }
  }
  if (!opt.layout.empty()) {
    try {
      p.layout.emplace(resolve_layout(opt.layout));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  std::filesystem::create_directories(opt.out_dir);
  return p;
}

inline MotionSequence load_input(const std::filesystem::path& path, const PreparedBatch& p) {
  return p.layout ? load_motion(path, *p.layout) : load_motion(path);
}

template <class PerFile>
BatchResult run_files(const BatchOptions& opt, std::string_view command, PerFile&& per_file) {
  const auto started = std::chrono::steady_clock::now();
  const PreparedBatch prepared = prepare(opt);
  BatchResult result;
  result.files.resize(prepared.files.size());
  std::mutex log_mutex;
  parallel_for(prepared.files.size(), opt.jobs, [&](std::size_t i, std::size_t) {
    FileStatus status;
    status.path = prepared.files[i].string();
    try {
      const MotionSequence seq = load_input(prepared.files[i], prepared);
      status.id = seq.id();
      status.seed = sequence_seed(opt.seed, seq.id());
      per_file(seq, prepared.files[i].stem().string());
      status.ok = true;
    } catch (const std::exception& e) {
      status.message = e.what();
      std::lock_guard lock(log_mutex);
      if (!opt.quiet) std::cerr << "error: " << status.path << ": " << e.what() << "\n";
    }
    result.files[i] = std::move(status);
  });

  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& f : result.files) {
    nlohmann::json entry = {{"path", f.path}, {"status", f.ok ? "ok" : "error"}};
    if (f.ok) {
      entry["id"] = f.id;
      entry["seed"] = f.seed;
    } else {
      entry["message"] = f.message;
    }
    inputs.push_back(std::move(entry));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const nlohmann::json manifest = {{"tool", std::string(kToolName)},
                                   {"version", std::string(kToolVersion)},
                                   {"command", std::string(command)},
                                   {"seed", opt.seed},
                                   {"config", config_snapshot(opt.config, opt.layout)},
                                   {"inputs", std::move(inputs)},
                                   {"wall_time_seconds", wall}};
  write_atomic(opt.out_dir / "manifest.json", manifest.dump(2) + "\n");
  result.exit_code = result.failures() > 0 ? kExitPartialFailure : kExitOk;
  if (!opt.quiet) {
    std::cerr << command << ": " << result.files.size() - result.failures() << " ok, " << result.failures()
              << " failed\n";
  }
  return result;
}

}  // namespace detail

/// Per sequence: <stem>.txt (caption) and <stem>.json (seed, clauses, events).
inline BatchResult run_caption(const BatchOptions& opt) {
  return detail::run_files(opt, "caption", [&](const MotionSequence& seq, const std::string& stem) {
    const auto doc = caption_sequence(seq, opt.config, opt.seed);
    write_atomic(opt.out_dir / (stem + ".txt"), doc.full_text + "\n");
    write_atomic(opt.out_dir / (stem + ".json"), document_to_json(doc).dump(2) + "\n");
  });
}

/// Per sequence: <stem>.frames.jsonl and/or <stem>.events.jsonl.
inline BatchResult run_codes(const BatchOptions& opt) {
  return detail::run_files(opt, "codes", [&](const MotionSequence& seq, const std::string& stem) {
    const auto& cfg = opt.config;
    const auto states = extract_all(seq, cfg.registry, cfg.thresholds, estimate_ground(seq, cfg.ground));
    if (opt.emit_frames) {
      std::string out;
      for (std::size_t f = 0; f < states.frames(); ++f) {
        for (std::size_t c = 0; c < states.codes(); ++c) {
          const auto& def = cfg.registry[c];
          out += state_record(f, def, states.value(c, f), cfg.thresholds[def.family], states.category(c, f)).dump();
          out += '\n';
        }
      }
      write_atomic(opt.out_dir / (stem + ".frames.jsonl"), out);
    }
    if (opt.emit_events) {
      std::string out;
      for (const auto& e : aggregate(states, cfg.registry, cfg.thresholds, seq.fps(), cfg.aggregation)) {
        out += event_to_json(e).dump();
        out += '\n';
      }
      write_atomic(opt.out_dir / (stem + ".events.jsonl"), out);
    }
  });
}

struct StatsOptions {
  std::vector<std::filesystem::path> corpora;  // one or more; exactly two with compare
  bool compare = false;
  std::size_t sample_n = 0;  // 0 = all sequences
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = ".";
  std::string layout;
  ThresholdTable thresholds = ThresholdTable::defaults();
  GroundMode ground = GroundMode::Zero;
};

inline Corpus file_corpus(std::vector<std::filesystem::path> files, std::optional<SkeletonLayout> layout) {
  Corpus c;
  c.size = files.size();
  c.load = [files = std::move(files), layout = std::move(layout)](std::size_t i) {
    return layout ? load_motion(files.at(i), *layout) : load_motion(files.at(i));
  };
  return c;
}

/// Writes histogram.{csv,json}, or comparison.{csv,json} when comparing.
/// Returns the exit code; EmptyCorpus and SampleTooLarge propagate.
inline int run_stats(const StatsOptions& opt) {
  if (opt.jobs == 0) throw UsageError("--jobs must be at least 1");
  if (opt.compare && opt.corpora.size() != 2) throw UsageError("--compare needs exactly two corpora");
  if (opt.corpora.empty()) throw UsageError("no corpus given");
  std::optional<SkeletonLayout> layout;
  if (!opt.layout.empty()) {
    try {
      layout.emplace(resolve_layout(opt.layout));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  std::filesystem::create_directories(opt.out_dir);
  const auto& registry = default_registry();

  if (opt.compare) {
    const auto a = file_corpus(expand_inputs({opt.corpora[0]}), layout);
    const auto b = file_corpus(expand_inputs({opt.corpora[1]}), layout);
    const auto report = compare(a, b, registry, opt.thresholds, opt.sample_n, opt.seed, opt.ground, opt.jobs);
    write_atomic(opt.out_dir / "comparison.csv", comparison_csv(report));
    write_atomic(opt.out_dir / "comparison.json", comparison_json(report).dump(2) + "\n");
    return kExitOk;
  }

  const auto corpus = file_corpus(expand_inputs(opt.corpora), layout);
  if (corpus.size == 0) throw EmptyCorpus();
  const auto indices = opt.sample_n == 0 ? [&] {
    std::vector<std::size_t> all(corpus.size);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }()
                                         : sample_indices(corpus.size, opt.sample_n, opt.seed);
  const auto set = tally_corpus(corpus, indices, registry, opt.thresholds, opt.ground, opt.jobs);
  write_atomic(opt.out_dir / "histogram.csv", histograms_csv(set));
  write_atomic(opt.out_dir / "histogram.json", histograms_json(set).dump(2) + "\n");
  return kExitOk;
}

inline nlohmann::json dump_config(const CaptionConfig& c) {
  return {{"thresholds", thresholds_to_json(c.thresholds)},
          {"aggregation", aggregation_to_json(c.aggregation)},
          {"skip_policy", policy_to_json(c.policy)},
          {"bank", c.bank.to_json()}};
}

}  // namespace motiontext
