#pragma once

// Temporal aggregation of posecode tracks into motioncode events:
// run-length tracking with hysteresis, then transition / stationary /
// oscillation detection with start-timing and duration timecodes.

#include <algorithm>
#include <array>
#include <iterator>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "motiontext/error.hpp"
#include "motiontext/posecode.hpp"

namespace motiontext {

struct AggregationConfig {
  double min_run_seconds = 0.25;
  double stationary_min_fraction = 0.4;
  int oscillation_min_cycles = 3;
  double oscillation_window_seconds = 2.0;

  void validate() const {
    if (!(min_run_seconds > 0.0) || !std::isfinite(min_run_seconds)) {
      throw ValidationError("min_run_seconds must be positive");
    }
    if (!(stationary_min_fraction > 0.0 && stationary_min_fraction <= 1.0)) {
      throw ValidationError("stationary_min_fraction must be in (0, 1]");
    }
    if (oscillation_min_cycles < 1) throw ValidationError("oscillation_min_cycles must be positive");
    if (!(oscillation_window_seconds > 0.0) || !std::isfinite(oscillation_window_seconds)) {
      throw ValidationError("oscillation_window_seconds must be positive");
    }
  }

  std::size_t min_run_frames(double fps) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(min_run_seconds * fps - 1e-9)));
  }
  std::size_t oscillation_window_frames(double fps) const {
    return static_cast<std::size_t>(std::floor(oscillation_window_seconds * fps + 1e-9));
  }
};

/// A maximal stretch [start, end) of one code held in one category.
struct CategoryRun {
  std::size_t start = 0;
  std::size_t end = 0;
  CategoryIndex category = kAmbiguous;
  bool eligible = false;

  std::size_t length() const noexcept { return end - start; }
  friend bool operator==(const CategoryRun&, const CategoryRun&) = default;
};

/// Frame-at-a-time tracker. A new unambiguous category takes over only once
/// it has persisted for `min_run_frames` (ambiguous frames count toward the
/// persistence of a pending category but never start one). The takeover
/// point is the first frame of the new category. Runs always tile [0, M).
class RunTracker {
 public:
  RunTracker(const FamilyThresholds& thresholds, std::size_t min_run_frames)
      : thresholds_(&thresholds), min_run_frames_(std::max<std::size_t>(1, min_run_frames)) {}

  void push(CategoryIndex c) {
    const std::size_t f = frame_++;
    if (c != kAmbiguous) {
      if (first_seen_ == kAmbiguous) first_seen_ = c;
      if (has_current_ && c == current_) {
        pending_ = false;
      } else if (!pending_ || c != pending_category_) {
        pending_ = true;
        pending_category_ = c;
        pending_start_ = f;
      }
    }
    if (pending_ && f + 1 - pending_start_ >= min_run_frames_) {
      if (has_current_) {
        emit(run_start_, pending_start_, current_);
        run_start_ = pending_start_;
      }
      current_ = pending_category_;
      has_current_ = true;
      pending_ = false;
    }
  }

  std::size_t frames_seen() const noexcept { return frame_; }

  /// Closes the final run and returns all runs. The tracker is left empty.
  std::vector<CategoryRun> finish() {
    if (frame_ > 0) {
      const CategoryIndex last = has_current_ ? current_ : first_seen_;
      emit(run_start_, frame_, last);
    }
    auto out = std::move(runs_);
    *this = RunTracker(*thresholds_, min_run_frames_);
    return out;
  }

 private:
  void emit(std::size_t start, std::size_t end, CategoryIndex c) {
    runs_.push_back({start, end, c, thresholds_->eligible(c)});
  }

  const FamilyThresholds* thresholds_;
  std::size_t min_run_frames_;
  std::size_t frame_ = 0;
  std::size_t run_start_ = 0;
  bool has_current_ = false;
  CategoryIndex current_ = kAmbiguous;
  CategoryIndex first_seen_ = kAmbiguous;
  bool pending_ = false;
  CategoryIndex pending_category_ = kAmbiguous;
  std::size_t pending_start_ = 0;
  std::vector<CategoryRun> runs_;
};

/// Whole-array tracking. Splits the track into blocks (a block starts at a
/// frame whose unambiguous category differs from the previous unambiguous
/// frame and lasts until the next such frame); blocks at least
/// `min_run_frames` long are the only ones that can open a run.
inline std::vector<CategoryRun> track(std::span<const CategoryIndex> states,
                                      const FamilyThresholds& thresholds,
                                      std::size_t min_run_frames) {
  min_run_frames = std::max<std::size_t>(1, min_run_frames);
  const std::size_t m = states.size();
  std::vector<CategoryRun> runs;
  if (m == 0) return runs;

  struct Block {
    CategoryIndex category;
    std::size_t start;
    std::size_t end;
  };
  std::vector<Block> blocks;
  for (std::size_t f = 0; f < m; ++f) {
    const CategoryIndex c = states[f];
    if (c == kAmbiguous) continue;
    if (blocks.empty() || blocks.back().category != c) {
      if (!blocks.empty()) blocks.back().end = f;
      blocks.push_back({c, f, m});
    }
  }

  CategoryIndex current = blocks.empty() ? kAmbiguous : blocks.front().category;
  const auto first_long = std::find_if(blocks.begin(), blocks.end(), [&](const Block& b) {
    return b.end - b.start >= min_run_frames;
  });
  if (first_long != blocks.end()) current = first_long->category;

  std::size_t run_start = 0;
  for (auto it = first_long; it != blocks.end(); ++it) {
    if (it->end - it->start < min_run_frames || it->category == current) continue;
    runs.push_back({run_start, it->start, current, thresholds.eligible(current)});
    run_start = it->start;
    current = it->category;
  }
  runs.push_back({run_start, m, current, thresholds.eligible(current)});
  return runs;
}

inline std::vector<CategoryRun> track(std::span<const CategoryIndex> states,
                                      const FamilyThresholds& thresholds, double fps,
                                      const AggregationConfig& config) {
  return track(states, thresholds, config.min_run_frames(fps));
}

enum class StartTiming : std::uint8_t { Begin, Early, Mid, Late, Final };
enum class DurationBin : std::uint8_t { Short, While, Long, WholePeriod };

inline constexpr std::array<StartTiming, 5> kAllStartTimings = {
    StartTiming::Begin, StartTiming::Early, StartTiming::Mid, StartTiming::Late, StartTiming::Final};
inline constexpr std::array<DurationBin, 4> kAllDurations = {
    DurationBin::Short, DurationBin::While, DurationBin::Long, DurationBin::WholePeriod};

constexpr std::string_view label(StartTiming t) noexcept {
  constexpr std::array<std::string_view, 5> names = {"begin stage", "early stage", "mid stage",
                                                     "late stage", "final stage"};
  return names[static_cast<std::size_t>(t)];
}

constexpr std::string_view label(DurationBin d) noexcept {
  constexpr std::array<std::string_view, 4> names = {"for a short time", "for a while",
                                                     "for a long time", "for the whole period"};
  return names[static_cast<std::size_t>(d)];
}

/// Bins v = T_s / T; upper bounds inclusive.
constexpr StartTiming start_timing_bin(double v) noexcept {
  if (v <= 0.2) return StartTiming::Begin;
  if (v <= 0.4) return StartTiming::Early;
  if (v <= 0.6) return StartTiming::Mid;
  if (v <= 0.8) return StartTiming::Late;
  return StartTiming::Final;
}

/// Bins v = (T_e - T_s) / T; upper bounds inclusive.
constexpr DurationBin duration_bin(double v) noexcept {
  if (v <= 0.1) return DurationBin::Short;
  if (v <= 0.4) return DurationBin::While;
  if (v <= 0.8) return DurationBin::Long;
  return DurationBin::WholePeriod;
}

struct Timecode {
  StartTiming start;
  DurationBin duration;
};

inline Timecode timecode(std::size_t start_frame, std::size_t end_frame, std::size_t total_frames) {
  if (!(start_frame < end_frame && end_frame <= total_frames)) {
    throw InvalidInterval("invalid interval [" + std::to_string(start_frame) + ", " +
                          std::to_string(end_frame) + ") for " + std::to_string(total_frames) +
                          " frames");
  }
  const auto t = static_cast<double>(total_frames);
  return {start_timing_bin(static_cast<double>(start_frame) / t),
          duration_bin(static_cast<double>(end_frame - start_frame) / t)};
}

enum class EventKind : std::uint8_t { Stationary, Transition, Oscillation };

constexpr std::string_view label(EventKind k) noexcept {
  constexpr std::array<std::string_view, 3> names = {"stationary", "transition", "oscillation"};
  return names[static_cast<std::size_t>(k)];
}

struct MotioncodeEvent {
  EventKind kind = EventKind::Stationary;
  std::size_t code = 0;  // registry index
  const PosecodeDef* def = nullptr;
  CategoryIndex from_category = kAmbiguous;  // transition source, oscillation first category
  CategoryIndex to_category = kAmbiguous;    // transition target, held category, oscillation second
  std::string from_label;
  std::string to_label;
  StartTiming start_timing = StartTiming::Begin;
  DurationBin duration = DurationBin::Short;
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;
  int cycle_count = 0;  // oscillation only

  const std::string& code_label() const { return def->label; }
  PosecodeFamily family() const { return def->family; }
};

/// Events of one code. `code` and `def` are stamped onto every event.
inline std::vector<MotioncodeEvent> detect(std::span<const CategoryRun> runs, std::size_t total_frames,
                                           const FamilyThresholds& thresholds, const PosecodeDef& def,
                                           std::size_t code, double fps,
                                           const AggregationConfig& config) {
  std::vector<MotioncodeEvent> events;
  if (runs.empty() || total_frames == 0) return events;
  const std::size_t min_frames = config.min_run_frames(fps);
  const std::size_t window = config.oscillation_window_frames(fps);
  const std::size_t n = runs.size();

  const auto make = [&](EventKind kind, CategoryIndex from, CategoryIndex to, std::size_t start,
                        std::size_t end) {
    MotioncodeEvent e;
    e.kind = kind;
    e.code = code;
    e.def = &def;
    e.from_category = from;
    e.to_category = to;
    e.from_label = from == kAmbiguous && kind == EventKind::Stationary ? std::string()
                                                                       : thresholds.label(from);
    e.to_label = thresholds.label(to);
    const auto tc = timecode(start, end, total_frames);
    e.start_timing = tc.start;
    e.duration = tc.duration;
    e.start_frame = start;
    e.end_frame = end;
    return e;
  };

  // Boundary k sits between runs[k-1] and runs[k]; those inside an
  // oscillation are not reported as transitions.
  std::vector<bool> inside_oscillation(n, false);
  if (def.family == PosecodeFamily::Angle && n > 1) {
    const auto cycles = static_cast<std::size_t>(config.oscillation_min_cycles);
    std::size_t i = 0;
    while (i + 1 < n) {
      std::size_t j = i;
      if (runs[i].eligible && runs[i + 1].eligible) {
        j = i + 1;
        while (j + 1 < n && runs[j + 1].eligible && runs[j + 1].category == runs[j - 1].category) ++j;
      }
      const std::size_t boundaries = j - i;
      bool qualifies = false;
      for (std::size_t k = i + 1; boundaries >= cycles && k + cycles - 1 <= j; ++k) {
        if (runs[k + cycles - 1].start - runs[k].start <= window) {
          qualifies = true;
          break;
        }
      }
      if (qualifies) {
        auto e = make(EventKind::Oscillation, runs[i].category, runs[i + 1].category, runs[i].start,
                      runs[j].end);
        e.cycle_count = static_cast<int>(boundaries);
        events.push_back(std::move(e));
        for (std::size_t k = i + 1; k <= j; ++k) inside_oscillation[k] = true;
        i = j;
      } else {
        ++i;
      }
    }
  }

  for (std::size_t k = 1; k < n; ++k) {
    if (inside_oscillation[k]) continue;
    const CategoryRun& prev = runs[k - 1];
    const CategoryRun& next = runs[k];
    const bool prev_ok = prev.eligible && prev.length() >= min_frames;
    const bool next_ok = next.eligible && next.length() >= min_frames;
    const bool emit = (prev_ok && next_ok) || (prev_ok && !next.eligible) || (next_ok && !prev.eligible);
    if (emit) events.push_back(make(EventKind::Transition, prev.category, next.category, next.start, next.end));
  }

  for (const CategoryRun& r : runs) {
    if (!r.eligible) continue;
    const double fraction = static_cast<double>(r.length()) / static_cast<double>(total_frames);
    if (fraction < config.stationary_min_fraction) continue;
    const auto tc = timecode(r.start, r.end, total_frames);
    if (tc.duration != DurationBin::Long && tc.duration != DurationBin::WholePeriod) continue;
    events.push_back(make(EventKind::Stationary, kAmbiguous, r.category, r.start, r.end));
  }

  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start_frame, a.kind) < std::tie(b.start_frame, b.kind);
  });
  return events;
}

/// Track, detect and timecode every code; events are grouped by registry
/// order and sorted by start frame within a code.
inline std::vector<MotioncodeEvent> aggregate(const FrameStates& states,
                                              std::span<const PosecodeDef> registry,
                                              const ThresholdTable& table, double fps,
                                              const AggregationConfig& config) {
  std::vector<MotioncodeEvent> events;
  const std::size_t min_frames = config.min_run_frames(fps);
  for (std::size_t c = 0; c < registry.size(); ++c) {
    const auto& thresholds = table[registry[c].family];
    const auto runs = track(states.track(c), thresholds, min_frames);
    auto code_events = detect(runs, states.frames(), thresholds, registry[c], c, fps, config);
    std::move(code_events.begin(), code_events.end(), std::back_inserter(events));
  }
  return events;
}

}  // namespace motiontext
