#include <random>

#include <gtest/gtest.h>

#include "motiontext/motioncode.hpp"
#include "support/synth.hpp"

using namespace motiontext;
using F = PosecodeFamily;

namespace {

const ThresholdTable& T() { return ThresholdTable::defaults(); }
const FamilyThresholds& angle() { return T()[F::Angle]; }
const PosecodeDef& knee_def() { return default_registry()[0]; }

constexpr CategoryIndex kCompletely = 0, kPartially = 3, kSlightly = 4, kStraight = 5, kA = kAmbiguous;

std::vector<CategoryRun> streamed(std::span<const CategoryIndex> s, const FamilyThresholds& t, std::size_t min) {
  RunTracker tracker(t, min);
  for (auto c : s) tracker.push(c);
  return tracker.finish();
}

void expect_tiles(const std::vector<CategoryRun>& runs, std::size_t m) {
  ASSERT_FALSE(runs.empty());
  EXPECT_EQ(runs.front().start, 0u);
  EXPECT_EQ(runs.back().end, m);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_LT(runs[i].start, runs[i].end);
    if (i > 0) {
      EXPECT_EQ(runs[i].start, runs[i - 1].end);
      EXPECT_NE(runs[i].category, runs[i - 1].category);
    }
  }
}

std::size_t count(const std::vector<MotioncodeEvent>& ev, EventKind k) {
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](const auto& e) { return e.kind == k; }));
}

std::vector<MotioncodeEvent> events_for(const MotionSequence& seq, AggregationConfig cfg = {}) {
  const auto states = extract_all(seq, default_registry(), T(), 0.0);
  return aggregate(states, default_registry(), T(), seq.fps(), cfg);
}

}  // namespace

TEST(Track, ConstantInputIsOneRun) {
  const std::vector<CategoryIndex> s(60, kStraight);
  const auto runs = track(s, angle(), 8);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0], (CategoryRun{0, 60, kStraight, true}));
}

TEST(Track, TwoLongRunsSplitAtTheChange) {
  std::vector<CategoryIndex> s(30, kStraight);
  s.insert(s.end(), 30, kCompletely);
  const auto runs = track(s, angle(), AggregationConfig{}.min_run_frames(30));
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].end, 30u);
  EXPECT_EQ(runs[1].category, kCompletely);
}

TEST(Track, AmbiguityNeverStartsARun) {
  std::vector<CategoryIndex> s;
  for (int i = 0; i < 60; ++i) s.push_back(i % 2 ? kA : kStraight);
  const auto runs = track(s, angle(), 8);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].category, kStraight);

  const std::vector<CategoryIndex> all_ambiguous(20, kA);
  const auto amb = track(all_ambiguous, angle(), 8);
  ASSERT_EQ(amb.size(), 1u);
  EXPECT_EQ(amb[0].category, kAmbiguous);
  EXPECT_FALSE(amb[0].eligible);
}

TEST(Track, ShortBlipsAreAbsorbed) {
  std::vector<CategoryIndex> s(20, kStraight);
  s.insert(s.end(), 3, kCompletely);
  s.insert(s.end(), 20, kStraight);
  EXPECT_EQ(track(s, angle(), 8).size(), 1u);
}

TEST(Track, StreamingMatchesBatchOnRandomTracks) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 2 + gen() % 200;
    const std::size_t min = 1 + gen() % 12;
    std::vector<CategoryIndex> s;
    CategoryIndex c = static_cast<CategoryIndex>(gen() % 6);
    while (s.size() < m) {
      const std::size_t len = 1 + gen() % 15;
      const bool amb = gen() % 4 == 0;
      for (std::size_t i = 0; i < len && s.size() < m; ++i) s.push_back(amb ? kA : c);
      if (gen() % 2) c = static_cast<CategoryIndex>(gen() % 6);
    }
    const auto batch = track(s, angle(), min);
    EXPECT_EQ(batch, streamed(s, angle(), min)) << "trial " << trial;
    expect_tiles(batch, m);
  }
}

TEST(Timecode, TableExamples) {
  EXPECT_EQ(timecode(10, 20, 100).start, StartTiming::Begin);
  EXPECT_EQ(timecode(0, 100, 100).duration, DurationBin::WholePeriod);
  EXPECT_EQ(timecode(10, 15, 100).duration, DurationBin::Short);
  EXPECT_EQ(timecode(20, 30, 100).start, StartTiming::Begin);  // 0.2 is upper-inclusive
  EXPECT_EQ(timecode(21, 30, 100).start, StartTiming::Early);
  EXPECT_EQ(timecode(0, 80, 100).duration, DurationBin::Long);
  EXPECT_EQ(timecode(0, 81, 100).duration, DurationBin::WholePeriod);
  EXPECT_THROW(timecode(5, 5, 100), InvalidInterval);
  EXPECT_THROW(timecode(5, 101, 100), InvalidInterval);
  EXPECT_EQ(label(StartTiming::Mid), "mid stage");
  EXPECT_EQ(label(DurationBin::While), "for a while");
}

TEST(Detect, WholeRunIsOneStationary) {
  const std::vector<CategoryRun> runs = {{0, 90, kStraight, true}};
  const auto ev = detect(runs, 90, angle(), knee_def(), 0, 30, {});
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::Stationary);
  EXPECT_EQ(ev[0].duration, DurationBin::WholePeriod);
  EXPECT_EQ(ev[0].to_label, "straight");
}

TEST(Detect, IgnoredRunsProduceNothing) {
  const auto& t = T()[F::RelPosY];
  const std::vector<CategoryRun> runs = {{0, 40, 1, false}, {40, 90, kAmbiguous, false}};
  EXPECT_TRUE(detect(runs, 90, t, default_registry()[26], 26, 30, {}).empty());
}

TEST(Detect, ShortStationaryIsNotReported) {
  const std::vector<CategoryRun> runs = {{0, 30, kStraight, true}, {30, 90, kCompletely, true}};
  const auto ev = detect(runs, 90, angle(), knee_def(), 0, 30, {});
  EXPECT_EQ(count(ev, EventKind::Transition), 1u);
  ASSERT_EQ(count(ev, EventKind::Stationary), 1u);
  for (const auto& e : ev) {
    if (e.kind == EventKind::Stationary) {
      EXPECT_EQ(e.to_label, "completely bent");
    }
    if (e.kind == EventKind::Transition) {
      EXPECT_EQ(e.from_label, "straight");
      EXPECT_EQ(e.start_frame, 30u);
    }
  }
}

TEST(Detect, AlternationBecomesOneOscillation) {
  const std::vector<CategoryRun> runs = {{0, 9, kSlightly, true},
                                         {9, 18, kPartially, true},
                                         {18, 27, kSlightly, true},
                                         {27, 36, kPartially, true},
                                         {36, 90, kSlightly, true}};
  const auto ev = detect(runs, 90, angle(), knee_def(), 0, 30, {});
  EXPECT_EQ(count(ev, EventKind::Oscillation), 1u);
  EXPECT_EQ(count(ev, EventKind::Transition), 0u);
  for (const auto& e : ev) {
    if (e.kind == EventKind::Oscillation) {
      EXPECT_EQ(e.cycle_count, 4);
    }
  }
}

TEST(Detect, OscillationOnlyForAngles) {
  const auto& t = T()[F::Distance];
  const std::vector<CategoryRun> runs = {{0, 9, 0, true}, {9, 18, 1, true}, {18, 27, 0, true}, {27, 90, 1, true}};
  const auto ev = detect(runs, 90, t, default_registry()[4], 4, 30, {});
  EXPECT_EQ(count(ev, EventKind::Oscillation), 0u);
  EXPECT_EQ(count(ev, EventKind::Transition), 3u);
}

TEST(Detect, EveryEventTouchesAnEligibleCategory) {
  const auto seq = synth::random_motion("e", 3, 300);
  for (const auto& e : events_for(seq)) {
    const auto& t = T()[e.family()];
    const bool from_ok = e.kind != EventKind::Stationary && t.eligible(e.from_category);
    EXPECT_TRUE(from_ok || t.eligible(e.to_category)) << e.code_label();
    if (e.kind == EventKind::Stationary) {
      EXPECT_TRUE(e.duration == DurationBin::Long || e.duration == DurationBin::WholePeriod);
    }
  }
}

TEST(Aggregate, StillPoseHasOnlyStationaryEvents) {
  const auto ev = events_for(synth::still("t", 90));
  ASSERT_FALSE(ev.empty());
  bool knee = false, foot = false;
  for (const auto& e : ev) {
    EXPECT_EQ(e.kind, EventKind::Stationary) << e.code_label();
    knee |= e.code_label() == "L-knee angle" && e.to_label == "straight";
    foot |= e.code_label() == "L-foot ground-contact" && e.to_label == "on the ground";
  }
  EXPECT_TRUE(knee);
  EXPECT_TRUE(foot);
}

TEST(Aggregate, ForwardRampTransitionsIntoGoForward) {
  std::vector<Frame> frames;
  for (int f = 0; f < 90; ++f) {
    auto fr = synth::bent_legs(0);
    const double z = f / 89.0;
    for (auto& p : fr.joints) p.z() += z;
    fr.root_transl.z() += z;
    frames.push_back(fr);
  }
  const auto ev = events_for(synth::from_frames("ramp", 30, frames));
  const auto it = std::find_if(ev.begin(), ev.end(), [](const auto& e) {
    return e.code_label() == "root translation z" && e.kind == EventKind::Transition;
  });
  ASSERT_NE(it, ev.end());
  EXPECT_EQ(it->to_label, "go forward");
  EXPECT_EQ(it->from_label, "transz-ignored");
  EXPECT_GE(it->start_frame, 45u);
}

TEST(Aggregate, TwoFramesHaveNoTransitions) {
  std::vector<Frame> frames = {synth::bent_legs(0), synth::bent_legs(60, Vec3(0, 0, -1))};
  EXPECT_EQ(count(events_for(synth::from_frames("two", 30, frames)), EventKind::Transition), 0u);
}

TEST(Aggregate, KneeSquareWaveOscillates) {
  const auto seq = synth::knee_track("osc", 90, 30, [](std::size_t f) {
    return f >= 45 ? 150.0 : (f / 9) % 2 ? 120.0 : 150.0;
  });
  const auto ev = events_for(seq);
  std::size_t osc = 0, trans = 0;
  for (const auto& e : ev) {
    if (e.code_label() != "L-knee angle") continue;
    osc += e.kind == EventKind::Oscillation;
    trans += e.kind == EventKind::Transition;
  }
  EXPECT_EQ(osc, 1u);
  EXPECT_EQ(trans, 0u);
}

TEST(Aggregate, RaisingMinRunNeverAddsTransitions) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto seq = synth::random_motion("m", 100 + s, 240);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double min_run : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
      AggregationConfig cfg;
      cfg.min_run_seconds = min_run;
      const auto n = count(events_for(seq, cfg), EventKind::Transition);
      EXPECT_LE(n, prev) << "seed " << s << " min_run " << min_run;
      prev = n;
    }
  }
}

TEST(Aggregate, ConfigValidation) {
  AggregationConfig c;
  c.min_run_seconds = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.stationary_min_fraction = 1.5;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(AggregationConfig{}.min_run_frames(30), 8u);
  EXPECT_EQ(AggregationConfig{}.min_run_frames(20), 5u);
}
