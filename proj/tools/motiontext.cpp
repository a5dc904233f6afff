// motiontext: caption motion files, dump their posecodes and events, and
// compare corpus statistics.
//
//   motiontext caption data/ --out captions --seed 42 --jobs 8
//   motiontext codes walk.json --events --out dump
//   motiontext stats --compare corpusA corpusB --sample 10000 --out report
//   motiontext dump-config > defaults.json

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "motiontext/motiontext.hpp"

namespace fs = std::filesystem;
using namespace motiontext;

namespace {

struct SharedFlags {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string thresholds_file;
  std::string bank_file;
  std::string aggregation_file;
  std::string layout;
  std::string ground = "zero";
  std::string out = ".";
  bool raw = false;
  bool quiet = false;
};

void add_shared(CLI::App* cmd, SharedFlags& f, bool captioning) {
  cmd->add_option("--seed", f.seed, "Global seed")->capture_default_str();
  cmd->add_option("--jobs,-j", f.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--thresholds", f.thresholds_file, "Threshold override file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--layout", f.layout, "Skeleton layout name or layout file");
  cmd->add_option("--ground", f.ground, "Ground height: zero or auto")
      ->check(CLI::IsMember({"zero", "auto"}))
      ->capture_default_str();
  cmd->add_option("--out,-o", f.out, "Output directory")->capture_default_str();
  cmd->add_flag("--quiet,-q", f.quiet, "No progress on stderr");
  if (captioning) {
    cmd->add_option("--bank", f.bank_file, "Phrase bank file merged over the defaults (JSON)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--aggregation", f.aggregation_file,
                    "Aggregation constants and optional \"skip_policy\" (JSON)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--raw", f.raw, "Slot-concatenated output instead of sentences");
  }
}

// Config files are read before any input is touched; failures are usage errors.
CaptionConfig build_config(const SharedFlags& f) {
  CaptionConfig c;
  try {
    if (!f.thresholds_file.empty()) c.thresholds = thresholds_from_json(load_json_file(f.thresholds_file));
    if (!f.bank_file.empty()) c.bank.merge(VariabilityBank::from_json(load_json_file(f.bank_file)));
    if (!f.aggregation_file.empty()) {
      auto j = load_json_file(f.aggregation_file);
      if (j.contains("skip_policy")) {
        c.policy = policy_from_json(j.at("skip_policy"));
        j.erase("skip_policy");
      }
      c.aggregation = aggregation_from_json(j.contains("aggregation") ? j.at("aggregation") : j);
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  c.ground = f.ground == "auto" ? GroundMode::Auto : GroundMode::Zero;
  c.raw = f.raw;
  return c;
}

BatchOptions batch_options(const SharedFlags& f, const std::vector<std::string>& inputs) {
  BatchOptions o;
  o.inputs.assign(inputs.begin(), inputs.end());
  o.out_dir = f.out;
  o.seed = f.seed;
  o.jobs = f.jobs;
  o.layout = f.layout;
  o.config = build_config(f);
  o.quiet = f.quiet;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based motion captioning"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SharedFlags caption_flags, codes_flags, stats_flags, dump_flags;
  std::vector<std::string> caption_inputs, codes_inputs, stats_inputs;

  auto* caption = app.add_subcommand("caption", "Write one caption per motion file");
  caption->add_option("inputs", caption_inputs, "Motion files or directories")->required();
  add_shared(caption, caption_flags, true);

  bool frames_only = false, events_only = false;
  auto* codes = app.add_subcommand("codes", "Dump per-frame posecodes and motioncode events as JSON lines");
  codes->add_option("inputs", codes_inputs, "Motion files or directories")->required();
  add_shared(codes, codes_flags, true);
  auto* frames_flag = codes->add_flag("--frames", frames_only, "Emit per-frame posecode records");
  codes->add_flag("--events", events_only, "Emit motioncode events")->excludes(frames_flag);

  bool compare_mode = false;
  std::size_t sample_n = 0;
  auto* stats = app.add_subcommand("stats", "Category histograms for a corpus, or a two-corpus comparison");
  stats->add_option("corpora", stats_inputs, "Corpus directories or files")->required();
  stats->add_flag("--compare", compare_mode, "Compare exactly two corpora");
  stats->add_option("--sample", sample_n, "Sequences sampled per corpus (0 = all)")->capture_default_str();
  add_shared(stats, stats_flags, false);

  auto* dump = app.add_subcommand("dump-config", "Print the effective configuration as JSON");
  add_shared(dump, dump_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*caption) return run_caption(batch_options(caption_flags, caption_inputs)).exit_code;
    if (*codes) {
      auto o = batch_options(codes_flags, codes_inputs);
      if (frames_only) o.emit_events = false;
      if (events_only) o.emit_frames = false;
      return run_codes(o).exit_code;
    }
    if (*stats) {
      StatsOptions o;
      o.corpora.assign(stats_inputs.begin(), stats_inputs.end());
      o.compare = compare_mode;
      o.sample_n = sample_n;
      o.seed = stats_flags.seed;
      o.jobs = stats_flags.jobs;
      o.out_dir = stats_flags.out;
      o.layout = stats_flags.layout;
      o.thresholds = build_config(stats_flags).thresholds;
      o.ground = stats_flags.ground == "auto" ? GroundMode::Auto : GroundMode::Zero;
      return run_stats(o);
    }
    if (*dump) {
      std::cout << dump_config(build_config(dump_flags)).dump(2) << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitUsage;
}
