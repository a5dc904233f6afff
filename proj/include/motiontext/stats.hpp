#pragma once

// Corpus-level posecode category distributions and two-corpus comparison.
//
// Tallies are plain integer counts, so partial results merge by addition in
// any order. Root-relative codes (orientation, translation) skip frame 0,
// which is their reference frame and always reads as zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ranges>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "motiontext/error.hpp"
#include "motiontext/motion.hpp"
#include "motiontext/parallel.hpp"
#include "motiontext/posecode.hpp"
#include "motiontext/rng.hpp"

namespace motiontext {

/// Category counts for one code. The last bucket counts ambiguous frames.
struct CorpusHistogram {
  std::string code_label;
  std::vector<std::string> categories;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  static CorpusHistogram empty_for(const PosecodeDef& def, const FamilyThresholds& t) {
    CorpusHistogram h;
    h.code_label = def.label;
    h.categories = t.categories;
    h.categories.emplace_back(kAmbiguousLabel);
    h.counts.assign(h.categories.size(), 0);
    return h;
  }

  void count(CategoryIndex c) {
    ++counts[c == kAmbiguous ? counts.size() - 1 : static_cast<std::size_t>(c)];
    ++total;
  }

  void merge(const CorpusHistogram& other) {
    if (other.counts.size() != counts.size()) throw ValidationError("histogram shape mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
  }

  std::vector<double> frequencies() const {
    std::vector<double> f(counts.size(), 0.0);
    if (total == 0) return f;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      f[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return f;
  }
};

/// Histograms for every code of a registry.
class HistogramSet {
 public:
  HistogramSet(std::span<const PosecodeDef> registry, const ThresholdTable& table)
      : registry_(registry), table_(&table) {
    histograms_.reserve(registry.size());
    for (const auto& def : registry) histograms_.push_back(CorpusHistogram::empty_for(def, table[def.family]));
  }

  void tally(const MotionSequence& seq, GroundMode ground = GroundMode::Zero) {
    const auto states = extract_all(seq, registry_, *table_, estimate_ground(seq, ground));
    for (std::size_t c = 0; c < registry_.size(); ++c) {
      const std::size_t first = is_root_relative(registry_[c].family) ? 1 : 0;
      const auto track = states.track(c);
      for (std::size_t f = first; f < track.size(); ++f) histograms_[c].count(track[f]);
    }
    ++sequences_;
  }

  void merge(const HistogramSet& other) {
    if (other.histograms_.size() != histograms_.size()) throw ValidationError("histogram set mismatch");
    for (std::size_t i = 0; i < histograms_.size(); ++i) histograms_[i].merge(other.histograms_[i]);
    sequences_ += other.sequences_;
  }

  const std::vector<CorpusHistogram>& histograms() const noexcept { return histograms_; }
  std::size_t sequences() const noexcept { return sequences_; }

  const CorpusHistogram& at(std::string_view code_label) const {
    for (const auto& h : histograms_) {
      if (h.code_label == code_label) return h;
    }
    throw ValidationError("unknown posecode '" + std::string(code_label) + "'");
  }

 private:
  std::span<const PosecodeDef> registry_;
  const ThresholdTable* table_;
  std::vector<CorpusHistogram> histograms_;
  std::size_t sequences_ = 0;
};

/// Streams a range of sequences through one code's histogram.
template <std::ranges::input_range Corpus>
CorpusHistogram histogram(Corpus&& corpus, std::string_view code_label, const ThresholdTable& table,
                          std::span<const PosecodeDef> registry = default_registry(),
                          GroundMode ground = GroundMode::Zero) {
  const auto it = std::find_if(registry.begin(), registry.end(),
                               [&](const PosecodeDef& d) { return d.label == code_label; });
  if (it == registry.end()) throw ValidationError("unknown posecode '" + std::string(code_label) + "'");
  const std::span<const PosecodeDef> one(&*it, 1);
  HistogramSet set(one, table);
  for (const MotionSequence& seq : corpus) set.tally(seq, ground);
  if (set.sequences() == 0) throw EmptyCorpus();
  return set.histograms().front();
}

/// A corpus addressed by index; `load(i)` may read from disk.
struct Corpus {
  std::size_t size = 0;
  std::function<MotionSequence(std::size_t)> load;
};

/// `k` distinct indices from [0, n), ascending; deterministic in `seed`.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw SampleTooLarge(k, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CounterRng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline HistogramSet tally_corpus(const Corpus& corpus, std::span<const std::size_t> indices,
                                 std::span<const PosecodeDef> registry, const ThresholdTable& table,
                                 GroundMode ground, std::size_t jobs) {
  if (indices.empty()) throw EmptyCorpus();
  jobs = std::max<std::size_t>(1, std::min(jobs, indices.size()));
  std::vector<HistogramSet> partial(jobs, HistogramSet(registry, table));
  parallel_for(indices.size(), jobs, [&](std::size_t i, std::size_t w) {
    partial[w].tally(corpus.load(indices[i]), ground);
  });
  HistogramSet total(registry, table);
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Half the L1 distance between two frequency vectors.
inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ValidationError("frequency vectors differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

struct CodeComparison {
  std::string code_label;
  std::vector<std::string> categories;
  std::vector<std::uint64_t> counts_a;
  std::vector<std::uint64_t> counts_b;
  std::vector<double> freq_a;
  std::vector<double> freq_b;
  std::vector<double> deltas;  // freq_b - freq_a
  double tv_distance = 0.0;
};

struct ComparisonReport {
  std::size_t sample_a = 0;
  std::size_t sample_b = 0;
  std::vector<CodeComparison> codes;

  const CodeComparison& at(std::string_view code_label) const {
    for (const auto& c : codes) {
      if (c.code_label == code_label) return c;
    }
    throw ValidationError("unknown posecode '" + std::string(code_label) + "'");
  }
};

inline ComparisonReport compare_histograms(const HistogramSet& a, const HistogramSet& b) {
  ComparisonReport report;
  report.sample_a = a.sequences();
  report.sample_b = b.sequences();
  for (std::size_t i = 0; i < a.histograms().size(); ++i) {
    const auto& ha = a.histograms()[i];
    const auto& hb = b.histograms()[i];
    CodeComparison c;
    c.code_label = ha.code_label;
    c.categories = ha.categories;
    c.counts_a = ha.counts;
    c.counts_b = hb.counts;
    c.freq_a = ha.frequencies();
    c.freq_b = hb.frequencies();
    c.deltas.resize(c.freq_a.size());
    for (std::size_t k = 0; k < c.deltas.size(); ++k) c.deltas[k] = c.freq_b[k] - c.freq_a[k];
    c.tv_distance = total_variation(c.freq_a, c.freq_b);
    report.codes.push_back(std::move(c));
  }
  return report;
}

/// Samples `sample_n` sequences from each corpus (0 = use everything) and
/// compares their per-code distributions.
inline ComparisonReport compare(const Corpus& a, const Corpus& b, std::span<const PosecodeDef> registry,
                                const ThresholdTable& table, std::size_t sample_n, std::uint64_t seed,
                                GroundMode ground = GroundMode::Zero, std::size_t jobs = 1) {
  if (a.size == 0 || b.size == 0) throw EmptyCorpus();
  const auto pick = [&](const Corpus& c, std::uint64_t stream) {
    if (sample_n == 0) {
      std::vector<std::size_t> all(c.size);
      std::iota(all.begin(), all.end(), std::size_t{0});
      return all;
    }
    return sample_indices(c.size, sample_n, splitmix64(seed ^ stream));
  };
  const auto ia = pick(a, 0xA);
  const auto ib = pick(b, 0xB);
  return compare_histograms(tally_corpus(a, ia, registry, table, ground, jobs),
                            tally_corpus(b, ib, registry, table, ground, jobs));
}

namespace detail {
inline std::string fmt_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace detail

inline std::string histograms_csv(const HistogramSet& set) {
  std::string out = "code,category,count,frequency\n";
  for (const auto& h : set.histograms()) {
    const auto f = h.frequencies();
    for (std::size_t i = 0; i < h.categories.size(); ++i) {
      out += detail::csv_field(h.code_label) + "," + detail::csv_field(h.categories[i]) + "," +
             std::to_string(h.counts[i]) + "," + detail::fmt_double(f[i]) + "\n";
    }
  }
  return out;
}

inline nlohmann::json histograms_json(const HistogramSet& set) {
  nlohmann::json codes = nlohmann::json::array();
  for (const auto& h : set.histograms()) {
    codes.push_back({{"code", h.code_label},
                     {"categories", h.categories},
                     {"counts", h.counts},
                     {"total", h.total},
                     {"frequencies", h.frequencies()}});
  }
  return {{"sequences", set.sequences()}, {"codes", std::move(codes)}};
}

inline std::string comparison_csv(const ComparisonReport& r) {
  std::string out = "code,category,count_a,freq_a,count_b,freq_b,delta,tv_distance\n";
  for (const auto& c : r.codes) {
    for (std::size_t i = 0; i < c.categories.size(); ++i) {
      out += detail::csv_field(c.code_label) + "," + detail::csv_field(c.categories[i]) + "," +
             std::to_string(c.counts_a[i]) + "," + detail::fmt_double(c.freq_a[i]) + "," +
             std::to_string(c.counts_b[i]) + "," + detail::fmt_double(c.freq_b[i]) + "," +
             detail::fmt_double(c.deltas[i]) + "," + detail::fmt_double(c.tv_distance) + "\n";
    }
  }
  return out;
}

inline nlohmann::json comparison_json(const ComparisonReport& r) {
  nlohmann::json codes = nlohmann::json::array();
  for (const auto& c : r.codes) {
    codes.push_back({{"code", c.code_label},
                     {"categories", c.categories},
                     {"counts_a", c.counts_a},
                     {"counts_b", c.counts_b},
                     {"freq_a", c.freq_a},
                     {"freq_b", c.freq_b},
                     {"deltas", c.deltas},
                     {"tv_distance", c.tv_distance}});
  }
  return {{"sample_a", r.sample_a}, {"sample_b", r.sample_b}, {"codes", std::move(codes)}};
}

}  // namespace motiontext
