#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lcdep/common.hpp"
#include "lcdep/transition.hpp"
#include "lcdep/treebank.hpp"

namespace lcdep {

// Which configurations are counted.
enum class DepthMeasure { kAll, kAfterReduce, kAfterShift };
DepthMeasure measure_from_string(const std::string& s);
const char* to_string(DepthMeasure m);

struct DepthHistogram {
  std::map<int, std::uint64_t> counts;

  void add(int depth, std::uint64_t k = 1) { counts[depth] += k; }
  void merge(const DepthHistogram& o);
  std::uint64_t total() const;
  // Fraction of configurations with depth <= d.
  double cumulative(int d) const;
  bool operator==(const DepthHistogram&) const = default;
};

// Strip punctuation (optional), projectivize, filter by length, append $.
struct PrepareOptions {
  bool strip_punct = false;
  int max_len = 0;
  std::set<std::string> punct_tags = kUdPunctTags;
};
Corpus prepare_corpus(const Corpus& raw, const PrepareOptions& opt);

// Corpus must be projective with the root appended. relax_c applies to the
// left-corner after-reduce measure only.
DepthHistogram depth_histogram(const Corpus& corpus, System system, DepthMeasure measure,
                               int relax_c = 1, int jobs = 1);

struct CoverageRow {
  int bound = 0;
  int relax_c = 1;
  double token_pct = 0;
  double sent_pct = 0;
  std::uint64_t tokens = 0, sentences = 0;
};

enum class CoverageMeasure { kDepthRe, kRaw };

// Left-corner coverage: a token is covered at bound d if the depth right before
// it is consumed is <= d; a sentence if its maximum is <= d. The appended root
// is not counted as a token.
std::vector<CoverageRow> coverage_report(const Corpus& corpus, const std::vector<int>& bounds, int relax_c,
                                         CoverageMeasure measure = CoverageMeasure::kDepthRe, int jobs = 1);

// Histogram over `trials` projectivity-preserving random reorderings.
DepthHistogram random_baseline(const Corpus& corpus, System system, DepthMeasure measure, std::uint64_t seed,
                               int trials, int relax_c = 1, int jobs = 1);

std::string coverage_tsv(const std::vector<CoverageRow>& rows, const std::string& lang, const std::string& system,
                         const std::string& measure, bool header = true);
std::string histogram_tsv(const DepthHistogram& h, const std::string& lang, const std::string& system,
                          const std::string& measure, bool header = true);

}  // namespace lcdep
