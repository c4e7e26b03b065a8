#include "lcdep/analysis.hpp"

#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lcdep/parallel.hpp"

namespace lcdep {

DepthMeasure measure_from_string(const std::string& s) {
  if (s == "all" || s == "raw") return DepthMeasure::kAll;
  if (s == "depth-re" || s == "re") return DepthMeasure::kAfterReduce;
  if (s == "depth-sh" || s == "sh") return DepthMeasure::kAfterShift;
  throw std::invalid_argument("unknown depth measure '" + s + "'");
}

const char* to_string(DepthMeasure m) {
  switch (m) {
    case DepthMeasure::kAll: return "all";
    case DepthMeasure::kAfterReduce: return "depth-re";
    case DepthMeasure::kAfterShift: return "depth-sh";
  }
  return "?";
}

void DepthHistogram::merge(const DepthHistogram& o) {
  for (const auto& [d, k] : o.counts) counts[d] += k;
}

std::uint64_t DepthHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [d, k] : counts) t += k;
  return t;
}

double DepthHistogram::cumulative(int d) const {
  std::uint64_t t = total(), c = 0;
  if (t == 0) return 1.0;
  for (const auto& [depth, k] : counts)
    if (depth <= d) c += k;
  return static_cast<double>(c) / static_cast<double>(t);
}

Corpus prepare_corpus(const Corpus& raw, const PrepareOptions& opt) {
  Corpus out;
  out.pos_column = raw.pos_column;
  out.max_len = opt.max_len;
  for (const auto& t : raw.sentences) {
    DepTree s = opt.strip_punct ? strip_punctuation(t, opt.punct_tags) : t;
    if (s.empty()) continue;
    if (opt.max_len > 0 && s.size() > opt.max_len) continue;
    out.sentences.push_back(append_root(projectivize(s)));
  }
  return out;
}

namespace {

DepthHistogram sentence_histogram(const DepTree& t, System system, DepthMeasure measure, int relax_c) {
  DepthHistogram h;
  OracleTrace tr = run_oracle(t, system);
  for (size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& s = tr.steps[i];
    if (measure == DepthMeasure::kAfterReduce && s.phase != StepPhase::kReduce) continue;
    if (measure == DepthMeasure::kAfterShift && s.phase != StepPhase::kShift) continue;
    int d = measure == DepthMeasure::kAfterReduce ? relaxed_depth_re(tr, i, relax_c) : s.depth;
    h.add(d);
  }
  return h;
}

DepthHistogram histogram_of(const std::vector<DepTree>& trees, System system, DepthMeasure measure, int relax_c,
                            int jobs) {
  std::vector<DepthHistogram> parts(trees.size());
  parallel_for(trees.size(), jobs, [&](size_t i) {
    try {
      parts[i] = sentence_histogram(trees[i], system, measure, relax_c);
    } catch (const std::exception& e) {
      throw std::runtime_error("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  });
  DepthHistogram h;
  for (const auto& p : parts) h.merge(p);
  return h;
}

}  // namespace

DepthHistogram depth_histogram(const Corpus& corpus, System system, DepthMeasure measure, int relax_c, int jobs) {
  return histogram_of(corpus.sentences, system, measure, relax_c, jobs);
}

std::vector<CoverageRow> coverage_report(const Corpus& corpus, const std::vector<int>& bounds, int relax_c,
                                         CoverageMeasure measure, int jobs) {
  struct PerSentence {
    std::vector<int> token_depth;
    int max_depth = 1;
  };
  std::vector<PerSentence> per(corpus.sentences.size());
  parallel_for(per.size(), jobs, [&](size_t i) {
    const DepTree& t = corpus.sentences[i];
    OracleTrace tr;
    try {
      tr = run_oracle(t, System::kLeftCorner);
    } catch (const std::exception& e) {
      throw std::runtime_error("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
    int n = t.size() - (t.root_appended() ? 1 : 0);
    auto& p = per[i];
    if (measure == CoverageMeasure::kDepthRe) {
      for (int e = 1; e <= n; ++e) p.token_depth.push_back(token_depth_re(tr, e, relax_c));
      p.max_depth = relaxed_depth_re_max(tr, relax_c);
    } else {
      int mx = 0;
      for (const auto& s : tr.steps) mx = std::max(mx, s.depth);
      for (int e = 1; e <= n; ++e) p.token_depth.push_back(tr.steps[tr.token_step[e]].depth);
      p.max_depth = mx;
    }
  });
  std::vector<CoverageRow> rows;
  for (int b : bounds) {
    CoverageRow r;
    r.bound = b;
    r.relax_c = relax_c;
    std::uint64_t tok_cov = 0, sent_cov = 0;
    for (const auto& p : per) {
      r.tokens += p.token_depth.size();
      for (int d : p.token_depth) tok_cov += d <= b;
      ++r.sentences;
      sent_cov += p.max_depth <= b;
    }
    r.token_pct = r.tokens ? 100.0 * static_cast<double>(tok_cov) / static_cast<double>(r.tokens) : 100.0;
    r.sent_pct = r.sentences ? 100.0 * static_cast<double>(sent_cov) / static_cast<double>(r.sentences) : 100.0;
    rows.push_back(r);
  }
  return rows;
}

DepthHistogram random_baseline(const Corpus& corpus, System system, DepthMeasure measure, std::uint64_t seed,
                               int trials, int relax_c, int jobs) {
  std::mt19937_64 rng(seed);
  std::vector<DepTree> shuffled;
  for (int t = 0; t < trials; ++t)
    for (const auto& s : corpus.sentences) shuffled.push_back(random_reorder(s, rng()));
  return histogram_of(shuffled, system, measure, relax_c, jobs);
}

namespace {

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string bound_str(int b) { return b == kUnbounded ? "inf" : std::to_string(b); }

}  // namespace

std::string coverage_tsv(const std::vector<CoverageRow>& rows, const std::string& lang, const std::string& system,
                         const std::string& measure, bool header) {
  std::ostringstream out;
  if (header) out << "lang\tsystem\tmeasure\tbound\trelaxC\ttokenPct\tsentPct\n";
  for (const auto& r : rows)
    out << lang << '\t' << system << '\t' << measure << '\t' << bound_str(r.bound) << '\t' << r.relax_c << '\t'
        << fmt1(r.token_pct) << '\t' << fmt1(r.sent_pct) << '\n';
  return out.str();
}

std::string histogram_tsv(const DepthHistogram& h, const std::string& lang, const std::string& system,
                          const std::string& measure, bool header) {
  std::ostringstream out;
  if (header) out << "lang\tsystem\tmeasure\tdepth\tcount\tcumulative\n";
  for (const auto& [d, k] : h.counts) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", h.cumulative(d));
    out << lang << '\t' << system << '\t' << measure << '\t' << d << '\t' << k << '\t' << buf << '\n';
  }
  return out.str();
}

}  // namespace lcdep
