#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lcdep/common.hpp"
#include "lcdep/transition.hpp"
#include "lcdep/treebank.hpp"

namespace lcdep {

enum class FeatureSet { kFull, kLimited };
FeatureSet feature_set_from_string(const std::string& s);
const char* to_string(FeatureSet f);

// Which configurations the depth bound applies to: all of them, or only
// those reached by a reduce step.
enum class BoundMeasure { kRaw, kDepthRe };
BoundMeasure bound_measure_from_string(const std::string& s);
const char* to_string(BoundMeasure m);

// A parser state of any of the three systems.
struct ParseState {
  Configuration lc;
  StdConfig std;
  double score = 0;
  std::vector<int> actions;
  int max_depth = 0;
};

// Number of actions of a system; ids follow LcAction or StdAction order.
int num_actions(System s);
const char* action_name(System s, int a);

// Template names of a system's feature set, e.g. "s0.p.t+q0.t".
std::vector<std::string> feature_templates(System s, FeatureSet f);

// Hashed features of the state; the sentence supplies word forms and tags.
// Absent addresses contribute a NULL value.
std::vector<std::uint64_t> extract_features(const ParseState& st, const DepTree& sentence, System s, FeatureSet f);

// Readable "template=value|value" strings, for inspection and tests.
std::vector<std::string> describe_features(const ParseState& st, const DepTree& sentence, System s, FeatureSet f);

class PerceptronWeights {
 public:
  explicit PerceptronWeights(int actions = 6) : actions_(actions) {}

  int actions() const { return actions_; }
  double score(const std::vector<std::uint64_t>& feats, int action) const;
  void scores(const std::vector<std::uint64_t>& feats, double* out) const;
  // w[f][a] += delta at averaging time `clock`.
  void update(std::uint64_t f, int action, double delta, std::int64_t clock);
  // Averaged weights after `clock` ticks: w - u / clock.
  PerceptronWeights averaged(std::int64_t clock) const;
  size_t size() const { return w_.size(); }

  std::string write() const;  // "f:<hex>/<action>\t<weight>" lines, sorted
  void read_line(const std::string& key, int action, double value);
  bool operator==(const PerceptronWeights& o) const;

 private:
  struct Entry {
    std::vector<double> w, u;
  };
  int actions_;
  std::unordered_map<std::uint64_t, Entry> w_;
};

struct ParserOptions {
  System system = System::kLeftCorner;
  FeatureSet features = FeatureSet::kFull;
  int beam = 8;
  int depth_bound = kUnbounded;
  BoundMeasure measure = BoundMeasure::kDepthRe;
};

struct SupervisedModel {
  ParserOptions options;
  PerceptronWeights weights;
};

// Legal successors, ids in action order.
std::vector<int> legal_actions(const ParseState& st, System s, const DepTree& sentence);
ParseState apply_action(const ParseState& st, int a, System s);
bool is_terminal(const ParseState& st, System s);
// Whether the step that produced `st` is subject to the bound under `m`.
bool within_bound(const ParseState& st, System s, int last_action, int bound, BoundMeasure m);

// Sentence must have $ appended. Ties go to the lexicographically smaller
// action history.
DepTree beam_decode(const DepTree& sentence, const SupervisedModel& model);
// `observer` sees the beam after every expansion.
using BeamObserver = std::function<void(const std::vector<ParseState>&)>;
DepTree beam_decode(const DepTree& sentence, const PerceptronWeights& w, const ParserOptions& opt,
                    const BeamObserver& observer = nullptr);
Corpus parse_supervised(const SupervisedModel& model, const Corpus& corpus, int jobs = 1);

// Gold action ids of a projective tree with $ appended.
std::vector<int> gold_actions(const DepTree& gold, System s);

struct PerceptronLog {
  int epoch = 0;
  int updates = 0;
  double train_uas = 0;  // of the beam output during the epoch
};

// Max-violation averaged perceptron. Sentence order is shuffled per epoch
// from `seed`. Sentences must be projective with $ appended.
SupervisedModel train_perceptron(const Corpus& corpus, const ParserOptions& opt, int epochs, std::uint64_t seed,
                                 std::vector<PerceptronLog>* log = nullptr);

std::string write_supervised(const SupervisedModel& m);
SupervisedModel read_supervised(const std::string& text);

}  // namespace lcdep
