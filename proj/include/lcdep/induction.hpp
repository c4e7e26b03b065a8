#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lcdep/lc_chart.hpp"
#include "lcdep/sbg.hpp"
#include "lcdep/treebank.hpp"

namespace lcdep {

// A DMV decision. Root attachments use head "$" and direction left.
struct DmvEvent {
  bool attach = true;
  std::string head, dep;  // dep unused for stop events
  Dir dir = Dir::kLeft;
  bool adjacent = true;  // stop events only
  bool stop = true;      // stop events only

  static DmvEvent attachment(std::string h, std::string d, Dir dir) { return {true, std::move(h), std::move(d), dir}; }
  static DmvEvent stopping(std::string h, Dir dir, bool adjacent, bool stop) {
    return {false, std::move(h), "", dir, adjacent, stop};
  }
};

using FeatureVector = std::vector<int>;  // sorted feature ids

class FeatureIndex {
 public:
  int intern(const std::string& key);
  int find(const std::string& key) const;  // -1 if absent
  const std::string& key(int id) const { return keys_.at(id); }
  int size() const { return static_cast<int>(keys_.size()); }

 private:
  std::map<std::string, int> ids_;
  std::vector<std::string> keys_;
};

std::vector<std::string> feature_keys(const DmvEvent& e);
// Unseen keys get fresh ids.
FeatureVector featurize(const DmvEvent& e, FeatureIndex& index);

// Log-linear DMV over a fixed tagset: every multinomial is a softmax of w·f.
class FeaturizedDmv {
 public:
  explicit FeaturizedDmv(std::vector<std::string> tags);

  const std::vector<std::string>& tags() const { return tags_; }
  int num_tags() const { return static_cast<int>(tags_.size()); }
  const FeatureIndex& index() const { return index_; }
  int num_features() const { return index_.size(); }

  DmvParams params(const std::vector<double>& w) const;

  // Expected complete-data log-likelihood minus |w|^2 / (2 sigma2).
  double objective(const DmvCounts& c, const std::vector<double>& w, double sigma2,
                   std::vector<double>* grad = nullptr) const;

  // L-BFGS ascent of objective() from w0. Never returns a worse point.
  std::vector<double> m_step(const DmvCounts& c, const std::vector<double>& w0, double sigma2, int max_iterations) const;

  // Maps weights of `from` onto this model's features by key; unknown keys are dropped.
  std::vector<double> import_weights(const FeaturizedDmv& from, const std::vector<double>& w) const;

 private:
  std::vector<std::string> tags_;
  FeatureIndex index_;
  std::vector<FeatureVector> attach_f_;  // DmvParams::attach layout
  std::vector<FeatureVector> stop_f_;    // DmvParams::stop layout
  std::vector<FeatureVector> root_f_;
};

DmvParams weights_to_params(const FeaturizedDmv& model, const std::vector<double>& w);

enum class RootConstraint { kNone, kVerbOrNoun, kVerbOtherwiseNoun };
RootConstraint root_constraint_from_string(const std::string& s);
const char* to_string(RootConstraint r);

struct ConstraintConfig {
  bool function_words = false;
  std::set<std::string> function_tags = kUdFunctionTags;
  // ADP must take a dependent; it is then no longer treated as a leaf.
  bool adp_head = false;
  RootConstraint root = RootConstraint::kNone;
  std::set<std::string> verb_tags = {"VERB"};
  std::set<std::string> noun_tags = {"NOUN", "PRON", "PROPN"};
};

// Per-sentence masks, indexed by position 1..n.
struct ConstraintSet {
  std::vector<char> forbidden_head;
  std::vector<char> must_head;
  std::vector<char> allowed_root;
};

ConstraintSet compile_constraints(const std::vector<std::string>& tags, const ConstraintConfig& cfg);

struct ConstrainedSentence {
  SentenceWeights sw;
  std::vector<char> fixed;  // weight entries the constraints pinned; not counted
};

// length_bias multiplies every arc, the root arc included, by exp(-beta(|h-d|-1)).
ConstrainedSentence apply_constraints(const DmvParams& p, const std::vector<int>& tag_ids, const ConstraintSet& cs,
                                      double length_bias = 0.0);

// Counts of one E-step with attachment weights 1/|i-j| and uniform stop and root weights.
DmvCounts harmonic_counts(const std::vector<std::vector<std::string>>& corpus, const std::vector<std::string>& tags,
                          const ConstraintConfig& cc = {});
DmvParams harmonic_init(const std::vector<std::vector<std::string>>& corpus, const std::vector<std::string>& tags,
                        const ConstraintConfig& cc = {});

enum class InitKind { kUniform, kHarmonic };

struct TrainConfig {
  InitKind init = InitKind::kUniform;
  DepthPolicy policy;  // unbounded by default
  double length_bias = 0.0;
  ConstraintConfig constraints;
  int em_iterations = 50;
  int lbfgs_iterations = 100;
  double sigma2 = 10.0;
  double tolerance = 1e-6;
  int jobs = 1;

  std::string describe() const;  // space-separated key=value
};

struct IterationLog {
  int iter = 0;
  double objective = 0;
  int skipped = 0;
};

struct DmvModel {
  FeaturizedDmv features{std::vector<std::string>{}};
  std::vector<double> w;
  DmvParams params;
  std::string config;  // echoed into the model file

  // Same weights over a tagset extended by `more`.
  DmvModel with_tags(const std::vector<std::string>& more) const;
};

struct TrainResult {
  DmvModel model;
  std::vector<IterationLog> log;
  bool converged = false;
};

struct EStepOutput {
  DmvCounts counts;
  double log_likelihood = 0;  // sum over sentences with licensed mass
  int skipped = 0;
};

// Expected counts under q for the given parameters.
EStepOutput constrained_e_step(const std::vector<std::vector<int>>& corpus,
                               const std::vector<std::vector<std::string>>& tags, const DmvParams& p,
                               const TrainConfig& cfg);

// Corpus entries are POS sequences without $.
TrainResult train(const std::vector<std::vector<std::string>>& corpus, const TrainConfig& cfg);
std::vector<std::vector<std::string>> pos_sequences(const Corpus& corpus);

std::string metrics_tsv(const std::vector<IterationLog>& log);
std::string write_model(const DmvModel& m);
DmvModel read_model(const std::string& text);

// Viterbi parse under the plain DMV. With `constraints` the parameter
// constraints and depth policy are applied at decoding too.
std::vector<int> decode(const DmvModel& m, const std::vector<std::string>& tags, const TrainConfig* constraints = nullptr);
Corpus parse_corpus(const DmvModel& m, const Corpus& corpus, int jobs = 1);

// Percentage of non-punctuation tokens whose predicted head matches gold.
// Heads pointing at an appended $ count as root attachments.
double evaluate_uas(const Corpus& predicted, const Corpus& gold,
                    const std::set<std::string>& punct_tags = kUdPunctTags);
double evaluate_uas(const std::vector<DepTree>& predicted, const std::vector<DepTree>& gold,
                    const std::set<std::string>& punct_tags = kUdPunctTags);

}  // namespace lcdep
