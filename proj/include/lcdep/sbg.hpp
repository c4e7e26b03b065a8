#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lcdep/treebank.hpp"

namespace lcdep {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b);

enum class Dir { kLeft = 0, kRight = 1 };

enum class Semiring { kLogSum, kMax, kCount };
Semiring semiring_from_string(const std::string& s);

// DMV parameters in log space over a tag vocabulary. Automaton state s is 0
// before the first dependent in a direction (adjacent) and 1 afterwards.
struct DmvParams {
  std::vector<std::string> tags;
  std::vector<double> attach;  // log θ_a(d | h, dir), [(h*2+dir)*T + d]
  std::vector<double> stop;    // log θ_s(dec | h, dir, s), [((h*2+dir)*2+s)*2 + dec], dec 0 = stop
  std::vector<double> root;    // log θ_a(d | $, left)

  int num_tags() const { return static_cast<int>(tags.size()); }
  int tag_id(const std::string& t) const;  // throws std::out_of_range
  std::vector<int> tag_ids(const DepTree& sentence) const;  // drops an appended $

  double& att(int h, Dir dir, int d) { return attach[(h * 2 + static_cast<int>(dir)) * num_tags() + d]; }
  double att(int h, Dir dir, int d) const { return attach[(h * 2 + static_cast<int>(dir)) * num_tags() + d]; }
  double& st(int h, Dir dir, int s, bool stop_) { return stop[((h * 2 + static_cast<int>(dir)) * 2 + s) * 2 + !stop_]; }
  double st(int h, Dir dir, int s, bool stop_) const {
    return stop[((h * 2 + static_cast<int>(dir)) * 2 + s) * 2 + !stop_];
  }

  static DmvParams uniform(const std::vector<std::string>& tags);
  static DmvParams random(const std::vector<std::string>& tags, std::uint64_t seed, double concentration = 1.0);
  // Throws std::invalid_argument unless every multinomial sums to 1 within tol.
  void validate(double tol = 1e-9) const;
};

std::string write_dmv(const DmvParams& p);
DmvParams read_dmv(const std::string& text);

// Two-state head automaton of one tag and direction. State q0 is initial,
// every transition leads to q1.
struct HeadAutomaton {
  double init[2] = {0.0, kNegInf};
  double fin[2] = {kNegInf, kNegInf};
  std::vector<double> trans[2];  // log weight of q --d--> q1, per dependent tag
};

struct AutomatonSet {
  std::vector<HeadAutomaton> left, right;  // per head tag
  HeadAutomaton root;                       // L_$: exactly one dependent
};

AutomatonSet dmv_to_sbg(const DmvParams& p);

// Automaton weights instantiated on one sentence, indexed by token position.
// Tokens are 1..n and $ sits at n+1. A term id is an index into w.
struct SentenceWeights {
  int n = 0;
  std::vector<double> w;
  std::vector<char> must_head;  // size n+2; token must end up with a dependent

  static SentenceWeights blank(int n);
  int width() const { return n + 2; }
  int att_id(Dir dir, int h, int s, int d) const {
    return ((static_cast<int>(dir) * width() + h) * 2 + s) * width() + d;
  }
  int fin_id(Dir dir, int h, int s) const {
    return 4 * width() * width() + (static_cast<int>(dir) * width() + h) * 2 + s;
  }
  double att(Dir dir, int h, int s, int d) const { return w[att_id(dir, h, s, d)]; }
  double fin(Dir dir, int h, int s) const { return w[fin_id(dir, h, s)]; }
  double& att(Dir dir, int h, int s, int d) { return w[att_id(dir, h, s, d)]; }
  double& fin(Dir dir, int h, int s) { return w[fin_id(dir, h, s)]; }

  struct Event {
    bool attach = false;
    Dir dir = Dir::kLeft;
    int h = 0, s = 0, d = 0;
  };
  Event decode(int id) const;
};

SentenceWeights sentence_weights(const AutomatonSet& a, const std::vector<int>& tag_ids);
SentenceWeights dmv_sentence_weights(const DmvParams& p, const std::vector<int>& tag_ids);

// heads[d] for d in 1..n; the sentence root has head n+1. Returns -inf for
// trees the weights do not license.
double tree_log_weight(const SentenceWeights& sw, const std::vector<int>& heads);

// Expected number of times each weight entry is used, same layout as w.
struct EventCounts {
  std::vector<double> c;
  double log_z = kNegInf;
  bool skipped = true;  // zero licensed mass
};

struct ViterbiResult {
  std::vector<int> heads;  // size n+1, heads[0] unused, root -> n+1; empty if nothing licensed
  double score = kNegInf;
};

double eisner_inside(const SentenceWeights& sw, Semiring sr = Semiring::kLogSum);
EventCounts eisner_expected_counts(const SentenceWeights& sw);
// Ties go to the tree with the smaller sum of head positions, then the smaller
// total arc length.
ViterbiResult eisner_viterbi(const SentenceWeights& sw);

// Tag-level DMV sufficient statistics.
struct DmvCounts {
  int T = 0;
  std::vector<double> attach, stop, root;  // layouts as in DmvParams

  explicit DmvCounts(int num_tags = 0);
  void merge(const DmvCounts& o);
};

// Converts position-level counts: attach counts sum over q0/q1, non-stop
// counts marginalize dependents. Entries in `fixed` (same layout as w) are
// not counted.
void add_dmv_counts(const SentenceWeights& sw, const EventCounts& ec, const std::vector<int>& tag_ids,
                    DmvCounts& out, const std::vector<char>* fixed = nullptr);

// Normalizes counts; contexts without counts keep their previous values.
DmvParams normalize_counts(const DmvCounts& c, const DmvParams& prev);

struct EStepResult {
  DmvCounts counts;
  double log_likelihood = 0;
  int skipped = 0;
};
EStepResult dmv_e_step(const std::vector<std::vector<int>>& corpus, const DmvParams& p, int jobs = 1);
DmvParams em_step(const std::vector<std::vector<int>>& corpus, const DmvParams& p, double* log_likelihood = nullptr,
                  int jobs = 1);

}  // namespace lcdep
