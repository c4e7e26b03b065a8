#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lcdep/treebank.hpp"

namespace lcdep {

// A right spine. When has_dummy, the spine ends in a predicted node whose
// collected left dependents are in lambda.
struct Spine {
  std::vector<int> nodes;
  bool has_dummy = false;
  std::vector<int> lambda;
  int start = 0;  // buffer position of the Shift that created this element

  bool complete() const { return !has_dummy; }
  // Head of the spine, or 0 when the spine is rooted at a dummy.
  int head() const { return nodes.empty() ? 0 : nodes.front(); }
  bool operator==(const Spine&) const = default;
};

enum class LcAction { kShift, kInsert, kLeftPred, kRightPred, kLeftComp, kRightComp };
const char* to_string(LcAction a);
bool is_shift_type(LcAction a);

struct Configuration {
  std::vector<Spine> stack;
  int beta = 1;  // next buffer position (1-based)
  int n = 0;
  std::vector<int> heads;  // heads[d] = h for arc (h, d); 0 = none. Size n+1.
  bool expect_shift = true;

  static Configuration initial(int n);
  bool buffer_empty() const { return beta > n; }
  bool terminal() const { return buffer_empty(); }
  // One complete element and an exhausted buffer.
  bool success() const { return terminal() && stack.size() == 1 && stack[0].complete(); }
  int depth() const { return static_cast<int>(stack.size()); }
  bool operator==(const Configuration&) const = default;
};

class TransitionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Why the action cannot apply, or empty if it can.
std::string lc_check(const Configuration& c, LcAction a);
Configuration lc_apply(const Configuration& c, LcAction a);
// The oracle's next action given gold heads (gold[d] = head, 0 for none; size n+1).
LcAction lc_oracle(const Configuration& c, const std::vector<int>& gold);

// Reads the tree off a terminal configuration, collapsing dummies and
// attaching leftover fragments to the root ($ when appended, else 0).
DepTree postprocess_terminal(const Configuration& c, const DepTree& sentence);

enum class System { kLeftCorner, kArcStandard, kArcEager };
const char* to_string(System s);
System system_from_string(const std::string& s);

enum class StepPhase { kShift, kReduce };

struct TraceStep {
  std::string action;
  int depth = 0;
  StepPhase phase = StepPhase::kShift;
  // Left-corner only: ids of stack elements after the step, bottom first.
  std::vector<int> elements;
};

struct OracleTrace {
  System system = System::kLeftCorner;
  int n = 0;
  std::vector<TraceStep> steps;
  std::vector<int> heads;  // reconstructed
  int max_depth_re = 0;
  int max_depth_sh = 0;
  // Left-corner only: per element, the shift position that created it and the
  // buffer position at which it was composed away (0 if never).
  std::vector<int> element_start;
  std::vector<int> element_composed;
  // Per token (1-based): step index of the shift-type action consuming it.
  std::vector<int> token_step;
};

// gold is the sentence's tree (root conventionally appended). Throws on
// non-projective gold.
OracleTrace run_oracle(const DepTree& gold, System system);

int depth_re_max(const OracleTrace& t);
int depth_sh_max(const OracleTrace& t);
// Depth after a reduce, not counting elements eventually composed with at most C tokens.
int relaxed_depth_re(const OracleTrace& t, size_t step, int C);
int relaxed_depth_re_max(const OracleTrace& t, int C);
// Depth_re of the configuration right before token e is consumed (1 for the first token).
int token_depth_re(const OracleTrace& t, int e, int C = 1);

std::string format_trace(const OracleTrace& t);

// Arc-standard and arc-eager machinery, shared with the supervised parser.
enum class StdAction { kShift, kLeftArc, kRightArc, kReduce };
const char* to_string(StdAction a);

struct StdConfig {
  std::vector<int> stack;
  int beta = 1;
  int n = 0;
  std::vector<int> heads;
  std::vector<int> num_children;

  static StdConfig initial(int n);
  bool terminal(System s) const;
  int depth(System s) const;
};

std::string std_check(const StdConfig& c, StdAction a, System s);
StdConfig std_apply(const StdConfig& c, StdAction a, System s);
StdAction std_oracle(const StdConfig& c, const std::vector<int>& gold, System s);

}  // namespace lcdep
