#include "lcdep/transition.hpp"

#include <algorithm>
#include <sstream>

namespace lcdep {

const char* to_string(LcAction a) {
  switch (a) {
    case LcAction::kShift: return "Shift";
    case LcAction::kInsert: return "Insert";
    case LcAction::kLeftPred: return "LeftPred";
    case LcAction::kRightPred: return "RightPred";
    case LcAction::kLeftComp: return "LeftComp";
    case LcAction::kRightComp: return "RightComp";
  }
  return "?";
}

bool is_shift_type(LcAction a) { return a == LcAction::kShift || a == LcAction::kInsert; }

Configuration Configuration::initial(int n) {
  Configuration c;
  c.n = n;
  c.heads.assign(n + 1, 0);
  return c;
}

std::string lc_check(const Configuration& c, LcAction a) {
  if (c.buffer_empty() && !is_shift_type(a) && !c.expect_shift) return "buffer is empty";
  if (is_shift_type(a)) {
    if (!c.expect_shift) return "a reduce action must come next";
    if (c.buffer_empty()) return "buffer is empty";
    if (a == LcAction::kInsert) {
      if (c.stack.empty()) return "stack is empty";
      if (!c.stack.back().has_dummy) return "top element has no dummy";
    } else if (!c.stack.empty() && c.stack.back().complete()) {
      return "top element is complete";
    }
    return "";
  }
  if (c.expect_shift) return "a shift action must come next";
  if (c.stack.empty()) return "stack is empty";
  if (!c.stack.back().complete()) return "top element is incomplete";
  if (a == LcAction::kLeftComp || a == LcAction::kRightComp) {
    if (c.stack.size() < 2) return "no second element";
    if (c.stack[c.stack.size() - 2].complete()) return "second element is complete";
  }
  return "";
}

Configuration lc_apply(const Configuration& c, LcAction a) {
  std::string why = lc_check(c, a);
  if (!why.empty()) throw TransitionError(std::string(to_string(a)) + ": " + why);
  Configuration r = c;
  auto arc = [&](int h, int d) { r.heads[d] = h; };
  switch (a) {
    case LcAction::kShift: {
      Spine s;
      s.nodes = {r.beta};
      s.start = r.beta;
      r.stack.push_back(std::move(s));
      ++r.beta;
      break;
    }
    case LcAction::kInsert: {
      Spine& top = r.stack.back();
      int j = r.beta;
      if (!top.nodes.empty()) arc(top.nodes.back(), j);
      for (int k : top.lambda) arc(j, k);
      top.nodes.push_back(j);
      top.has_dummy = false;
      top.lambda.clear();
      ++r.beta;
      break;
    }
    case LcAction::kLeftPred: {
      Spine& top = r.stack.back();
      int h = top.head();
      top.nodes.clear();
      top.has_dummy = true;
      top.lambda = {h};
      break;
    }
    case LcAction::kRightPred: {
      Spine& top = r.stack.back();
      top.nodes = {top.head()};
      top.has_dummy = true;
      top.lambda.clear();
      break;
    }
    case LcAction::kLeftComp: {
      int h = r.stack.back().head();
      r.stack.pop_back();
      r.stack.back().lambda.push_back(h);
      break;
    }
    case LcAction::kRightComp: {
      int h = r.stack.back().head();
      r.stack.pop_back();
      Spine& s = r.stack.back();
      if (!s.nodes.empty()) arc(s.nodes.back(), h);
      for (int k : s.lambda) arc(h, k);
      s.nodes.push_back(h);
      s.lambda.clear();
      break;
    }
  }
  r.expect_shift = !is_shift_type(a);
  return r;
}

namespace {

int deps_from(const std::vector<int>& gold, int x, int from) {
  int k = 0;
  for (int d = from; d < static_cast<int>(gold.size()); ++d) k += gold[d] == x;
  return k;
}

bool lambda_has(const std::vector<int>& lambda, auto pred) {
  return std::any_of(lambda.begin(), lambda.end(), pred);
}

}  // namespace

LcAction lc_oracle(const Configuration& c, const std::vector<int>& gold) {
  if (c.expect_shift) {
    if (!c.stack.empty() && c.stack.back().has_dummy && !c.buffer_empty()) {
      const Spine& top = c.stack.back();
      int j = c.beta;
      bool ok = top.nodes.empty()
                    ? lambda_has(top.lambda, [&](int k) { return gold[k] == j; })
                    : gold[j] == top.nodes.back() && deps_from(gold, j, j + 1) == 0;
      if (ok) return LcAction::kInsert;
    }
    return LcAction::kShift;
  }
  if (c.stack.empty() || c.stack.back().has_dummy) throw TransitionError("oracle: no complete element to reduce");
  int s = c.stack.back().head();
  int pending = deps_from(gold, s, c.beta);
  if (c.stack.size() >= 2 && c.stack[c.stack.size() - 2].has_dummy) {
    const Spine& second = c.stack[c.stack.size() - 2];
    bool has_i = !second.nodes.empty();
    int i = has_i ? second.nodes.back() : 0;
    int hs = gold[s];
    bool left_comp =
        pending == 0 && hs >= c.beta &&
        (has_i ? gold[hs] == i : lambda_has(second.lambda, [&](int k) { return gold[k] == hs; }));
    if (left_comp) return LcAction::kLeftComp;
    // The dummy becomes s, whose only remaining dependent is then predicted.
    bool right_comp =
        pending == 1 && (has_i ? hs == i : lambda_has(second.lambda, [&](int k) { return gold[k] == s; }));
    if (right_comp) return LcAction::kRightComp;
  }
  return pending > 0 ? LcAction::kRightPred : LcAction::kLeftPred;
}

DepTree postprocess_terminal(const Configuration& c, const DepTree& sentence) {
  std::vector<int> heads = c.heads;
  const int n = c.n;
  const int root = sentence.root_appended() ? n : 0;
  for (const Spine& s : c.stack) {
    if (!s.has_dummy) continue;
    int target = s.nodes.empty() ? root : s.nodes.back();
    for (int k : s.lambda) heads[k] = target;
  }
  for (int d = 1; d <= n; ++d)
    if (heads[d] == 0 && d != root) heads[d] = root;
  std::vector<Token> toks = sentence.tokens();
  for (int d = 1; d <= n; ++d) toks[d - 1].head = heads[d];
  return DepTree(std::move(toks), sentence.root_appended());
}

const char* to_string(System s) {
  switch (s) {
    case System::kLeftCorner: return "left-corner";
    case System::kArcStandard: return "arc-standard";
    case System::kArcEager: return "arc-eager";
  }
  return "?";
}

System system_from_string(const std::string& s) {
  if (s == "left-corner" || s == "lc") return System::kLeftCorner;
  if (s == "arc-standard" || s == "standard") return System::kArcStandard;
  if (s == "arc-eager" || s == "eager") return System::kArcEager;
  throw std::invalid_argument("unknown transition system '" + s + "'");
}

const char* to_string(StdAction a) {
  switch (a) {
    case StdAction::kShift: return "Shift";
    case StdAction::kLeftArc: return "LeftArc";
    case StdAction::kRightArc: return "RightArc";
    case StdAction::kReduce: return "Reduce";
  }
  return "?";
}

StdConfig StdConfig::initial(int n) {
  StdConfig c;
  c.n = n;
  c.heads.assign(n + 1, 0);
  c.num_children.assign(n + 1, 0);
  return c;
}

bool StdConfig::terminal(System s) const {
  if (s == System::kArcEager) return beta > n;
  return beta > n && stack.size() <= 1;
}

int StdConfig::depth(System s) const {
  if (s != System::kArcEager) return static_cast<int>(stack.size());
  int d = 0;
  for (int x : stack) d += heads[x] == 0;
  if (beta <= n && num_children[beta] > 0) ++d;
  return d;
}

std::string std_check(const StdConfig& c, StdAction a, System s) {
  const bool buf = c.beta <= c.n;
  if (s == System::kArcStandard) {
    switch (a) {
      case StdAction::kShift: return buf ? "" : "buffer is empty";
      case StdAction::kLeftArc:
      case StdAction::kRightArc: return c.stack.size() >= 2 ? "" : "fewer than two stack elements";
      case StdAction::kReduce: return "not an arc-standard action";
    }
  }
  switch (a) {
    case StdAction::kShift: return buf ? "" : "buffer is empty";
    case StdAction::kLeftArc:
      if (c.stack.empty() || !buf) return "needs a stack top and a buffer front";
      return c.heads[c.stack.back()] == 0 ? "" : "stack top already has a head";
    case StdAction::kRightArc: return !c.stack.empty() && buf ? "" : "needs a stack top and a buffer front";
    case StdAction::kReduce:
      if (c.stack.empty()) return "stack is empty";
      return c.heads[c.stack.back()] != 0 ? "" : "stack top has no head";
  }
  return "";
}

StdConfig std_apply(const StdConfig& c, StdAction a, System s) {
  std::string why = std_check(c, a, s);
  if (!why.empty()) throw TransitionError(std::string(to_string(a)) + ": " + why);
  StdConfig r = c;
  auto arc = [&](int h, int d) {
    r.heads[d] = h;
    ++r.num_children[h];
  };
  if (s == System::kArcStandard) {
    if (a == StdAction::kShift) {
      r.stack.push_back(r.beta++);
    } else {
      int s0 = r.stack.back(), s1 = r.stack[r.stack.size() - 2];
      r.stack.pop_back();
      r.stack.pop_back();
      if (a == StdAction::kLeftArc) {
        arc(s0, s1);
        r.stack.push_back(s0);
      } else {
        arc(s1, s0);
        r.stack.push_back(s1);
      }
    }
    return r;
  }
  switch (a) {
    case StdAction::kShift: r.stack.push_back(r.beta++); break;
    case StdAction::kLeftArc:
      arc(r.beta, r.stack.back());
      r.stack.pop_back();
      break;
    case StdAction::kRightArc:
      arc(r.stack.back(), r.beta);
      r.stack.push_back(r.beta++);
      break;
    case StdAction::kReduce: r.stack.pop_back(); break;
  }
  return r;
}

StdAction std_oracle(const StdConfig& c, const std::vector<int>& gold, System s) {
  const int n = c.n;
  auto children_done = [&](int x) {
    int total = 0;
    for (int d = 1; d <= n; ++d) total += gold[d] == x;
    return total == c.num_children[x];
  };
  if (s == System::kArcStandard) {
    if (c.stack.size() >= 2) {
      int s0 = c.stack.back(), s1 = c.stack[c.stack.size() - 2];
      if (gold[s1] == s0) return StdAction::kLeftArc;
      if (gold[s0] == s1 && children_done(s0)) return StdAction::kRightArc;
    }
    return StdAction::kShift;
  }
  if (!c.stack.empty() && c.beta <= n) {
    int s0 = c.stack.back(), b0 = c.beta;
    if (gold[s0] == b0 && c.heads[s0] == 0) return StdAction::kLeftArc;
    if (gold[b0] == s0) return StdAction::kRightArc;
    if (c.heads[s0] != 0 && deps_from(gold, s0, b0) == 0) return StdAction::kReduce;
  }
  return StdAction::kShift;
}

OracleTrace run_oracle(const DepTree& gold_tree, System system) {
  if (!is_projective(gold_tree)) throw std::invalid_argument("run_oracle: gold tree is not projective");
  const int n = gold_tree.size();
  std::vector<int> gold = gold_tree.heads();
  OracleTrace t;
  t.system = system;
  t.n = n;
  t.token_step.assign(n + 1, -1);
  if (system == System::kLeftCorner) {
    Configuration c = Configuration::initial(n);
    std::vector<int> ids;
    while (!c.terminal()) {
      LcAction a = lc_oracle(c, gold);
      std::string why = lc_check(c, a);
      if (!why.empty()) throw TransitionError(std::string("oracle chose ") + to_string(a) + ": " + why);
      if (is_shift_type(a)) t.token_step[c.beta] = static_cast<int>(t.steps.size());
      if (a == LcAction::kShift) {
        ids.push_back(static_cast<int>(t.element_start.size()));
        t.element_start.push_back(c.beta);
        t.element_composed.push_back(0);
      } else if (a == LcAction::kLeftComp || a == LcAction::kRightComp) {
        t.element_composed[ids.back()] = c.beta;
        ids.pop_back();
      }
      c = lc_apply(c, a);
      t.steps.push_back({to_string(a), c.depth(), is_shift_type(a) ? StepPhase::kShift : StepPhase::kReduce, ids});
    }
    t.heads = c.heads;
    if (!c.success()) throw TransitionError("run_oracle: left-corner oracle did not reach a single tree");
  } else {
    StdConfig c = StdConfig::initial(n);
    while (!c.terminal(system)) {
      StdAction a = std_oracle(c, gold, system);
      bool consumes = a == StdAction::kShift || (system == System::kArcEager && a == StdAction::kRightArc);
      if (consumes) t.token_step[c.beta] = static_cast<int>(t.steps.size());
      c = std_apply(c, a, system);
      t.steps.push_back({to_string(a), c.depth(system), consumes ? StepPhase::kShift : StepPhase::kReduce, {}});
    }
    t.heads = c.heads;
  }
  for (int d = 1; d <= n; ++d)
    if (t.heads[d] != gold[d]) throw TransitionError("run_oracle: reconstructed arcs differ from gold");
  t.max_depth_re = depth_re_max(t);
  t.max_depth_sh = depth_sh_max(t);
  return t;
}

int depth_re_max(const OracleTrace& t) {
  int m = 1;
  for (const auto& s : t.steps)
    if (s.phase == StepPhase::kReduce) m = std::max(m, s.depth);
  return m;
}

int depth_sh_max(const OracleTrace& t) {
  int m = 0;
  for (const auto& s : t.steps)
    if (s.phase == StepPhase::kShift) m = std::max(m, s.depth);
  return m;
}

int relaxed_depth_re(const OracleTrace& t, size_t step, int C) {
  if (t.system != System::kLeftCorner) return t.steps.at(step).depth;
  int d = 0;
  for (int id : t.steps.at(step).elements) {
    int comp = t.element_composed[id];
    bool exempt = comp != 0 && comp - t.element_start[id] <= C;
    d += !exempt;
  }
  return d;
}

int relaxed_depth_re_max(const OracleTrace& t, int C) {
  int m = 1;
  for (size_t i = 0; i < t.steps.size(); ++i)
    if (t.steps[i].phase == StepPhase::kReduce) m = std::max(m, relaxed_depth_re(t, i, C));
  return m;
}

int token_depth_re(const OracleTrace& t, int e, int C) {
  int s = t.token_step.at(e);
  if (s <= 0) return 1;
  return std::max(1, relaxed_depth_re(t, s - 1, C));
}

std::string format_trace(const OracleTrace& t) {
  std::ostringstream out;
  for (size_t i = 0; i < t.steps.size(); ++i)
    out << i + 1 << '\t' << t.steps[i].action << '\t' << t.steps[i].depth << '\t'
        << (t.steps[i].phase == StepPhase::kShift ? "shift" : "reduce") << '\n';
  return out.str();
}

}  // namespace lcdep
