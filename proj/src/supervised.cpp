#include "lcdep/supervised.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lcdep/parallel.hpp"

namespace lcdep {

FeatureSet feature_set_from_string(const std::string& s) {
  if (s == "full") return FeatureSet::kFull;
  if (s == "limited") return FeatureSet::kLimited;
  throw std::invalid_argument("unknown feature set '" + s + "'");
}

const char* to_string(FeatureSet f) { return f == FeatureSet::kFull ? "full" : "limited"; }

BoundMeasure bound_measure_from_string(const std::string& s) {
  if (s == "raw") return BoundMeasure::kRaw;
  if (s == "depth-re" || s == "re") return BoundMeasure::kDepthRe;
  throw std::invalid_argument("unknown bound measure '" + s + "'");
}

const char* to_string(BoundMeasure m) { return m == BoundMeasure::kRaw ? "raw" : "depth-re"; }

int num_actions(System s) { return s == System::kLeftCorner ? 6 : 4; }

const char* action_name(System s, int a) {
  return s == System::kLeftCorner ? to_string(static_cast<LcAction>(a)) : to_string(static_cast<StdAction>(a));
}

namespace {

// Left-corner templates; the last 8 look past q0 in the buffer.
const std::vector<std::string> kLcTemplates = {
    "s0.p.w", "s0.p.t", "s0.l.w", "s0.l.t",
    "s1.p.w", "s1.p.t", "s1.l.w", "s1.l.t",
    "s0.p.w+s0.p.t", "s0.l.w+s0.l.t", "s1.p.w+s1.p.t", "s1.l.w+s1.l.t",
    "q0.w", "q0.t", "q0.w+q0.t",
    "s0.p.w+s0.l.w", "s0.p.t+s0.l.t",
    "s0.p.w+s1.p.w", "s0.l.w+s1.l.w", "s0.p.t+s1.p.t", "s0.l.t+s1.l.t",
    "s0.p.w+q0.w", "s0.l.w+q0.w", "s0.p.t+q0.t", "s0.l.t+q0.t",
    "s0.p.w+q0.w+q0.t", "s0.p.w+q0.w+s0.p.t", "s0.l.w+q0.w+s0.l.t", "s0.l.w+q0.w+s0.l.t",
    "s0.p.w+s0.p.t+q0.t", "s0.l.w+s0.l.t+q0.t",
    "q0.t+q0.l.t+q0.r.t", "q0.w+q0.l.t+q0.r.t",
    "s0.p.t+s0.gp.t+s0.gg.t", "s0.p.t+s0.gp.t+s0.l.t", "s0.p.t+s0.l.t+s0.l2.t", "s0.p.t+s0.gp.t+q0.t",
    "s0.p.t+s0.l.t+q0.t", "s0.p.w+s0.l.t+q0.t", "s0.p.t+s0.l.w+q0.t", "s0.l.t+s0.l2.t+q0.t",
    "s0.l.t+s0.l2.t+q0.t", "s0.p.t+q0.t+q0.l.t", "s0.p.t+q0.t+q0.r.t",
    "s1.p.t+s0.p.t+s0.l.t", "s1.p.t+s0.l.t+q0.t", "s1.l.t+s0.l.t+q0.t", "s1.l.t+s0.l.t+q0.t",
    "s1.l.t+s0.p.t+q0.t",
    // lookahead
    "q0.t+q1.t", "q0.t+q1.t+q2.t", "s0.p.t+q0.t+q1.t+q2.t", "s0.l.t+q0.t+q1.t+q2.t",
    "s0.p.w+q0.t+q1.t", "s0.p.t+q0.t+q1.t", "s0.l.w+q0.t+q1.t", "s0.l.t+q0.t+q1.t",
};
constexpr int kLcLookahead = 8;

const std::vector<std::string> kStandardTemplates = {
    "s0.w", "s0.t", "s0.w+s0.t", "s1.w", "s1.t", "s1.w+s1.t", "q0.w", "q0.t", "q0.w+q0.t",
    "s0.w+s1.w", "s0.t+s1.t", "s0.t+q0.t", "s0.w+s0.t+s1.t", "s0.t+s1.w+s1.t", "s0.w+s1.w+s1.t",
    "s0.w+s0.t+s1.w", "s0.w+s0.t+s1.w+s1.t",
    "s0.t+q0.t+q1.t", "s1.t+s0.t+q0.t", "s0.w+q0.t+q1.t", "s1.t+s0.w+q0.t",
    "s1.t+s1.lc.t+s0.t", "s1.t+s1.rc.t+s0.t", "s1.t+s0.t+s0.rc.t", "s1.t+s1.lc.t+s0.w",
    "s1.t+s1.rc.t+s0.w", "s1.t+s0.w+s0.lc.t", "s2.t+s1.t+s0.t", "s0.t+s1.t+dist",
};

const std::vector<std::string> kEagerTemplates = {
    "s0.w", "s0.t", "s0.w+s0.t", "q0.w", "q0.t", "q0.w+q0.t", "q1.w", "q1.t", "q1.w+q1.t", "q2.w", "q2.t",
    "s0.w+s0.t+q0.w+q0.t", "s0.w+s0.t+q0.w", "s0.w+q0.w+q0.t", "s0.w+s0.t+q0.t", "s0.t+q0.w+q0.t",
    "s0.w+q0.w", "s0.t+q0.t", "q0.t+q1.t",
    "q0.t+q1.t+q2.t", "s0.t+q0.t+q1.t", "s0.h.t+s0.t+q0.t", "s0.t+s0.lc.t+q0.t", "s0.t+s0.rc.t+q0.t",
    "s0.t+q0.t+q0.lc.t",
    "s0.w+dist", "s0.t+dist", "q0.w+dist", "q0.t+dist", "s0.w+q0.w+dist", "s0.t+q0.t+dist",
    "s0.w+s0.vr", "s0.t+s0.vr", "s0.w+s0.vl", "s0.t+s0.vl", "q0.w+q0.vl", "q0.t+q0.vl",
    "s0.h.w", "s0.h.t", "s0.lc.w", "s0.lc.t", "s0.rc.w", "s0.rc.t", "q0.lc.w", "q0.lc.t",
};

enum class Rel { kP, kGp, kGg, kL, kL2, kR, kH, kLc, kRc };
enum class Attr { kWord, kTag, kValLeft, kValRight, kDist };

struct Atom {
  char base = 's';
  int idx = 0;
  std::vector<Rel> rels;
  Attr attr = Attr::kTag;
};

struct Template {
  std::string name;
  std::vector<Atom> atoms;
};

Atom parse_atom(const std::string& s) {
  Atom a;
  if (s == "dist") {
    a.attr = Attr::kDist;
    return a;
  }
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, '.')) parts.push_back(p);
  if (parts.size() < 2 || parts[0].size() != 2) throw std::logic_error("bad atom " + s);
  a.base = parts[0][0];
  a.idx = parts[0][1] - '0';
  for (size_t i = 1; i + 1 < parts.size(); ++i) {
    static const std::map<std::string, Rel> rels = {{"p", Rel::kP},   {"gp", Rel::kGp}, {"gg", Rel::kGg},
                                                    {"l", Rel::kL},   {"l2", Rel::kL2}, {"r", Rel::kR},
                                                    {"h", Rel::kH},   {"lc", Rel::kLc}, {"rc", Rel::kRc}};
    a.rels.push_back(rels.at(parts[i]));
  }
  const std::string& last = parts.back();
  if (last == "w") a.attr = Attr::kWord;
  else if (last == "t") a.attr = Attr::kTag;
  else if (last == "vl") a.attr = Attr::kValLeft;
  else if (last == "vr") a.attr = Attr::kValRight;
  else throw std::logic_error("bad atom attribute " + s);
  return a;
}

std::vector<Template> parse_templates(const std::vector<std::string>& names, size_t count) {
  std::vector<Template> out;
  for (size_t i = 0; i < count; ++i) {
    Template t{names[i], {}};
    std::stringstream ss(names[i]);
    std::string a;
    while (std::getline(ss, a, '+')) t.atoms.push_back(parse_atom(a));
    out.push_back(std::move(t));
  }
  return out;
}

const std::vector<Template>& templates(System s, FeatureSet f) {
  static const auto lc_full = parse_templates(kLcTemplates, kLcTemplates.size());
  static const auto lc_limited = parse_templates(kLcTemplates, kLcTemplates.size() - kLcLookahead);
  static const auto standard = parse_templates(kStandardTemplates, kStandardTemplates.size());
  static const auto eager = parse_templates(kEagerTemplates, kEagerTemplates.size());
  switch (s) {
    case System::kLeftCorner: return f == FeatureSet::kFull ? lc_full : lc_limited;
    case System::kArcStandard: return standard;
    case System::kArcEager: return eager;
  }
  return standard;
}

// A resolved elementary value: a token, a small number, or NULL.
struct Value {
  enum Kind { kNull, kToken, kNumber } kind = kNull;
  int x = 0;
  Attr attr = Attr::kTag;
};

struct Resolver {
  const ParseState& st;
  const DepTree& sent;
  System sys;
  const std::vector<int>& heads;
  int n;

  Resolver(const ParseState& s, const DepTree& t, System sy)
      : st(s), sent(t), sys(sy), heads(sy == System::kLeftCorner ? s.lc.heads : s.std.heads), n(t.size()) {}

  std::vector<int> children(int x) const {
    std::vector<int> c;
    for (int d = 1; d <= n; ++d)
      if (heads[d] == x) c.push_back(d);
    return c;
  }

  int token_rel(int x, Rel r) const {
    if (x <= 0) return 0;
    switch (r) {
      case Rel::kH: return heads[x];
      case Rel::kL:
      case Rel::kLc: {
        auto c = children(x);
        return c.empty() ? 0 : c.front();
      }
      case Rel::kL2: {
        auto c = children(x);
        return c.size() < 2 ? 0 : c[1];
      }
      case Rel::kR:
      case Rel::kRc: {
        auto c = children(x);
        return c.empty() ? 0 : c.back();
      }
      default: return 0;
    }
  }

  int buffer(int k) const {
    int b = sys == System::kLeftCorner ? st.lc.beta : st.std.beta;
    return b + k <= n ? b + k : 0;
  }

  // Token an atom's base and relations point to, 0 if absent.
  int resolve(const Atom& a) const {
    if (sys != System::kLeftCorner) {
      int x;
      if (a.base == 's') {
        const auto& s = st.std.stack;
        x = a.idx < static_cast<int>(s.size()) ? s[s.size() - 1 - a.idx] : 0;
      } else {
        x = buffer(a.idx);
      }
      for (Rel r : a.rels) x = token_rel(x, r);
      return x;
    }
    const auto& stack = st.lc.stack;
    const Spine* spine = nullptr;
    int x = 0;
    bool reduce_mode = !st.lc.expect_shift;
    if (a.base == 's') {
      int k = a.idx + (reduce_mode ? 1 : 0);
      if (k < static_cast<int>(stack.size())) spine = &stack[stack.size() - 1 - k];
    } else if (reduce_mode && a.idx == 0) {
      if (!stack.empty()) x = stack.back().head();
    } else {
      x = buffer(a.idx - (reduce_mode ? 1 : 0));
    }
    size_t i = 0;
    if (spine) {
      const auto& nodes = spine->nodes;
      int m = static_cast<int>(nodes.size());
      auto up = [&](int k) { return m > k ? nodes[m - 1 - k] : 0; };
      std::vector<int> lam = spine->lambda;
      std::sort(lam.begin(), lam.end());
      Rel r = a.rels.empty() ? Rel::kH : a.rels[0];
      i = 1;
      switch (r) {
        case Rel::kP: x = up(0); break;
        case Rel::kGp: x = up(1); break;
        case Rel::kGg: x = up(2); break;
        case Rel::kL: x = lam.empty() ? 0 : lam[0]; break;
        case Rel::kL2: x = lam.size() < 2 ? 0 : lam[1]; break;
        default: x = spine->head(); i = 0; break;
      }
    }
    for (; i < a.rels.size(); ++i) x = token_rel(x, a.rels[i]);
    return x;
  }

  Value value(const Atom& a) const {
    Value v;
    v.attr = a.attr;
    if (a.attr == Attr::kDist) {
      int p, q;
      if (sys == System::kArcStandard) {
        const auto& s = st.std.stack;
        p = s.size() >= 1 ? s.back() : 0;
        q = s.size() >= 2 ? s[s.size() - 2] : 0;
      } else {
        p = st.std.stack.empty() ? 0 : st.std.stack.back();
        q = buffer(0);
      }
      if (p == 0 || q == 0) return v;
      v.kind = Value::kNumber;
      v.x = std::min(std::abs(p - q), 10);
      return v;
    }
    int x = resolve(a);
    if (x == 0) return v;
    if (a.attr == Attr::kValLeft || a.attr == Attr::kValRight) {
      int k = 0;
      for (int d : children(x)) k += (d < x) == (a.attr == Attr::kValLeft);
      v.kind = Value::kNumber;
      v.x = k;
      return v;
    }
    v.kind = Value::kToken;
    v.x = x;
    return v;
  }

  std::string text(const Value& v) const {
    switch (v.kind) {
      case Value::kNull: return "-NULL-";
      case Value::kNumber: return std::to_string(v.x);
      case Value::kToken: {
        const Token& t = sent.token(v.x);
        return v.attr == Attr::kWord ? t.form : t.pos;
      }
    }
    return "";
  }
};

std::uint64_t fnv(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h;
}

}  // namespace

std::vector<std::string> feature_templates(System s, FeatureSet f) {
  std::vector<std::string> out;
  for (const auto& t : templates(s, f)) out.push_back(t.name);
  return out;
}

std::vector<std::uint64_t> extract_features(const ParseState& st, const DepTree& sentence, System s, FeatureSet f) {
  Resolver r(st, sentence, s);
  const auto& ts = templates(s, f);
  std::vector<std::uint64_t> out;
  out.reserve(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    std::uint64_t h = mix(fnv(ts[i].name), static_cast<std::uint64_t>(s));
    for (const auto& a : ts[i].atoms) h = mix(h, fnv(r.text(r.value(a))));
    out.push_back(h);
  }
  return out;
}

std::vector<std::string> describe_features(const ParseState& st, const DepTree& sentence, System s, FeatureSet f) {
  Resolver r(st, sentence, s);
  std::vector<std::string> out;
  for (const auto& t : templates(s, f)) {
    std::string v;
    for (const auto& a : t.atoms) v += (v.empty() ? "" : "|") + r.text(r.value(a));
    out.push_back(t.name + "=" + v);
  }
  return out;
}

double PerceptronWeights::score(const std::vector<std::uint64_t>& feats, int action) const {
  double s = 0;
  for (auto f : feats) {
    auto it = w_.find(f);
    if (it != w_.end()) s += it->second.w[action];
  }
  return s;
}

void PerceptronWeights::scores(const std::vector<std::uint64_t>& feats, double* out) const {
  std::fill(out, out + actions_, 0.0);
  for (auto f : feats) {
    auto it = w_.find(f);
    if (it == w_.end()) continue;
    for (int a = 0; a < actions_; ++a) out[a] += it->second.w[a];
  }
}

void PerceptronWeights::update(std::uint64_t f, int action, double delta, std::int64_t clock) {
  auto& e = w_[f];
  if (e.w.empty()) e.w.assign(actions_, 0.0), e.u.assign(actions_, 0.0);
  e.w[action] += delta;
  e.u[action] += static_cast<double>(clock) * delta;
}

PerceptronWeights PerceptronWeights::averaged(std::int64_t clock) const {
  PerceptronWeights out(actions_);
  if (clock <= 0) return *this;
  for (const auto& [f, e] : w_) {
    Entry a;
    a.w.resize(actions_);
    a.u.assign(actions_, 0.0);
    for (int k = 0; k < actions_; ++k) a.w[k] = e.w[k] - e.u[k] / static_cast<double>(clock);
    out.w_.emplace(f, std::move(a));
  }
  return out;
}

std::string PerceptronWeights::write() const {
  std::vector<std::uint64_t> keys;
  for (const auto& kv : w_) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  std::string out;
  char buf[96];
  for (auto k : keys)
    for (int a = 0; a < actions_; ++a) {
      double v = w_.at(k).w[a];
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, "f:%016" PRIx64 "/%d\t%.17g\n", k, a, v);
      out += buf;
    }
  return out;
}

void PerceptronWeights::read_line(const std::string& key, int action, double value) {
  if (key.size() != 18 || key.compare(0, 2, "f:") != 0) throw FormatError("bad feature key " + key);
  if (action < 0 || action >= actions_) throw FormatError("bad action id in " + key);
  std::uint64_t f = std::stoull(key.substr(2), nullptr, 16);
  auto& e = w_[f];
  if (e.w.empty()) e.w.assign(actions_, 0.0), e.u.assign(actions_, 0.0);
  e.w[action] = value;
}

bool PerceptronWeights::operator==(const PerceptronWeights& o) const {
  if (actions_ != o.actions_ || w_.size() != o.w_.size()) return false;
  for (const auto& [f, e] : w_) {
    auto it = o.w_.find(f);
    if (it == o.w_.end() || it->second.w != e.w) return false;
  }
  return true;
}

std::vector<int> legal_actions(const ParseState& st, System s, const DepTree& sentence) {
  std::vector<int> out;
  const bool rooted = sentence.root_appended();
  if (s == System::kLeftCorner) {
    const Configuration& c = st.lc;
    for (int a = 0; a < 6; ++a) {
      auto act = static_cast<LcAction>(a);
      if (!lc_check(c, act).empty()) continue;
      // $ may only be inserted under a dummy-rooted spine.
      if (rooted && act == LcAction::kInsert && c.beta == c.n && !c.stack.back().nodes.empty()) continue;
      out.push_back(a);
    }
    return out;
  }
  const StdConfig& c = st.std;
  for (int a = 0; a < 4; ++a) {
    auto act = static_cast<StdAction>(a);
    if (!std_check(c, act, s).empty()) continue;
    if (rooted && act == StdAction::kRightArc) {
      int dep = s == System::kArcStandard ? c.stack.back() : c.beta;
      if (dep == c.n) continue;
    }
    out.push_back(a);
  }
  return out;
}

ParseState apply_action(const ParseState& st, int a, System s) {
  ParseState r = st;
  int depth;
  if (s == System::kLeftCorner) {
    r.lc = lc_apply(st.lc, static_cast<LcAction>(a));
    depth = r.lc.depth();
  } else {
    r.std = std_apply(st.std, static_cast<StdAction>(a), s);
    depth = r.std.depth(s);
  }
  r.actions.push_back(a);
  r.max_depth = std::max(r.max_depth, depth);
  return r;
}

bool is_terminal(const ParseState& st, System s) {
  return s == System::kLeftCorner ? st.lc.terminal() : st.std.terminal(s);
}

bool within_bound(const ParseState& st, System s, int last_action, int bound, BoundMeasure m) {
  if (bound == kUnbounded) return true;
  bool reduce;
  int depth;
  if (s == System::kLeftCorner) {
    reduce = !is_shift_type(static_cast<LcAction>(last_action));
    depth = st.lc.depth();
  } else {
    auto a = static_cast<StdAction>(last_action);
    reduce = !(a == StdAction::kShift || (s == System::kArcEager && a == StdAction::kRightArc));
    depth = st.std.depth(s);
  }
  if (m == BoundMeasure::kDepthRe && !reduce) return true;
  return depth <= bound;
}

namespace {

ParseState initial_state(int n, System s) {
  ParseState st;
  if (s == System::kLeftCorner) st.lc = Configuration::initial(n);
  else st.std = StdConfig::initial(n);
  return st;
}

bool beam_order(const ParseState& a, const ParseState& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.actions < b.actions;
}

DepTree to_tree(const ParseState& st, System s, const DepTree& sentence) {
  if (s == System::kLeftCorner) return postprocess_terminal(st.lc, sentence);
  const int n = sentence.size();
  const int root = sentence.root_appended() ? n : 0;
  std::vector<Token> toks = sentence.tokens();
  for (int d = 1; d <= n; ++d) {
    int h = st.std.heads[d];
    toks[d - 1].head = d == root ? 0 : (h == 0 ? root : h);
  }
  return DepTree(std::move(toks), sentence.root_appended());
}

// One beam expansion. Terminal states are carried over unchanged.
std::vector<ParseState> expand(const std::vector<ParseState>& beam, const DepTree& sent, const PerceptronWeights& w,
                               const ParserOptions& opt) {
  std::vector<ParseState> cands;
  std::vector<double> sc(num_actions(opt.system));
  for (const auto& st : beam) {
    if (is_terminal(st, opt.system)) {
      cands.push_back(st);
      continue;
    }
    auto feats = extract_features(st, sent, opt.system, opt.features);
    w.scores(feats, sc.data());
    for (int a : legal_actions(st, opt.system, sent)) {
      ParseState ns = apply_action(st, a, opt.system);
      if (!within_bound(ns, opt.system, a, opt.depth_bound, opt.measure)) continue;
      ns.score = st.score + sc[a];
      cands.push_back(std::move(ns));
    }
  }
  size_t keep = std::min<size_t>(cands.size(), static_cast<size_t>(std::max(1, opt.beam)));
  std::partial_sort(cands.begin(), cands.begin() + static_cast<long>(keep), cands.end(), beam_order);
  cands.resize(keep);
  return cands;
}

bool all_terminal(const std::vector<ParseState>& beam, System s) {
  return std::all_of(beam.begin(), beam.end(), [&](const ParseState& st) { return is_terminal(st, s); });
}

}  // namespace

DepTree beam_decode(const DepTree& sentence, const PerceptronWeights& w, const ParserOptions& opt,
                    const BeamObserver& observer) {
  if (!sentence.root_appended()) throw std::invalid_argument("beam_decode: sentence needs $ appended");
  std::vector<ParseState> beam = {initial_state(sentence.size(), opt.system)};
  while (!all_terminal(beam, opt.system)) {
    auto next = expand(beam, sentence, w, opt);
    if (next.empty()) break;  // the bound pruned everything
    beam = std::move(next);
    if (observer) observer(beam);
  }
  return to_tree(beam.front(), opt.system, sentence);
}

DepTree beam_decode(const DepTree& sentence, const SupervisedModel& model) {
  return beam_decode(sentence, model.weights, model.options);
}

Corpus parse_supervised(const SupervisedModel& model, const Corpus& corpus, int jobs) {
  Corpus out = corpus;
  parallel_for(corpus.sentences.size(), jobs,
               [&](size_t i) { out.sentences[i] = beam_decode(corpus.sentences[i], model); });
  return out;
}

std::vector<int> gold_actions(const DepTree& gold, System s) {
  std::vector<int> heads = gold.heads();
  std::vector<int> out;
  const int n = gold.size();
  if (s == System::kLeftCorner) {
    Configuration c = Configuration::initial(n);
    while (!c.terminal()) {
      LcAction a = lc_oracle(c, heads);
      out.push_back(static_cast<int>(a));
      c = lc_apply(c, a);
    }
  } else {
    StdConfig c = StdConfig::initial(n);
    while (!c.terminal(s)) {
      StdAction a = std_oracle(c, heads, s);
      out.push_back(static_cast<int>(a));
      c = std_apply(c, a, s);
    }
  }
  return out;
}

namespace {

// Adds sign * phi(prefix) into delta, replaying the action sequence.
void accumulate(const std::vector<int>& actions, const DepTree& sent, const ParserOptions& opt, double sign,
                std::map<std::pair<std::uint64_t, int>, double>& delta) {
  ParseState st = initial_state(sent.size(), opt.system);
  for (int a : actions) {
    for (auto f : extract_features(st, sent, opt.system, opt.features)) delta[{f, a}] += sign;
    st = apply_action(st, a, opt.system);
  }
}

double uas_of(const DepTree& pred, const DepTree& gold, int& correct) {
  int n = gold.size() - (gold.root_appended() ? 1 : 0);
  for (int d = 1; d <= n; ++d) correct += pred.head(d) == gold.head(d);
  return n;
}

}  // namespace

SupervisedModel train_perceptron(const Corpus& corpus, const ParserOptions& opt, int epochs, std::uint64_t seed,
                                 std::vector<PerceptronLog>* log) {
  PerceptronWeights w(num_actions(opt.system));
  ParserOptions topt = opt;
  topt.depth_bound = kUnbounded;
  std::vector<std::vector<int>> gold;
  for (const auto& t : corpus.sentences) {
    if (!t.root_appended()) throw std::invalid_argument("train_perceptron: sentences need $ appended");
    gold.push_back(gold_actions(t, opt.system));
  }
  std::mt19937_64 rng(seed);
  std::vector<size_t> order(corpus.sentences.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::int64_t clock = 0;
  for (int ep = 1; ep <= epochs; ++ep) {
    std::shuffle(order.begin(), order.end(), rng);
    PerceptronLog row{ep, 0, 0};
    int correct = 0;
    double total = 0;
    for (size_t i : order) {
      const DepTree& sent = corpus.sentences[i];
      const auto& g = gold[i];
      std::vector<ParseState> beam = {initial_state(sent.size(), opt.system)};
      ParseState gs = beam.front();
      double best_v = -1;
      std::vector<int> best_pred, best_gold;
      size_t t = 0;
      std::vector<double> sc(num_actions(opt.system));
      while (!all_terminal(beam, opt.system) || t < g.size()) {
        beam = expand(beam, sent, w, topt);
        if (t < g.size()) {
          w.scores(extract_features(gs, sent, opt.system, opt.features), sc.data());
          double s = gs.score + sc[g[t]];
          gs = apply_action(gs, g[t], opt.system);
          gs.score = s;
          ++t;
        }
        const ParseState& top = beam.front();
        double v = top.score - gs.score;
        if (top.actions != gs.actions && v >= best_v) {
          best_v = v;
          best_pred = top.actions;
          best_gold = gs.actions;
        }
      }
      const ParseState& out = beam.front();
      total += uas_of(to_tree(out, opt.system, sent), sent, correct);
      if (out.actions != g && !best_pred.empty()) {
        std::map<std::pair<std::uint64_t, int>, double> delta;
        accumulate(best_gold, sent, opt, +1.0, delta);
        accumulate(best_pred, sent, opt, -1.0, delta);
        for (const auto& [k, d] : delta)
          if (d != 0.0) w.update(k.first, k.second, d, clock);
        ++row.updates;
      }
      ++clock;
    }
    row.train_uas = total > 0 ? 100.0 * correct / total : 0;
    if (log) log->push_back(row);
  }
  return {opt, w.averaged(clock)};
}

std::string write_supervised(const SupervisedModel& m) {
  const auto& o = m.options;
  std::string out = "# lcdep supervised parser\n";
  out += std::string("options\tsystem=") + to_string(o.system) + " features=" + to_string(o.features) +
         " beam=" + std::to_string(o.beam) +
         " depth_bound=" + (o.depth_bound == kUnbounded ? std::string("inf") : std::to_string(o.depth_bound)) +
         " measure=" + to_string(o.measure) + "\n";
  out += "actions\t" + std::to_string(num_actions(o.system)) + "\n";
  return out + m.weights.write();
}

SupervisedModel read_supervised(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "# lcdep supervised parser") throw FormatError("supervised model: bad header");
  SupervisedModel m;
  bool have_opts = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("supervised model: malformed line '" + line + "'");
    std::string key = line.substr(0, tab), rest = line.substr(tab + 1);
    if (key == "options") {
      std::istringstream os(rest);
      std::string kv;
      while (os >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw FormatError("supervised model: bad option " + kv);
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "system") m.options.system = system_from_string(v);
        else if (k == "features") m.options.features = feature_set_from_string(v);
        else if (k == "beam") m.options.beam = std::stoi(v);
        else if (k == "depth_bound") m.options.depth_bound = v == "inf" ? kUnbounded : std::stoi(v);
        else if (k == "measure") m.options.measure = bound_measure_from_string(v);
        else throw FormatError("supervised model: unknown option " + k);
      }
      m.weights = PerceptronWeights(num_actions(m.options.system));
      have_opts = true;
    } else if (key == "actions") {
      continue;
    } else {
      if (!have_opts) throw FormatError("supervised model: weights before options");
      auto slash = key.find('/');
      if (slash == std::string::npos) throw FormatError("supervised model: bad key " + key);
      m.weights.read_line(key.substr(0, slash), std::stoi(key.substr(slash + 1)), std::stod(rest));
    }
  }
  if (!have_opts) throw FormatError("supervised model: missing options");
  return m;
}

}  // namespace lcdep
