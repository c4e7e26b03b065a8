#include "lcdep/lc_chart.hpp"

#include <algorithm>
#include <stdexcept>

#include "chart_engine.hpp"

namespace lcdep {

void DepthPolicy::validate() const {
  if (D < 1) throw std::invalid_argument("depth bound must be at least 1");
  if (C < 1) throw std::invalid_argument("relaxation length must be at least 1");
}

std::string to_string(const DepthPolicy& p) {
  if (p.unbounded()) return "inf";
  std::string s = std::to_string(p.D);
  if (p.C != 1) s += "(" + (p.C == kUnbounded ? std::string("inf") : std::to_string(p.C)) + ")";
  return s;
}

DepthPolicy policy_from_string(const std::string& s) {
  DepthPolicy p;
  if (s == "inf" || s == "none") return p;
  try {
    size_t pos = 0;
    p.D = std::stoi(s, &pos);
    if (pos < s.size()) {
      if (s[pos] != '(' || s.back() != ')') throw std::invalid_argument(s);
      p.C = std::stoi(s.substr(pos + 1, s.size() - pos - 2));
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad depth policy '" + s + "' (expected D, D(C) or inf)");
  }
  p.validate();
  return p;
}

namespace {

using detail::edge;
using detail::Edge;

// Left states of a token, read head-inward: 2 = no left dependents at all,
// 1 = more dependents to come, 0 = the nearest dependent has been attached.
// Right states are head-outward DMV states. Labels d are 1-based depths.
class LcGrammar {
 public:
  enum Kind { kLti, kRt, kRtf, kFull, kPredRect, kHalfRect, kPredRight, kHalfRight, kNumKinds };

  LcGrammar(const SentenceWeights& sw, const DepthPolicy& policy) : sw_(sw), n_(sw.n), N_(sw.n + 2) {
    policy.validate();
    if (policy.unbounded()) {
      // Every composed constituent is exempt and the bottom element sits at 1.
      D_ = 1;
      never_ = true;
    } else {
      D_ = policy.D;
      never_ = policy.C > n_;
    }
    C_ = policy.C;
    bcap_ = never_ ? 1 : C_;
    nb_ = bcap_ + 1;
    long N = N_, N2 = N * N, N3 = N2 * N;
    long sizes[kNumKinds] = {N2 * D_,      2 * N2 * D_,       N2 * D_,      N3 * D_,
                             2 * N3 * D_,  N3 * D_ * nb_ * 2, 3 * N3 * D_,  N3 * D_ * nb_ * 2};
    long b = 0;
    for (int k = 0; k < kNumKinds; ++k) base_[k] = b, b += sizes[k];
    base_[kNumKinds] = b;
    if (b > (1L << 31) - 1) throw std::length_error("left-corner chart too large");
  }

  int num_items() const { return static_cast<int>(base_[kNumKinds]); }
  int goal() const { return lti(1, n_ + 1, 1); }

  int lti(int i, int h, int d) const { return id(kLti, (i * N_ + h) * D_ + d - 1); }
  int rt(int r, int h, int j, int d) const { return id(kRt, ((r * N_ + h) * N_ + j) * D_ + d - 1); }
  int rtf(int h, int j, int d) const { return id(kRtf, (h * N_ + j) * D_ + d - 1); }
  int full(int i, int h, int j, int d) const { return id(kFull, ((i * N_ + h) * N_ + j) * D_ + d - 1); }
  int pred_rect(int q, int i, int j, int p, int d) const {
    return id(kPredRect, (((q * N_ + i) * N_ + j) * N_ + p) * D_ + d - 1);
  }
  int half_rect(int i, int h, int p, int d, int b, int e) const {
    return id(kHalfRect, ((((i * N_ + h) * N_ + p) * D_ + d - 1) * nb_ + b) * 2 + e);
  }
  int pred_right(int q, int h, int j, int p, int d) const {
    return id(kPredRight, (((q * N_ + h) * N_ + j) * N_ + p) * D_ + d - 1);
  }
  int half_right(int h, int hh, int p, int d, int b, int e) const {
    return id(kHalfRight, ((((h * N_ + hh) * N_ + p) * D_ + d - 1) * nb_ + b) * 2 + e);
  }

  struct Item {
    Kind kind;
    int a = 0, b = 0, c = 0, q = 0, d = 0, bb = 0, e = 0;
  };

  Item decode(int item) const {
    int k = 0;
    while (base_[k + 1] <= item) ++k;
    long x = item - base_[k];
    Item it{Kind(k)};
    auto take = [&](long m) {
      int v = static_cast<int>(x % m);
      x /= m;
      return v;
    };
    switch (it.kind) {
      case kLti:
      case kRtf:
        it.d = take(D_) + 1, it.b = take(N_), it.a = take(N_);
        break;
      case kRt:
        it.d = take(D_) + 1, it.b = take(N_), it.a = take(N_), it.q = take(2);
        break;
      case kFull:
        it.d = take(D_) + 1, it.c = take(N_), it.b = take(N_), it.a = take(N_);
        break;
      case kPredRect:
      case kPredRight:
        it.d = take(D_) + 1, it.c = take(N_), it.b = take(N_), it.a = take(N_), it.q = take(3);
        break;
      case kHalfRect:
      case kHalfRight:
        it.e = take(2), it.bb = take(nb_), it.d = take(D_) + 1, it.c = take(N_), it.b = take(N_), it.a = take(N_);
        break;
      default: break;
    }
    return it;
  }

  template <class F>
  void for_each_incoming(int item, F&& f) const {
    Item it = decode(item);
    switch (it.kind) {
      case kLti: lti_edges(it.a, it.b, it.d, f); break;
      case kRt: rt_edges(it.q, it.a, it.b, it.d, f); break;
      case kRtf:
        if (valid_rt(it.a, it.b))
          for (int r = 0; r < 2; ++r) f(edge({rt(r, it.a, it.b, it.d)}, {fin(Dir::kRight, it.a, r)}));
        break;
      case kFull: full_edges(it.a, it.b, it.c, it.d, f); break;
      case kPredRect: pred_rect_edges(it.q, it.a, it.b, it.c, it.d, f); break;
      case kHalfRect: half_edges(false, it.a, it.b, it.c, it.d, it.bb, it.e, f); break;
      case kPredRight: pred_right_edges(it.q, it.a, it.b, it.c, it.d, f); break;
      case kHalfRight: half_edges(true, it.a, it.b, it.c, it.d, it.bb, it.e, f); break;
      default: break;
    }
  }

  std::string describe(int item) const {
    Item it = decode(item);
    auto s = [](int x) { return std::to_string(x); };
    switch (it.kind) {
      case kLti: return "LeftTri(" + s(it.a) + "," + s(it.b) + ":" + s(it.d) + ")";
      case kRt: return "RightTri[" + s(it.q) + "](" + s(it.a) + "," + s(it.b) + ":" + s(it.d) + ")";
      case kRtf: return "RightTriF(" + s(it.a) + "," + s(it.b) + ":" + s(it.d) + ")";
      case kFull: return "FullTri(" + s(it.a) + "," + s(it.b) + "," + s(it.c) + ":" + s(it.d) + ")";
      case kPredRect: return "PredRect[" + s(it.q) + "](" + s(it.a) + "," + s(it.b) + "->" + s(it.c) + ":" + s(it.d) + ")";
      case kHalfRect:
        return "HalfRect(" + s(it.a) + "," + s(it.b) + "->" + s(it.c) + ":" + s(it.d) + ",b=" + s(it.bb) +
               ",e=" + s(it.e) + ")";
      case kPredRight:
        return "PredRight[" + s(it.q) + "](" + s(it.a) + "," + s(it.b) + "->" + s(it.c) + ":" + s(it.d) + ")";
      case kHalfRight:
        return "HalfRight(" + s(it.a) + "," + s(it.b) + "->" + s(it.c) + ":" + s(it.d) + ",b=" + s(it.bb) +
               ",e=" + s(it.e) + ")";
      default: return "?";
    }
  }

  std::string rule(int item, const Edge& e) const {
    Item it = decode(item);
    auto kind_of = [&](int k) { return e.nant > k ? decode(e.ant[k]).kind : kNumKinds; };
    switch (it.kind) {
      case kLti: return e.nant == 0 ? "Shift-Left" : "Insert-Left";
      case kRt: return e.nant == 0 ? "Shift-Right" : "Insert-Right";
      case kRtf: return "Finish-Right";
      case kFull: return "Combine";
      case kPredRect: return kind_of(0) == kFull ? "LeftPred" : "LeftComp-L-2";
      case kHalfRect: return "LeftComp-L-1";
      case kPredRight:
        if (kind_of(0) == kRt) return "RightPred";
        return kind_of(0) == kHalfRight ? "LeftComp-R-2" : "RightComp";
      case kHalfRight: return "LeftComp-R-1";
      default: return "?";
    }
  }

 private:
  int id(Kind k, long off) const { return static_cast<int>(base_[k] + off); }
  int fin(Dir dir, int h, int s) const { return sw_.fin_id(dir, h, s); }
  int att(Dir dir, int h, int s, int d) const { return sw_.att_id(dir, h, s, d); }
  bool must(int t) const { return sw_.must_head[t]; }
  bool ok(int d) const { return d >= 1 && d <= D_; }
  bool valid_rt(int h, int j) const { return h >= 1 && h <= j && j <= n_; }
  // Whether a composed constituent of `len` tokens counts toward depth.
  bool deepens(int len) const { return !never_ && len > C_; }
  int bclip(int left_extra) const { return std::min(bcap_, left_extra); }

  // Shift-Left + Finish-Left on a token without left dependents; Insert-Left.
  template <class F>
  void lti_edges(int i, int h, int d, F& f) const {
    if (i < 1 || i > h || h > n_ + 1) return;
    if (i == h) {
      if (h <= n_) f(edge({}, {fin(Dir::kLeft, h, 0)}));
    } else {
      f(edge({pred_rect(0, i, h - 1, h, d)}, {}));
    }
  }

  // Shift-Right; Insert-Right, where the inserted token takes no right dependents.
  template <class F>
  void rt_edges(int r, int h, int j, int d, F& f) const {
    if (!valid_rt(h, j)) return;
    if (j == h) {
      if (r == 0) f(edge({}, {}));
      return;
    }
    if (r != 1) return;
    for (int q : {0, 2}) {
      if (q == 2 && must(j)) continue;
      f(edge({pred_right(q, h, j - 1, j, d)}, {fin(Dir::kRight, j, 0)}));
    }
  }

  template <class F>
  void full_edges(int i, int h, int j, int d, F& f) const {
    if (i < 1 || i > h || h > j || j > n_) return;
    if (i == h && h == j && must(h)) return;
    f(edge({lti(i, h, d), rtf(h, j, d)}, {}));
  }

  template <class F>
  void pred_rect_edges(int q, int i, int j, int p, int d, F& f) const {
    if (q > 1 || i < 1 || i > j || j >= p || p > n_ + 1) return;
    // LeftPred: a finished constituent becomes p's farthest left dependent.
    for (int h = i; h <= j; ++h) f(edge({full(i, h, j, d)}, {fin(Dir::kLeft, p, 1), att(Dir::kLeft, p, q, h)}));
    // LeftComp-L-2
    left_comp_2(false, i, j, p, q, d, f);
  }

  template <class F>
  void pred_right_edges(int q, int h, int j, int p, int d, F& f) const {
    if (h < 1 || h > j || j >= p || p > n_) return;
    if (q >= 1) {
      int start = fin(Dir::kLeft, p, q == 1 ? 1 : 0);
      // RightPred
      for (int r = 0; r < 2; ++r) f(edge({rt(r, h, j, d)}, {att(Dir::kRight, h, r, p), start}));
      // RightComp: the top constituent fills the prediction hh and predicts p.
      for (int hh = h + 1; hh <= j; ++hh) {
        int dd = d + deepens(j - hh + 1);
        if (!ok(dd)) continue;
        for (int qq : {0, 2})
          for (int r = 0; r < 2; ++r)
            f(edge({pred_right(qq, h, hh - 1, hh, d), rt(r, hh, j, dd)},
                   {att(Dir::kRight, hh, r, p), fin(Dir::kRight, hh, 1), start}));
      }
    }
    if (q <= 1) left_comp_2(true, h, j, p, q, d, f);
  }

  // Second phase of LeftComp: the right half of h arrives and h attaches to p.
  template <class F>
  void left_comp_2(bool right, int i, int j, int p, int q, int d, F& f) const {
    for (int h = i + 1; h <= j; ++h)
      for (int b = 0; b < nb_; ++b) {
        // b + (j - h) + 1 tokens, counted up to C.
        int e = deepens(b + (j - h) + 1);
        if (!ok(d + e)) continue;
        if (b == 0 && j == h && must(h)) continue;
        int half = right ? half_right(i, h, p, d, b, e) : half_rect(i, h, p, d, b, e);
        f(edge({half, rtf(h, j, d + e)}, {att(Dir::kLeft, p, q, h)}));
      }
  }

  // First phase of LeftComp: remember how long h's left half is, clipped at C.
  template <class F>
  void half_edges(bool right, int i, int h, int p, int d, int b, int e, F& f) const {
    if (i < 1 || i >= h || h >= p || p > n_ + 1 || !ok(d + e)) return;
    if (right && p > n_) return;
    for (int j = i; j < h; ++j) {
      if (bclip(h - j - 1) != b) continue;
      int left = right ? pred_right(1, i, j, p, d) : pred_rect(1, i, j, p, d);
      f(edge({left, lti(j + 1, h, d + e)}, {}));
    }
  }

  const SentenceWeights& sw_;
  int n_, N_;
  int D_ = 1, C_ = 1, bcap_ = 1, nb_ = 2;
  bool never_ = false;
  long base_[kNumKinds + 1];
};

}  // namespace

double lc_inside(const SentenceWeights& sw, const DepthPolicy& policy, Semiring sr) {
  LcGrammar g(sw, policy);
  detail::ChartEngine<LcGrammar> eng(g, sw, sr);
  return eng.total().v;
}

EventCounts lc_expected_counts(const SentenceWeights& sw, const DepthPolicy& policy) {
  LcGrammar g(sw, policy);
  detail::ChartEngine<LcGrammar> eng(g, sw, Semiring::kLogSum);
  EventCounts ec;
  ec.log_z = eng.total().v;
  if (ec.log_z == kNegInf) {
    ec.c.assign(sw.w.size(), 0.0);
    return ec;
  }
  ec.skipped = false;
  ec.c = eng.outside();
  return ec;
}

ViterbiResult lc_viterbi(const SentenceWeights& sw, const DepthPolicy& policy) {
  LcGrammar g(sw, policy);
  detail::ChartEngine<LcGrammar> eng(g, sw, Semiring::kMax);
  ViterbiResult r;
  r.score = eng.total().v;
  if (r.score != kNegInf) r.heads = detail::heads_from_terms(sw, eng.best_terms());
  return r;
}

double lc_derivation_count(int n, const DepthPolicy& policy) {
  SentenceWeights sw = SentenceWeights::blank(n);
  std::fill(sw.w.begin(), sw.w.end(), 0.0);
  for (int d = 1; d <= n; ++d) sw.att(Dir::kLeft, n + 1, 1, d) = kNegInf;
  sw.fin(Dir::kLeft, n + 1, 0) = kNegInf;
  for (int h = 1; h <= n; ++h)
    for (int s = 0; s < 2; ++s) {
      sw.att(Dir::kRight, h, s, n + 1) = kNegInf;
      sw.att(Dir::kRight, h, s, h) = kNegInf;
      sw.att(Dir::kLeft, h, s, h) = kNegInf;
    }
  return lc_inside(sw, policy, Semiring::kCount);
}

std::vector<std::string> lc_derivation_dump(const SentenceWeights& sw, const DepthPolicy& policy) {
  LcGrammar g(sw, policy);
  detail::ChartEngine<LcGrammar> eng(g, sw, Semiring::kMax);
  auto edges = eng.best_edges();
  std::vector<std::string> out;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    std::string line = g.rule(it->first, it->second) + "\t" + g.describe(it->first);
    for (int k = 0; k < it->second.nant; ++k) line += (k ? " " : "\t") + g.describe(it->second.ant[k]);
    out.push_back(line);
  }
  if (!edges.empty()) out.push_back("Accept\t" + g.describe(g.goal()));
  return out;
}

}  // namespace lcdep
