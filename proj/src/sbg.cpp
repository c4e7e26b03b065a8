#include "lcdep/sbg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "chart_engine.hpp"
#include "lcdep/parallel.hpp"

namespace lcdep {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

Semiring semiring_from_string(const std::string& s) {
  if (s == "logsum" || s == "inside") return Semiring::kLogSum;
  if (s == "max" || s == "viterbi") return Semiring::kMax;
  if (s == "count") return Semiring::kCount;
  throw std::invalid_argument("unknown semiring '" + s + "'");
}

// ---- DMV parameters ----

int DmvParams::tag_id(const std::string& t) const {
  auto it = std::find(tags.begin(), tags.end(), t);
  if (it == tags.end()) throw std::out_of_range("tag '" + t + "' not in the model vocabulary");
  return static_cast<int>(it - tags.begin());
}

std::vector<int> DmvParams::tag_ids(const DepTree& sentence) const {
  int n = sentence.size() - (sentence.root_appended() ? 1 : 0);
  std::vector<int> ids(n);
  for (int i = 1; i <= n; ++i) ids[i - 1] = tag_id(sentence.pos(i));
  return ids;
}

DmvParams DmvParams::uniform(const std::vector<std::string>& tags) {
  DmvParams p;
  p.tags = tags;
  int T = p.num_tags();
  p.attach.assign(2 * T * T, -std::log(static_cast<double>(T)));
  p.stop.assign(2 * T * 2 * 2, std::log(0.5));
  p.root.assign(T, -std::log(static_cast<double>(T)));
  return p;
}

namespace {

void dirichlet(std::mt19937_64& rng, double alpha, double* out, int k, int stride = 1) {
  std::gamma_distribution<double> g(alpha, 1.0);
  std::vector<double> x(k);
  double s = 0;
  for (auto& v : x) s += (v = g(rng) + 1e-12);
  for (int i = 0; i < k; ++i) out[i * stride] = std::log(x[i] / s);
}

}  // namespace

DmvParams DmvParams::random(const std::vector<std::string>& tags, std::uint64_t seed, double concentration) {
  DmvParams p = uniform(tags);
  std::mt19937_64 rng(seed);
  int T = p.num_tags();
  for (int c = 0; c < 2 * T; ++c) dirichlet(rng, concentration, &p.attach[c * T], T);
  for (int c = 0; c < 2 * T * 2; ++c) dirichlet(rng, concentration, &p.stop[c * 2], 2);
  dirichlet(rng, concentration, p.root.data(), T);
  return p;
}

void DmvParams::validate(double tol) const {
  int T = num_tags();
  if (attach.size() != size_t(2 * T * T) || stop.size() != size_t(8 * T) || root.size() != size_t(T))
    throw std::invalid_argument("DMV parameter tables have the wrong size");
  auto check = [&](const double* v, int k, int stride, const std::string& what) {
    double s = 0;
    for (int i = 0; i < k; ++i) {
      double x = v[i * stride];
      if (std::isnan(x) || x > 1e-12) throw std::invalid_argument(what + ": log-probability out of range");
      s += std::exp(x);
    }
    if (std::abs(s - 1.0) > tol) throw std::invalid_argument(what + " does not sum to one");
  };
  for (int c = 0; c < 2 * T; ++c) check(&attach[c * T], T, 1, "attach distribution of " + tags[c / 2]);
  for (int c = 0; c < 4 * T; ++c) check(&stop[c * 2], 2, 1, "stop distribution of " + tags[c / 4]);
  check(root.data(), T, 1, "root distribution");
}

namespace {

std::string num(double x) {
  if (x == kNegInf) return "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

const char* dir_name(int d) { return d == 0 ? "left" : "right"; }

}  // namespace

std::string write_dmv(const DmvParams& p) {
  std::ostringstream os;
  int T = p.num_tags();
  for (int d = 0; d < T; ++d) os << "root\t$\t" << p.tags[d] << '\t' << num(p.root[d]) << '\n';
  for (int h = 0; h < T; ++h)
    for (int dir = 0; dir < 2; ++dir)
      for (int d = 0; d < T; ++d)
        os << "attach\t" << p.tags[h] << '|' << dir_name(dir) << '\t' << p.tags[d] << '\t'
           << num(p.att(h, Dir(dir), d)) << '\n';
  for (int h = 0; h < T; ++h)
    for (int dir = 0; dir < 2; ++dir)
      for (int s = 0; s < 2; ++s)
        for (int stop : {1, 0})
          os << "stop\t" << p.tags[h] << '|' << dir_name(dir) << '|' << (s == 0 ? "adj" : "nonadj") << '\t'
             << (stop ? "stop" : "continue") << '\t' << num(p.st(h, Dir(dir), s, stop)) << '\n';
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

DmvParams read_dmv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> tags;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    if (f.size() != 4) throw FormatError("model line " + std::to_string(lineno) + ": expected 4 fields");
    if (f[0] == "root") tags.push_back(f[2]);
    rows.push_back(std::move(f));
  }
  DmvParams p = DmvParams::uniform(tags);
  auto dir_of = [](const std::string& s) {
    if (s == "left") return Dir::kLeft;
    if (s == "right") return Dir::kRight;
    throw FormatError("bad direction '" + s + "'");
  };
  for (const auto& f : rows) {
    double v = std::strtod(f[3].c_str(), nullptr);
    try {
      if (f[0] == "root") {
        p.root[p.tag_id(f[2])] = v;
      } else if (f[0] == "attach") {
        auto c = split(f[1], '|');
        if (c.size() != 2) throw FormatError("bad attach context '" + f[1] + "'");
        p.att(p.tag_id(c[0]), dir_of(c[1]), p.tag_id(f[2])) = v;
      } else if (f[0] == "stop") {
        auto c = split(f[1], '|');
        if (c.size() != 3 || (c[2] != "adj" && c[2] != "nonadj")) throw FormatError("bad stop context '" + f[1] + "'");
        if (f[2] != "stop" && f[2] != "continue") throw FormatError("bad stop decision '" + f[2] + "'");
        p.st(p.tag_id(c[0]), dir_of(c[1]), c[2] == "adj" ? 0 : 1, f[2] == "stop") = v;
      } else {
        throw FormatError("unknown parameter kind '" + f[0] + "'");
      }
    } catch (const std::out_of_range& e) {
      throw FormatError(e.what());
    }
  }
  return p;
}

AutomatonSet dmv_to_sbg(const DmvParams& p) {
  int T = p.num_tags();
  AutomatonSet a;
  for (auto* side : {&a.left, &a.right}) side->resize(T);
  for (int h = 0; h < T; ++h) {
    for (int dir = 0; dir < 2; ++dir) {
      HeadAutomaton& m = dir == 0 ? a.left[h] : a.right[h];
      for (int s = 0; s < 2; ++s) {
        m.fin[s] = p.st(h, Dir(dir), s, true);
        m.trans[s].resize(T);
        for (int d = 0; d < T; ++d) m.trans[s][d] = p.att(h, Dir(dir), d) + p.st(h, Dir(dir), s, false);
      }
    }
  }
  a.root.fin[0] = kNegInf;
  a.root.fin[1] = 0.0;
  a.root.trans[0] = p.root;
  a.root.trans[1].assign(T, kNegInf);
  return a;
}

// ---- sentence weights ----

SentenceWeights SentenceWeights::blank(int n) {
  SentenceWeights sw;
  sw.n = n;
  int N = n + 2;
  sw.w.assign(4 * N * N + 4 * N, kNegInf);
  sw.must_head.assign(N, 0);
  return sw;
}

SentenceWeights::Event SentenceWeights::decode(int id) const {
  int N = width();
  Event e;
  if (id < 4 * N * N) {
    e.attach = true;
    e.d = id % N;
    id /= N;
    e.s = id % 2;
    id /= 2;
    e.h = id % N;
    e.dir = Dir(id / N);
  } else {
    id -= 4 * N * N;
    e.s = id % 2;
    id /= 2;
    e.h = id % N;
    e.dir = Dir(id / N);
  }
  return e;
}

SentenceWeights sentence_weights(const AutomatonSet& a, const std::vector<int>& tag_ids) {
  int n = static_cast<int>(tag_ids.size());
  SentenceWeights sw = SentenceWeights::blank(n);
  for (int h = 1; h <= n; ++h) {
    int th = tag_ids[h - 1];
    const HeadAutomaton& L = a.left.at(th);
    const HeadAutomaton& R = a.right.at(th);
    for (int s = 0; s < 2; ++s) {
      sw.fin(Dir::kLeft, h, s) = L.fin[s];
      sw.fin(Dir::kRight, h, s) = R.fin[s];
      for (int d = 1; d <= n; ++d) {
        if (d == h) continue;
        const HeadAutomaton& m = d < h ? L : R;
        sw.att(d < h ? Dir::kLeft : Dir::kRight, h, s, d) = m.trans[s].at(tag_ids[d - 1]);
      }
    }
  }
  int r = n + 1;
  for (int s = 0; s < 2; ++s) {
    sw.fin(Dir::kLeft, r, s) = a.root.fin[s];
    for (int d = 1; d <= n; ++d) sw.att(Dir::kLeft, r, s, d) = a.root.trans[s].at(tag_ids[d - 1]);
  }
  sw.fin(Dir::kRight, r, 0) = 0.0;
  return sw;
}

SentenceWeights dmv_sentence_weights(const DmvParams& p, const std::vector<int>& tag_ids) {
  return sentence_weights(dmv_to_sbg(p), tag_ids);
}

double tree_log_weight(const SentenceWeights& sw, const std::vector<int>& heads) {
  int n = sw.n;
  if (static_cast<int>(heads.size()) != n + 1) throw std::invalid_argument("head vector size mismatch");
  std::vector<std::vector<int>> left(n + 2), right(n + 2);
  for (int d = 1; d <= n; ++d) {
    int h = heads[d];
    if (h < 1 || h > n + 1 || h == d) throw std::invalid_argument("bad head");
    (d < h ? left[h] : right[h]).push_back(d);
  }
  if (left[n + 1].size() != 1) return kNegInf;
  double w = 0;
  for (int h = 1; h <= n + 1; ++h) {
    std::sort(left[h].rbegin(), left[h].rend());  // nearest first
    int s = 0;
    for (int d : left[h]) w += sw.att(Dir::kLeft, h, s, d), s = 1;
    w += sw.fin(Dir::kLeft, h, s);
    if (h <= n) {
      s = 0;
      for (int d : right[h]) w += sw.att(Dir::kRight, h, s, d), s = 1;
      w += sw.fin(Dir::kRight, h, s);
      if (sw.must_head[h] && left[h].empty() && right[h].empty()) return kNegInf;
    }
  }
  return w;
}

// ---- head-split Eisner chart ----

namespace {

using detail::edge;
using detail::Edge;

constexpr int kFin = 2;

class EisnerGrammar {
 public:
  explicit EisnerGrammar(const SentenceWeights& sw) : sw_(sw), n_(sw.n), N_(sw.n + 2) {}

  int num_items() const { return 10 * N_ * N_; }
  int goal() const { return lt(kFin, 1, n_ + 1); }

  int lt(int q, int i, int h) const { return (q * N_ + i) * N_ + h; }
  int rt(int q, int h, int j) const { return 3 * N_ * N_ + (q * N_ + h) * N_ + j; }
  int ltrap(int hd, int h, int e) const { return 6 * N_ * N_ + (e * N_ + hd) * N_ + h; }
  int rtrap(int h, int hd, int e) const { return 8 * N_ * N_ + (e * N_ + h) * N_ + hd; }

  template <class F>
  void for_each_incoming(int item, F&& f) const {
    int N2 = N_ * N_;
    int block = item / (N2);
    int rest = item % N2;
    int a = rest / N_, b = rest % N_;
    switch (block) {
      case 0: case 1: case 2: left_tri(block, a, b, f); break;
      case 3: case 4: case 5: right_tri(block - 3, a, b, f); break;
      case 6: case 7: left_trap(a, b, block - 6, f); break;
      case 8: case 9: right_trap(a, b, block - 8, f); break;
    }
  }

 private:
  bool must(int t) const { return sw_.must_head[t]; }

  // Start-Left, Finish-Left, Complete-Left.
  template <class F>
  void left_tri(int q, int i, int h, F& f) const {
    if (i < 1 || i > h) return;
    if (q == kFin) {
      for (int s = 0; s < 2; ++s) f(edge({lt(s, i, h)}, {sw_.fin_id(Dir::kLeft, h, s)}));
    } else if (q == 0) {
      if (i == h) f(edge({}, {}));
    } else {
      for (int hd = i; hd < h; ++hd)
        for (int e = 0; e < 2; ++e) {
          if (e && i == hd && must(hd)) continue;
          f(edge({lt(kFin, i, hd), ltrap(hd, h, e)}, {}));
        }
    }
  }

  // Attach-Left: h' becomes the next left dependent of h.
  template <class F>
  void left_trap(int hd, int h, int e, F& f) const {
    if (hd < 1 || hd >= h) return;
    for (int i = hd + 1; i <= h; ++i) {
      if ((i - 1 == hd) != bool(e)) continue;
      for (int s = 0; s < 2; ++s)
        f(edge({rt(kFin, hd, i - 1), lt(s, i, h)}, {sw_.att_id(Dir::kLeft, h, s, hd)}));
    }
  }

  template <class F>
  void right_tri(int q, int h, int j, F& f) const {
    if (h < 1 || h > n_ || j < h || j > n_) return;
    if (q == kFin) {
      for (int s = 0; s < 2; ++s) f(edge({rt(s, h, j)}, {sw_.fin_id(Dir::kRight, h, s)}));
    } else if (q == 0) {
      if (h == j) f(edge({}, {}));
    } else {
      for (int hd = h + 1; hd <= j; ++hd)
        for (int e = 0; e < 2; ++e) {
          if (e && j == hd && must(hd)) continue;
          f(edge({rtrap(h, hd, e), rt(kFin, hd, j)}, {}));
        }
    }
  }

  template <class F>
  void right_trap(int h, int hd, int e, F& f) const {
    if (h < 1 || hd <= h || hd > n_) return;
    for (int i = h + 1; i <= hd; ++i) {
      if ((i == hd) != bool(e)) continue;
      for (int s = 0; s < 2; ++s)
        f(edge({rt(s, h, i - 1), lt(kFin, i, hd)}, {sw_.att_id(Dir::kRight, h, s, hd)}));
    }
  }

  const SentenceWeights& sw_;
  int n_, N_;
};

}  // namespace

double eisner_inside(const SentenceWeights& sw, Semiring sr) {
  EisnerGrammar g(sw);
  detail::ChartEngine<EisnerGrammar> eng(g, sw, sr);
  return eng.total().v;
}

EventCounts eisner_expected_counts(const SentenceWeights& sw) {
  EisnerGrammar g(sw);
  detail::ChartEngine<EisnerGrammar> eng(g, sw, Semiring::kLogSum);
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

ViterbiResult eisner_viterbi(const SentenceWeights& sw) {
  EisnerGrammar g(sw);
  detail::ChartEngine<EisnerGrammar> eng(g, sw, Semiring::kMax);
  ViterbiResult r;
  r.score = eng.total().v;
  if (r.score != kNegInf) r.heads = detail::heads_from_terms(sw, eng.best_terms());
  return r;
}

// ---- DMV counts and EM ----

DmvCounts::DmvCounts(int num_tags) : T(num_tags) {
  attach.assign(2 * T * T, 0.0);
  stop.assign(8 * T, 0.0);
  root.assign(T, 0.0);
}

void DmvCounts::merge(const DmvCounts& o) {
  if (T == 0 && o.T != 0) *this = DmvCounts(o.T);
  for (size_t i = 0; i < attach.size(); ++i) attach[i] += o.attach[i];
  for (size_t i = 0; i < stop.size(); ++i) stop[i] += o.stop[i];
  for (size_t i = 0; i < root.size(); ++i) root[i] += o.root[i];
}

void add_dmv_counts(const SentenceWeights& sw, const EventCounts& ec, const std::vector<int>& tag_ids,
                    DmvCounts& out, const std::vector<char>* fixed) {
  if (ec.skipped) return;
  int n = sw.n, T = out.T;
  for (size_t id = 0; id < ec.c.size(); ++id) {
    double c = ec.c[id];
    if (c == 0.0 || (fixed && (*fixed)[id])) continue;
    auto ev = sw.decode(static_cast<int>(id));
    int dir = static_cast<int>(ev.dir);
    if (ev.h == n + 1) {
      if (ev.attach) out.root[tag_ids[ev.d - 1]] += c;
      continue;
    }
    int th = tag_ids[ev.h - 1];
    int sidx = ((th * 2 + dir) * 2 + ev.s) * 2;
    if (ev.attach) {
      out.attach[(th * 2 + dir) * T + tag_ids[ev.d - 1]] += c;
      out.stop[sidx + 1] += c;
    } else {
      out.stop[sidx] += c;
    }
  }
}

DmvParams normalize_counts(const DmvCounts& c, const DmvParams& prev) {
  DmvParams p = prev;
  auto norm = [](const double* src, double* dst, int k) {
    double s = 0;
    for (int i = 0; i < k; ++i) s += src[i];
    if (s <= 0) return;
    for (int i = 0; i < k; ++i) dst[i] = src[i] > 0 ? std::log(src[i] / s) : kNegInf;
  };
  int T = c.T;
  for (int k = 0; k < 2 * T; ++k) norm(&c.attach[k * T], &p.attach[k * T], T);
  for (int k = 0; k < 4 * T; ++k) norm(&c.stop[k * 2], &p.stop[k * 2], 2);
  norm(c.root.data(), p.root.data(), T);
  return p;
}

EStepResult dmv_e_step(const std::vector<std::vector<int>>& corpus, const DmvParams& p, int jobs) {
  AutomatonSet a = dmv_to_sbg(p);
  std::vector<DmvCounts> parts(corpus.size(), DmvCounts(0));
  std::vector<double> ll(corpus.size(), 0.0);
  std::vector<char> skipped(corpus.size(), 0);
  parallel_for(corpus.size(), jobs, [&](size_t i) {
    SentenceWeights sw = sentence_weights(a, corpus[i]);
    EventCounts ec = eisner_expected_counts(sw);
    parts[i] = DmvCounts(p.num_tags());
    if (ec.skipped) {
      skipped[i] = 1;
      return;
    }
    ll[i] = ec.log_z;
    add_dmv_counts(sw, ec, corpus[i], parts[i]);
  });
  EStepResult r;
  r.counts = DmvCounts(p.num_tags());
  for (size_t i = 0; i < corpus.size(); ++i) {
    r.counts.merge(parts[i]);
    r.log_likelihood += ll[i];
    r.skipped += skipped[i];
  }
  return r;
}

DmvParams em_step(const std::vector<std::vector<int>>& corpus, const DmvParams& p, double* log_likelihood, int jobs) {
  EStepResult r = dmv_e_step(corpus, p, jobs);
  if (log_likelihood) *log_likelihood = r.log_likelihood;
  return normalize_counts(r.counts, p);
}

}  // namespace lcdep
