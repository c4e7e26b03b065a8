#include "lcdep/induction.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lcdep/parallel.hpp"

namespace lcdep {

int FeatureIndex::intern(const std::string& key) {
  auto [it, fresh] = ids_.emplace(key, size());
  if (fresh) keys_.push_back(key);
  return it->second;
}

int FeatureIndex::find(const std::string& key) const {
  auto it = ids_.find(key);
  return it == ids_.end() ? -1 : it->second;
}

namespace {

const char* dir_key(Dir d) { return d == Dir::kLeft ? "L" : "R"; }

}  // namespace

std::vector<std::string> feature_keys(const DmvEvent& e) {
  std::string dir = std::string("|dir=") + dir_key(e.dir);
  if (e.attach) {
    std::string h = "|h=" + e.head, d = "|d=" + e.dep;
    return {"att" + h + d + dir, "att" + h + d, "att" + d + dir, "att" + d};
  }
  std::string h = "|h=" + e.head, dec = e.stop ? "|dec=STOP" : "|dec=CONT";
  std::string adj = e.adjacent ? "|adj=1" : "|adj=0";
  return {"stop" + h + dir + adj + dec, "stop" + h + dir + dec, "stop" + h + dec, "stop" + dec};
}

FeatureVector featurize(const DmvEvent& e, FeatureIndex& index) {
  FeatureVector f;
  for (const auto& k : feature_keys(e)) f.push_back(index.intern(k));
  std::sort(f.begin(), f.end());
  return f;
}

FeaturizedDmv::FeaturizedDmv(std::vector<std::string> tags) : tags_(std::move(tags)) {
  int T = num_tags();
  attach_f_.resize(2 * T * T);
  stop_f_.resize(8 * T);
  root_f_.resize(T);
  for (int h = 0; h < T; ++h)
    for (int dir = 0; dir < 2; ++dir) {
      for (int d = 0; d < T; ++d)
        attach_f_[(h * 2 + dir) * T + d] = featurize(DmvEvent::attachment(tags_[h], tags_[d], Dir(dir)), index_);
      for (int s = 0; s < 2; ++s)
        for (int dec = 0; dec < 2; ++dec)
          stop_f_[((h * 2 + dir) * 2 + s) * 2 + dec] =
              featurize(DmvEvent::stopping(tags_[h], Dir(dir), s == 0, dec == 0), index_);
    }
  for (int d = 0; d < T; ++d) root_f_[d] = featurize(DmvEvent::attachment(kRootTag, tags_[d], Dir::kLeft), index_);
}

namespace {

double score(const FeatureVector& f, const double* w) {
  double s = 0;
  for (int k : f) s += w[k];
  return s;
}

// Log-softmax over k decisions into out.
void log_softmax(const FeatureVector* f, int k, const double* w, double* out) {
  double z = kNegInf;
  for (int i = 0; i < k; ++i) {
    out[i] = score(f[i], w);
    z = log_add(z, out[i]);
  }
  for (int i = 0; i < k; ++i) out[i] -= z;
}

// One multinomial's contribution to sum_i c_i log theta_i and its gradient.
double context_ll(const FeatureVector* f, const double* c, int k, const double* w, double* grad,
                  std::vector<double>& buf) {
  double total = 0;
  for (int i = 0; i < k; ++i) total += c[i];
  if (total <= 0) return 0;
  buf.resize(k);
  log_softmax(f, k, w, buf.data());
  double ll = 0;
  for (int i = 0; i < k; ++i) {
    if (c[i] > 0) ll += c[i] * buf[i];
    if (grad) {
      double g = c[i] - total * std::exp(buf[i]);
      for (int j : f[i]) grad[j] += g;
    }
  }
  return ll;
}

}  // namespace

DmvParams FeaturizedDmv::params(const std::vector<double>& w) const {
  if (static_cast<int>(w.size()) != num_features()) throw std::invalid_argument("weight vector size mismatch");
  DmvParams p = DmvParams::uniform(tags_);
  int T = num_tags();
  for (int k = 0; k < 2 * T; ++k) log_softmax(&attach_f_[k * T], T, w.data(), &p.attach[k * T]);
  for (int k = 0; k < 4 * T; ++k) log_softmax(&stop_f_[k * 2], 2, w.data(), &p.stop[k * 2]);
  log_softmax(root_f_.data(), T, w.data(), p.root.data());
  return p;
}

DmvParams weights_to_params(const FeaturizedDmv& model, const std::vector<double>& w) { return model.params(w); }

double FeaturizedDmv::objective(const DmvCounts& c, const std::vector<double>& w, double sigma2,
                                std::vector<double>* grad) const {
  int T = num_tags();
  if (c.T != T) throw std::invalid_argument("count tagset mismatch");
  double* g = nullptr;
  if (grad) {
    grad->assign(w.size(), 0.0);
    g = grad->data();
  }
  std::vector<double> buf;
  double ll = 0;
  for (int k = 0; k < 2 * T; ++k) ll += context_ll(&attach_f_[k * T], &c.attach[k * T], T, w.data(), g, buf);
  for (int k = 0; k < 4 * T; ++k) ll += context_ll(&stop_f_[k * 2], &c.stop[k * 2], 2, w.data(), g, buf);
  ll += context_ll(root_f_.data(), c.root.data(), T, w.data(), g, buf);
  for (size_t i = 0; i < w.size(); ++i) {
    ll -= w[i] * w[i] / (2 * sigma2);
    if (g) g[i] -= w[i] / sigma2;
  }
  return ll;
}

namespace {

class NegObjective : public ceres::FirstOrderFunction {
 public:
  NegObjective(const FeaturizedDmv& m, const DmvCounts& c, double sigma2) : m_(m), c_(c), sigma2_(sigma2) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    std::vector<double> w(x, x + NumParameters()), g;
    *cost = -m_.objective(c_, w, sigma2_, gradient ? &g : nullptr);
    if (gradient)
      for (int i = 0; i < NumParameters(); ++i) gradient[i] = -g[i];
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return m_.num_features(); }

 private:
  const FeaturizedDmv& m_;
  const DmvCounts& c_;
  double sigma2_;
};

}  // namespace

std::vector<double> FeaturizedDmv::m_step(const DmvCounts& c, const std::vector<double>& w0, double sigma2,
                                          int max_iterations) const {
  std::vector<double> w = w0;
  if (w.empty() || max_iterations <= 0) return w;
  ceres::GradientProblem problem(new NegObjective(*this, c, sigma2));
  ceres::GradientProblemSolver::Options opt;
  opt.line_search_direction_type = ceres::LBFGS;
  opt.max_num_iterations = max_iterations;
  opt.logging_type = ceres::SILENT;
  opt.function_tolerance = 1e-12;
  opt.gradient_tolerance = 1e-9;
  opt.parameter_tolerance = 1e-12;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opt, problem, w.data(), &summary);
  if (!(objective(c, w, sigma2) >= objective(c, w0, sigma2))) return w0;
  return w;
}

std::vector<double> FeaturizedDmv::import_weights(const FeaturizedDmv& from, const std::vector<double>& w) const {
  std::vector<double> out(num_features(), 0.0);
  for (int i = 0; i < from.num_features(); ++i) {
    int j = index_.find(from.index().key(i));
    if (j >= 0) out[j] = w.at(i);
  }
  return out;
}

RootConstraint root_constraint_from_string(const std::string& s) {
  if (s == "none") return RootConstraint::kNone;
  if (s == "verb-or-noun") return RootConstraint::kVerbOrNoun;
  if (s == "verb-otherwise-noun") return RootConstraint::kVerbOtherwiseNoun;
  throw std::invalid_argument("unknown root constraint: " + s);
}

const char* to_string(RootConstraint r) {
  switch (r) {
    case RootConstraint::kVerbOrNoun: return "verb-or-noun";
    case RootConstraint::kVerbOtherwiseNoun: return "verb-otherwise-noun";
    default: return "none";
  }
}

ConstraintSet compile_constraints(const std::vector<std::string>& tags, const ConstraintConfig& cfg) {
  int n = static_cast<int>(tags.size());
  ConstraintSet cs;
  cs.forbidden_head.assign(n + 2, 0);
  cs.must_head.assign(n + 2, 0);
  cs.allowed_root.assign(n + 2, 1);
  cs.allowed_root[0] = cs.allowed_root[n + 1] = 0;
  bool any_verb = false, any_noun = false;
  for (int i = 1; i <= n; ++i) {
    const std::string& t = tags[i - 1];
    bool adp = cfg.adp_head && t == "ADP";
    if (cfg.function_words && !adp && cfg.function_tags.count(t)) cs.forbidden_head[i] = 1;
    if (adp) cs.must_head[i] = 1;
    any_verb |= cfg.verb_tags.count(t) > 0;
    any_noun |= cfg.noun_tags.count(t) > 0;
  }
  auto keep = [&](auto pred) {
    for (int i = 1; i <= n; ++i) cs.allowed_root[i] = pred(tags[i - 1]);
  };
  auto verb = [&](const std::string& t) { return cfg.verb_tags.count(t) > 0; };
  auto noun = [&](const std::string& t) { return cfg.noun_tags.count(t) > 0; };
  switch (cfg.root) {
    case RootConstraint::kNone: break;
    case RootConstraint::kVerbOrNoun:
      if (any_verb || any_noun) keep([&](const std::string& t) { return verb(t) || noun(t); });
      break;
    case RootConstraint::kVerbOtherwiseNoun:
      if (any_verb) keep(verb);
      else if (any_noun) keep(noun);
      break;
  }
  return cs;
}

ConstrainedSentence apply_constraints(const DmvParams& p, const std::vector<int>& tag_ids, const ConstraintSet& cs,
                                      double length_bias) {
  ConstrainedSentence out{dmv_sentence_weights(p, tag_ids), {}};
  SentenceWeights& sw = out.sw;
  int n = sw.n;
  if (static_cast<int>(cs.forbidden_head.size()) != n + 2) throw std::invalid_argument("constraint set size mismatch");
  out.fixed.assign(sw.w.size(), 0);
  for (int h = 1; h <= n; ++h) {
    if (cs.must_head[h]) sw.must_head[h] = 1;
    if (!cs.forbidden_head[h]) continue;
    for (int dir = 0; dir < 2; ++dir) {
      for (int s = 0; s < 2; ++s)
        for (int d = 1; d <= n; ++d)
          if (d != h) sw.att(Dir(dir), h, s, d) = kNegInf;
      sw.fin(Dir(dir), h, 0) = 0.0;
      out.fixed[sw.fin_id(Dir(dir), h, 0)] = 1;
    }
  }
  for (int d = 1; d <= n; ++d)
    if (!cs.allowed_root[d]) sw.att(Dir::kLeft, n + 1, 0, d) = kNegInf;
  if (length_bias != 0.0) {
    for (int h = 1; h <= n + 1; ++h)
      for (int d = 1; d <= n; ++d) {
        if (d == h) continue;
        Dir dir = d < h ? Dir::kLeft : Dir::kRight;
        double pen = -length_bias * (std::abs(h - d) - 1);
        for (int s = 0; s < 2; ++s) {
          double& x = sw.att(dir, h, s, d);
          if (x != kNegInf) x += pen;
        }
      }
  }
  return out;
}

namespace {

std::vector<int> ids_of(const std::vector<std::string>& tags, const std::map<std::string, int>& ids) {
  std::vector<int> out;
  for (const auto& t : tags) {
    auto it = ids.find(t);
    if (it == ids.end()) throw std::out_of_range("unknown tag: " + t);
    out.push_back(it->second);
  }
  return out;
}

std::map<std::string, int> tag_map(const std::vector<std::string>& tags) {
  std::map<std::string, int> m;
  for (size_t i = 0; i < tags.size(); ++i) m[tags[i]] = static_cast<int>(i);
  return m;
}

}  // namespace

DmvCounts harmonic_counts(const std::vector<std::vector<std::string>>& corpus, const std::vector<std::string>& tags,
                          const ConstraintConfig& cc) {
  auto ids = tag_map(tags);
  DmvParams uni = DmvParams::uniform(tags);
  DmvCounts total(static_cast<int>(tags.size()));
  const double half = std::log(0.5);
  for (const auto& sent : corpus) {
    auto tid = ids_of(sent, ids);
    auto cs = compile_constraints(sent, cc);
    auto con = apply_constraints(uni, tid, cs);
    SentenceWeights& sw = con.sw;
    int n = sw.n;
    for (int h = 1; h <= n; ++h)
      for (int dir = 0; dir < 2; ++dir) {
        for (int s = 0; s < 2; ++s) {
          if (!con.fixed[sw.fin_id(Dir(dir), h, s)] && sw.fin(Dir(dir), h, s) != kNegInf) sw.fin(Dir(dir), h, s) = half;
          for (int d = 1; d <= n; ++d) {
            if (d == h || (d < h) != (dir == 0)) continue;
            double& x = sw.att(Dir(dir), h, s, d);
            if (x != kNegInf) x = half - std::log(std::abs(h - d));
          }
        }
      }
    for (int d = 1; d <= n; ++d) {
      double& x = sw.att(Dir::kLeft, n + 1, 0, d);
      if (x != kNegInf) x = 0.0;
    }
    auto ec = eisner_expected_counts(sw);
    add_dmv_counts(sw, ec, tid, total, &con.fixed);
  }
  return total;
}

DmvParams harmonic_init(const std::vector<std::vector<std::string>>& corpus, const std::vector<std::string>& tags,
                        const ConstraintConfig& cc) {
  if (corpus.empty()) throw std::invalid_argument("harmonic_init: empty corpus");
  return normalize_counts(harmonic_counts(corpus, tags, cc), DmvParams::uniform(tags));
}

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os << "init=" << (init == InitKind::kHarmonic ? "harmonic" : "uniform");
  os << " depth=" << (policy.unbounded() ? std::string("inf") : std::to_string(policy.D));
  os << " relax_c=" << policy.C;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", length_bias);
  os << " length_bias=" << buf;
  os << " root=" << to_string(constraints.root);
  os << " function_words=" << (constraints.function_words ? "true" : "false");
  os << " adp_head=" << (constraints.adp_head ? "true" : "false");
  os << " em_iterations=" << em_iterations << " lbfgs_iterations=" << lbfgs_iterations;
  std::snprintf(buf, sizeof buf, "%g", sigma2);
  os << " sigma2=" << buf;
  return os.str();
}

EStepOutput constrained_e_step(const std::vector<std::vector<int>>& corpus,
                               const std::vector<std::vector<std::string>>& tags, const DmvParams& p,
                               const TrainConfig& cfg) {
  std::vector<DmvCounts> parts(corpus.size());
  std::vector<double> ll(corpus.size(), 0.0);
  std::vector<char> skipped(corpus.size(), 0);
  parallel_for(corpus.size(), cfg.jobs, [&](size_t i) {
    auto cs = compile_constraints(tags[i], cfg.constraints);
    auto con = apply_constraints(p, corpus[i], cs, cfg.length_bias);
    EventCounts ec = cfg.policy.unbounded() ? eisner_expected_counts(con.sw) : lc_expected_counts(con.sw, cfg.policy);
    parts[i] = DmvCounts(p.num_tags());
    if (ec.skipped) {
      skipped[i] = 1;
      return;
    }
    ll[i] = ec.log_z;
    add_dmv_counts(con.sw, ec, corpus[i], parts[i], &con.fixed);
  });
  EStepOutput r;
  r.counts = DmvCounts(p.num_tags());
  for (size_t i = 0; i < corpus.size(); ++i) {
    r.counts.merge(parts[i]);
    r.log_likelihood += ll[i];
    r.skipped += skipped[i];
  }
  return r;
}

std::vector<std::vector<std::string>> pos_sequences(const Corpus& corpus) {
  std::vector<std::vector<std::string>> out;
  for (const auto& t : corpus.sentences) {
    auto tags = t.tags();
    if (t.root_appended()) tags.pop_back();
    out.push_back(std::move(tags));
  }
  return out;
}

namespace {

double penalty(const std::vector<double>& w, double sigma2) {
  double s = 0;
  for (double x : w) s += x * x;
  return s / (2 * sigma2);
}

DmvModel make_model(FeaturizedDmv f, std::vector<double> w, std::string config) {
  DmvModel m;
  m.features = std::move(f);
  m.w = std::move(w);
  m.params = m.features.params(m.w);
  m.config = std::move(config);
  return m;
}

}  // namespace

TrainResult train(const std::vector<std::vector<std::string>>& corpus, const TrainConfig& cfg) {
  cfg.policy.validate();
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
  std::set<std::string> tagset;
  for (const auto& s : corpus) tagset.insert(s.begin(), s.end());
  FeaturizedDmv fm(std::vector<std::string>(tagset.begin(), tagset.end()));
  auto ids = tag_map(fm.tags());
  std::vector<std::vector<int>> tid;
  for (const auto& s : corpus) tid.push_back(ids_of(s, ids));

  std::vector<double> w(fm.num_features(), 0.0);
  if (cfg.init == InitKind::kHarmonic)
    w = fm.m_step(harmonic_counts(corpus, fm.tags(), cfg.constraints), w, cfg.sigma2, cfg.lbfgs_iterations);

  TrainResult res;
  double prev = kNegInf;
  for (int it = 1; it <= cfg.em_iterations; ++it) {
    EStepOutput e = constrained_e_step(tid, corpus, fm.params(w), cfg);
    if (e.skipped == static_cast<int>(corpus.size())) throw std::runtime_error("train: every sentence has zero mass");
    double obj = e.log_likelihood - penalty(w, cfg.sigma2);
    res.log.push_back({it, obj, e.skipped});
    if (it > 1 && std::abs(obj - prev) < cfg.tolerance) {
      res.converged = true;
      break;
    }
    prev = obj;
    w = fm.m_step(e.counts, w, cfg.sigma2, cfg.lbfgs_iterations);
  }
  res.model = make_model(std::move(fm), std::move(w), cfg.describe());
  return res;
}

DmvModel DmvModel::with_tags(const std::vector<std::string>& more) const {
  std::vector<std::string> tags = features.tags();
  std::set<std::string> have(tags.begin(), tags.end()), extra;
  for (const auto& t : more)
    if (!have.count(t)) extra.insert(t);
  if (extra.empty()) return *this;
  tags.insert(tags.end(), extra.begin(), extra.end());
  FeaturizedDmv f(tags);
  auto nw = f.import_weights(features, w);
  return make_model(std::move(f), std::move(nw), config);
}

std::string metrics_tsv(const std::vector<IterationLog>& log) {
  std::string out = "iter\tobjective\tskipped\n";
  char buf[96];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%d\t%.10f\t%d\n", r.iter, r.objective, r.skipped);
    out += buf;
  }
  return out;
}

namespace {

const char* kModelMagic = "# lcdep featurized DMV";
const char* kTemplates = "attach:h.d.dir,h.d,d.dir,d stop:h.dir.adj.dec,h.dir.dec,h.dec,dec";

}  // namespace

std::string write_model(const DmvModel& m) {
  std::string out = std::string(kModelMagic) + "\n";
  out += "tags";
  for (const auto& t : m.features.tags()) out += "\t" + t;
  out += "\nconfig\t" + m.config + "\ntemplates\t" + kTemplates + "\n";
  char buf[64];
  for (int i = 0; i < m.features.num_features(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", m.w[i]);
    out += m.features.index().key(i) + "\t" + buf + "\n";
  }
  return out;
}

DmvModel read_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) throw FormatError("model: missing header");
  std::vector<std::string> tags;
  std::string config;
  std::vector<std::pair<std::string, double>> weights;
  bool saw_tags = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    std::string key = line.substr(0, tab);
    std::string rest = tab == std::string::npos ? "" : line.substr(tab + 1);
    if (key == "tags") {
      std::istringstream ts(rest);
      std::string t;
      while (std::getline(ts, t, '\t'))
        if (!t.empty()) tags.push_back(t);
      saw_tags = true;
    } else if (key == "config") {
      config = rest;
    } else if (key == "templates") {
      if (rest != kTemplates) throw FormatError("model: unsupported templates");
    } else {
      if (tab == std::string::npos) throw FormatError("model line " + std::to_string(lineno) + ": missing weight");
      char* end = nullptr;
      double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str() || *end != '\0') throw FormatError("model line " + std::to_string(lineno) + ": bad weight");
      weights.emplace_back(key, v);
    }
  }
  if (!saw_tags) throw FormatError("model: missing tags line");
  FeaturizedDmv f(tags);
  std::vector<double> w(f.num_features(), 0.0);
  for (const auto& [k, v] : weights) {
    int id = f.index().find(k);
    if (id < 0) throw FormatError("model: unknown feature " + k);
    w[id] = v;
  }
  return make_model(std::move(f), std::move(w), config);
}

std::vector<int> decode(const DmvModel& m, const std::vector<std::string>& tags, const TrainConfig* constraints) {
  int n = static_cast<int>(tags.size());
  if (n == 0) return {};
  auto ids = ids_of(tags, tag_map(m.features.tags()));
  ViterbiResult v;
  if (constraints) {
    auto cs = compile_constraints(tags, constraints->constraints);
    auto con = apply_constraints(m.params, ids, cs, constraints->length_bias);
    v = constraints->policy.unbounded() ? eisner_viterbi(con.sw) : lc_viterbi(con.sw, constraints->policy);
  } else {
    v = eisner_viterbi(dmv_sentence_weights(m.params, ids));
  }
  if (v.heads.empty()) return {};
  std::vector<int> out(n);
  for (int d = 1; d <= n; ++d) out[d - 1] = v.heads[d] == n + 1 ? 0 : v.heads[d];
  return out;
}

Corpus parse_corpus(const DmvModel& m, const Corpus& corpus, int jobs) {
  auto seqs = pos_sequences(corpus);
  std::vector<std::string> all;
  for (const auto& s : seqs) all.insert(all.end(), s.begin(), s.end());
  DmvModel mm = m.with_tags(all);
  Corpus out;
  out.pos_column = corpus.pos_column;
  out.max_len = corpus.max_len;
  out.sentences.resize(corpus.sentences.size());
  parallel_for(seqs.size(), jobs, [&](size_t i) {
    auto heads = decode(mm, seqs[i]);
    std::vector<Token> toks(corpus.sentences[i].tokens().begin(),
                            corpus.sentences[i].tokens().begin() + static_cast<long>(seqs[i].size()));
    for (size_t k = 0; k < toks.size(); ++k) {
      toks[k].head = heads.empty() ? 0 : heads[k];
      toks[k].deprel = "_";
    }
    out.sentences[i] = DepTree(std::move(toks));
  });
  return out;
}

double evaluate_uas(const std::vector<DepTree>& predicted, const std::vector<DepTree>& gold,
                    const std::set<std::string>& punct_tags) {
  if (predicted.size() != gold.size()) throw std::invalid_argument("evaluate_uas: corpus size mismatch");
  long correct = 0, total = 0;
  auto norm = [](const DepTree& t, int i) {
    int n = t.size() - (t.root_appended() ? 1 : 0);
    int h = t.head(i);
    return t.root_appended() && h == n + 1 ? 0 : h;
  };
  for (size_t s = 0; s < gold.size(); ++s) {
    const DepTree& p = predicted[s];
    const DepTree& g = gold[s];
    int np = p.size() - (p.root_appended() ? 1 : 0);
    int ng = g.size() - (g.root_appended() ? 1 : 0);
    if (np != ng) throw std::invalid_argument("evaluate_uas: sentence " + std::to_string(s + 1) + " length mismatch");
    for (int i = 1; i <= ng; ++i) {
      if (punct_tags.count(g.pos(i))) continue;
      ++total;
      correct += norm(p, i) == norm(g, i);
    }
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

double evaluate_uas(const Corpus& predicted, const Corpus& gold, const std::set<std::string>& punct_tags) {
  return evaluate_uas(predicted.sentences, gold.sentences, punct_tags);
}

}  // namespace lcdep
