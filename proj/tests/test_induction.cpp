#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dmv_oracles.hpp"
#include "lcdep/induction.hpp"
#include "lcdep/transition.hpp"
#include "synthetic.hpp"

using namespace lcdep;

namespace {

const std::vector<std::string> kTags = {"DET", "NOUN", "VERB", "ADP"};

std::vector<std::string> names(const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int i : ids) out.push_back(kTags[i]);
  return out;
}

DmvCounts random_counts(int T, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 3);
  DmvCounts c(T);
  for (auto& x : c.attach) x = u(rng) < 1 ? 0 : u(rng);
  for (auto& x : c.stop) x = u(rng);
  for (auto& x : c.root) x = u(rng);
  return c;
}

// sum c log theta computed from the normalized parameters.
double expected_ll(const DmvParams& p, const DmvCounts& c) {
  double s = 0;
  for (size_t i = 0; i < c.attach.size(); ++i)
    if (c.attach[i] > 0) s += c.attach[i] * p.attach[i];
  for (size_t i = 0; i < c.stop.size(); ++i)
    if (c.stop[i] > 0) s += c.stop[i] * p.stop[i];
  for (size_t i = 0; i < c.root.size(); ++i)
    if (c.root[i] > 0) s += c.root[i] * p.root[i];
  return s;
}

bool same(double a, double b) { return a == b || std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

}  // namespace

TEST_CASE("featurization shares direction-free and backoff features") {
  FeatureIndex idx;
  auto r = featurize(DmvEvent::attachment("VERB", "NOUN", Dir::kRight), idx);
  auto l = featurize(DmvEvent::attachment("VERB", "NOUN", Dir::kLeft), idx);
  int hd = idx.find("att|h=VERB|d=NOUN");
  REQUIRE(hd >= 0);
  CHECK(std::count(r.begin(), r.end(), hd) == 1);
  CHECK(std::count(l.begin(), l.end(), hd) == 1);
  CHECK(r != l);

  auto s = featurize(DmvEvent::stopping("NOUN", Dir::kLeft, true, true), idx);
  int backoff = idx.find("stop|h=NOUN|dec=STOP");
  REQUIRE(backoff >= 0);
  CHECK(std::count(s.begin(), s.end(), backoff) == 1);
  auto s2 = featurize(DmvEvent::stopping("NOUN", Dir::kRight, false, true), idx);
  CHECK(std::count(s2.begin(), s2.end(), backoff) == 1);

  int before = idx.size();
  CHECK(featurize(DmvEvent::attachment("VERB", "NOUN", Dir::kRight), idx) == r);
  CHECK(idx.size() == before);
  featurize(DmvEvent::attachment("VERB", "NEWTAG", Dir::kRight), idx);
  CHECK(idx.size() > before);
}

TEST_CASE("zero weights give uniform multinomials") {
  FeaturizedDmv m(kTags);
  auto p = m.params(std::vector<double>(m.num_features(), 0.0));
  p.validate();
  auto u = DmvParams::uniform(kTags);
  for (size_t i = 0; i < p.attach.size(); ++i) CHECK(p.attach[i] == doctest::Approx(u.attach[i]));
  for (size_t i = 0; i < p.stop.size(); ++i) CHECK(p.stop[i] == doctest::Approx(u.stop[i]));
  for (size_t i = 0; i < p.root.size(); ++i) CHECK(p.root[i] == doctest::Approx(u.root[i]));
}

TEST_CASE("softmax is monotone in a single decision feature") {
  FeaturizedDmv m(kTags);
  int f = m.index().find("att|h=VERB|d=NOUN|dir=R");
  REQUIRE(f >= 0);
  std::vector<double> w(m.num_features(), 0.0);
  double prev = -1;
  for (double x : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    w[f] = x;
    auto p = weights_to_params(m, w);
    p.validate();
    double q = std::exp(p.att(2, Dir::kRight, 1));
    CHECK(q > prev);
    prev = q;
  }
}

TEST_CASE("M-step objective matches the normalized parameters") {
  std::mt19937_64 rng(3);
  FeaturizedDmv m(kTags);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_counts(4, rng);
    std::vector<double> w(m.num_features());
    for (auto& x : w) x = g(rng);
    double pen = 0;
    for (double x : w) pen += x * x / 20;
    CHECK(m.objective(c, w, 10.0) == doctest::Approx(expected_ll(m.params(w), c) - pen).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(5);
  FeaturizedDmv m(kTags);
  std::normal_distribution<double> g(0, 0.8);
  for (int trial = 0; trial < 3; ++trial) {
    auto c = random_counts(4, rng);
    std::vector<double> w(m.num_features());
    for (auto& x : w) x = g(rng);
    std::vector<double> grad;
    m.objective(c, w, 10.0, &grad);
    const double h = 1e-5;
    double worst = 0;
    for (int i = 0; i < m.num_features(); ++i) {
      auto up = w, dn = w;
      up[i] += h;
      dn[i] -= h;
      double fd = (m.objective(c, up, 10.0) - m.objective(c, dn, 10.0)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(fd)));
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("M-step improves the penalized objective") {
  std::mt19937_64 rng(7);
  FeaturizedDmv m(kTags);
  auto c = random_counts(4, rng);
  std::vector<double> w0(m.num_features(), 0.0);
  auto w = m.m_step(c, w0, 10.0, 100);
  CHECK(m.objective(c, w, 10.0) > m.objective(c, w0, 10.0));
  std::vector<double> grad;
  m.objective(c, w, 10.0, &grad);
  double gmax = 0;
  for (double x : grad) gmax = std::max(gmax, std::abs(x));
  CHECK(gmax < 1e-3);
}

TEST_CASE("length bias rescales each tree by its total arc length") {
  std::mt19937_64 rng(11);
  for (double beta : {0.1, 1.0})
    for (int n = 1; n <= 5; ++n) {
      auto p = DmvParams::random(kTags, 50 + n);
      auto ids = oracle::random_tags(rng, n, 4);
      auto tags = names(ids);
      auto cs = compile_constraints(tags, {});
      auto biased = apply_constraints(p, ids, cs, beta);
      for (const auto& h : oracle::rooted_trees(n)) {
        double len = 0;
        for (int d = 1; d <= n; ++d) len += std::abs(h[d] - d);
        double expect = oracle::dmv_logprob(p, ids, h) - beta * (len - n);
        CHECK(tree_log_weight(biased.sw, h) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
}

TEST_CASE("adjacent-only trees are unaffected by the length bias") {
  auto p = DmvParams::random(kTags, 13);
  std::vector<int> ids = {0, 1, 2, 3};
  std::vector<int> chain = {0, 2, 3, 4, 5};  // i -> i+1, last token to $
  auto biased = apply_constraints(p, ids, compile_constraints(names(ids), {}), 0.1);
  CHECK(tree_log_weight(biased.sw, chain) == oracle::dmv_logprob(p, ids, chain));
}

TEST_CASE("function words cannot head") {
  ConstraintConfig cc;
  cc.function_words = true;
  auto p = DmvParams::random(kTags, 17);
  std::vector<int> ids = {0, 1, 2, 0, 1};
  auto tags = names(ids);
  auto con = apply_constraints(p, ids, compile_constraints(tags, cc));
  auto fw = [&](const std::vector<int>& h) {
    for (int d = 1; d <= 5; ++d)
      if (h[d] <= 5 && cc.function_tags.count(tags[h[d] - 1])) return false;
    return true;
  };
  int allowed = 0;
  for (const auto& h : oracle::rooted_trees(5)) {
    double w = tree_log_weight(con.sw, h);
    if (!fw(h)) {
      CHECK(w == kNegInf);
      continue;
    }
    ++allowed;
    // Pinned stop events of the leaves drop out of the score.
    double leaf_stops = 2 * (p.st(0, Dir::kLeft, 0, true) + p.st(0, Dir::kRight, 0, true));  // two DETs
    CHECK(w == doctest::Approx(oracle::dmv_logprob(p, ids, h) - leaf_stops).epsilon(1e-12));
  }
  CHECK(allowed > 0);

  // Expected counts equal filtered expectations with the pinned events removed.
  auto ec = eisner_expected_counts(con.sw);
  DmvCounts c(4);
  add_dmv_counts(con.sw, ec, ids, c, &con.fixed);
  auto brute = oracle::brute_expected(p, ids, fw);
  for (int dir = 0; dir < 2; ++dir) brute.stop[((0 * 2 + dir) * 2 + 0) * 2] = 0;
  CHECK(oracle::max_abs_diff(c, brute) < 1e-9);
}

TEST_CASE("root candidates") {
  ConstraintConfig cc;
  cc.root = RootConstraint::kVerbOtherwiseNoun;
  auto a = compile_constraints({"DET", "NOUN", "VERB", "PRON"}, cc);
  CHECK(a.allowed_root == std::vector<char>{0, 0, 0, 1, 0, 0});
  auto b = compile_constraints({"DET", "NOUN", "ADP", "PROPN"}, cc);
  CHECK(b.allowed_root == std::vector<char>{0, 0, 1, 0, 1, 0});
  auto c = compile_constraints({"DET", "ADJ"}, cc);
  CHECK(c.allowed_root == std::vector<char>{0, 1, 1, 0});
  cc.root = RootConstraint::kVerbOrNoun;
  auto d = compile_constraints({"DET", "NOUN", "VERB", "PRON"}, cc);
  CHECK(d.allowed_root == std::vector<char>{0, 0, 1, 1, 1, 0});
  auto e = compile_constraints({"DET", "ADJ"}, cc);
  CHECK(e.allowed_root == std::vector<char>{0, 1, 1, 0});
  CHECK(root_constraint_from_string(to_string(RootConstraint::kVerbOrNoun)) == RootConstraint::kVerbOrNoun);
  CHECK_THROWS(root_constraint_from_string("verbs"));
}

TEST_CASE("adpositions must head when the ADP constraint is on") {
  ConstraintConfig cc;
  cc.function_words = true;
  cc.function_tags = kGoogleFunctionTags;
  cc.adp_head = true;
  auto cs = compile_constraints({"ADP", "DET", "NOUN"}, cc);
  CHECK(cs.must_head[1] == 1);
  CHECK(cs.forbidden_head[1] == 0);
  CHECK(cs.forbidden_head[2] == 1);
}

TEST_CASE("constrained decoding satisfies every active constraint") {
  std::mt19937_64 rng(19);
  TrainConfig tc;
  tc.constraints.function_words = true;
  tc.constraints.function_tags = {"DET"};
  tc.constraints.adp_head = true;
  tc.constraints.root = RootConstraint::kVerbOtherwiseNoun;
  FeaturizedDmv fm(kTags);
  std::normal_distribution<double> g(0, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 5;
    DmvModel m;
    m.features = fm;
    m.w.resize(fm.num_features());
    for (auto& x : m.w) x = g(rng);
    m.params = fm.params(m.w);
    auto tags = names(oracle::random_tags(rng, n, 4));
    tc.policy = trial % 2 ? DepthPolicy{1, 2} : DepthPolicy{};
    auto heads = decode(m, tags, &tc);
    if (heads.empty()) continue;
    ++checked;
    auto cs = compile_constraints(tags, tc.constraints);
    std::vector<int> deps(n + 1, 0);
    for (int d = 1; d <= n; ++d) {
      int h = heads[d - 1];
      if (h == 0) CHECK(cs.allowed_root[d]);
      else {
        CHECK(tags[h - 1] != "DET");
        deps[h]++;
      }
    }
    for (int i = 1; i <= n; ++i)
      if (tags[i - 1] == "ADP") CHECK(deps[i] > 0);
    if (!tc.policy.unbounded()) {
      auto tree = append_root(DepTree::from_heads(heads, tags));
      CHECK(relaxed_depth_re_max(run_oracle(tree, System::kLeftCorner), 2) <= 1);
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("harmonic initialization") {
  // All distances are 1 in two-token sentences.
  std::vector<std::vector<std::string>> two = {{"DET", "NOUN"}, {"NOUN", "VERB"}, {"VERB", "VERB"}};
  auto h = harmonic_init(two, kTags);
  std::vector<std::vector<int>> ids = {{0, 1}, {1, 2}, {2, 2}};
  auto u = em_step(ids, DmvParams::uniform(kTags));
  for (size_t i = 0; i < h.attach.size(); ++i) CHECK(same(h.attach[i], u.attach[i]));
  for (size_t i = 0; i < h.stop.size(); ++i) CHECK(same(h.stop[i], u.stop[i]));
  for (size_t i = 0; i < h.root.size(); ++i) CHECK(same(h.root[i], u.root[i]));

  // Three tokens: posterior over the seven trees weights each by prod 1/|h-d|.
  std::vector<std::vector<std::string>> three = {{"DET", "NOUN", "VERB"}};
  auto c = harmonic_counts(three, kTags);
  double z = 0, adj = 0, far = 0;
  for (const auto& t : oracle::rooted_trees(3)) {
    double w = 1;
    for (int d = 1; d <= 3; ++d)
      if (t[d] != 4) w /= std::abs(t[d] - d);
    z += w;
    if (t[2] == 1) adj += w;  // DET -> NOUN
    if (t[3] == 1) far += w;  // DET -> VERB
  }
  int T = 4;
  CHECK(c.attach[(0 * 2 + 1) * T + 1] == doctest::Approx(adj / z).epsilon(1e-12));
  CHECK(c.attach[(0 * 2 + 1) * T + 2] == doctest::Approx(far / z).epsilon(1e-12));
  CHECK(adj > far);
  auto p3 = harmonic_init(three, kTags);
  CHECK(p3.att(0, Dir::kRight, 1) > p3.att(0, Dir::kRight, 2));

  auto again = harmonic_init(three, kTags);
  CHECK(again.attach == p3.attach);
  CHECK(again.stop == p3.stop);
}

TEST_CASE("one-token corpus converges after one M-step") {
  TrainConfig cfg;
  auto r = train({{"NOUN"}}, cfg);
  REQUIRE(r.converged);
  REQUIRE(r.log.size() >= 2);
  CHECK(std::abs(r.log[2].objective - r.log[1].objective) < 1e-6);
  CHECK(r.log.size() == 3);
  const auto& p = r.model.params;
  CHECK(std::exp(p.st(0, Dir::kLeft, 0, true)) > 0.95);
  CHECK(std::exp(p.st(0, Dir::kRight, 0, true)) > 0.95);
}

TEST_CASE("EM objective is non-decreasing under constraints") {
  std::mt19937_64 rng(29);
  for (int c = 0; c < 4; ++c) {
    std::vector<std::vector<std::string>> corpus;
    for (int s = 0; s < 20; ++s) corpus.push_back(names(oracle::random_tags(rng, 1 + s % 7, 4)));
    TrainConfig cfg;
    cfg.em_iterations = 10;
    cfg.tolerance = 0;
    cfg.jobs = 2;
    if (c % 2 == 0) cfg.policy = {1, 3};
    if (c == 1) cfg.length_bias = 0.1;
    if (c == 3) {
      cfg.constraints.function_words = true;
      cfg.constraints.root = RootConstraint::kVerbOrNoun;
      cfg.init = InitKind::kHarmonic;
    }
    auto r = train(corpus, cfg);
    for (size_t i = 1; i < r.log.size(); ++i) CHECK(r.log[i].objective >= r.log[i - 1].objective - 1e-6);
  }
}

TEST_CASE("zero-mass sentences are skipped and counted") {
  TrainConfig cfg;
  cfg.constraints.function_words = true;
  cfg.em_iterations = 2;
  auto r = train({{"DET", "DET"}, {"NOUN", "DET"}}, cfg);
  CHECK(r.log[0].skipped == 1);
  CHECK_THROWS(train({{"DET", "DET"}}, cfg));
}

TEST_CASE("planted grammar only generates depth-one trees") {
  auto p = synth::planted_dmv();
  p.validate(1e-12);
  auto s = synth::sample_corpus(p, 300, 10, 5);
  int longest = 0;
  for (const auto& t : s.gold) {
    longest = std::max(longest, t.size());
    CHECK(relaxed_depth_re_max(run_oracle(append_root(t), System::kLeftCorner), 1) <= 1);
  }
  CHECK(longest == 10);
}

TEST_CASE("UAS") {
  auto g = DepTree::from_heads({2, 0}, {"DET", "NOUN"});
  CHECK(evaluate_uas(std::vector<DepTree>{g}, {g}) == 100.0);
  auto p = DepTree::from_heads({0, 0}, {"DET", "NOUN"});
  CHECK(evaluate_uas(std::vector<DepTree>{p}, {g}) == 50.0);
  CHECK(evaluate_uas(std::vector<DepTree>{append_root(g)}, {g}) == 100.0);
  auto gp = DepTree::from_heads({2, 0, 2}, {"DET", "NOUN", "PUNCT"});
  auto pp = DepTree::from_heads({2, 0, 1}, {"DET", "NOUN", "PUNCT"});
  CHECK(evaluate_uas(std::vector<DepTree>{pp}, {gp}) == 100.0);
  CHECK_THROWS(evaluate_uas(std::vector<DepTree>{g}, {gp}));
}

TEST_CASE("model file round trip") {
  auto r = train({{"DET", "NOUN", "VERB"}, {"NOUN", "VERB"}}, TrainConfig{});
  auto text = write_model(r.model);
  CHECK(text.find("config\tinit=uniform depth=inf") != std::string::npos);
  auto m = read_model(text);
  CHECK(m.features.tags() == r.model.features.tags());
  CHECK(m.w == r.model.w);
  CHECK(m.params.attach == r.model.params.attach);
  CHECK(write_model(m) == text);
  CHECK_THROWS_AS(read_model("nonsense\n"), FormatError);
  CHECK_THROWS_AS(read_model(text + "att|h=ZZZ\t1\n"), FormatError);

  auto wider = m.with_tags({"ADJ", "NOUN"});
  CHECK(wider.features.num_tags() == 4);
  wider.params.validate(1e-9);
  auto a = decode(m, {"DET", "NOUN", "VERB"});
  CHECK(decode(wider, {"DET", "NOUN", "VERB"}).size() == 3);
  CHECK(a.size() == 3);
}
