#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dmv_oracles.hpp"
#include "lcdep/sbg.hpp"

using namespace lcdep;

namespace {

const std::vector<std::string> kTags = {"A", "B", "C"};

std::vector<int> root_at(int n, std::vector<int> heads) {
  for (auto& h : heads)
    if (h == 0) h = n + 1;
  heads.insert(heads.begin(), 0);
  return heads;
}

}  // namespace

TEST_CASE("DMV transitions carry attach times continue weights") {
  auto p = DmvParams::random(kTags, 3);
  p.validate();
  auto a = dmv_to_sbg(p);
  int h = 1, d = 2;
  CHECK(a.left[h].trans[0][d] == doctest::Approx(p.att(h, Dir::kLeft, d) + p.st(h, Dir::kLeft, 0, false)));
  CHECK(a.left[h].trans[1][d] == doctest::Approx(p.att(h, Dir::kLeft, d) + p.st(h, Dir::kLeft, 1, false)));
  CHECK(a.left[h].fin[0] == p.st(h, Dir::kLeft, 0, true));
  CHECK(a.right[h].fin[1] == p.st(h, Dir::kRight, 1, true));
  CHECK(a.root.fin[0] == kNegInf);
  CHECK(a.root.fin[1] == 0.0);
  for (double x : a.root.trans[1]) CHECK(x == kNegInf);

  auto u = dmv_to_sbg(DmvParams::uniform({"X", "Y"}));
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 2; ++s) {
      CHECK(u.left[t].fin[s] == u.left[0].fin[0]);
      CHECK(u.right[t].fin[s] == u.left[0].fin[0]);
      for (int x = 0; x < 2; ++x) CHECK(u.left[t].trans[s][x] == u.right[0].trans[0][0]);
    }
}

TEST_CASE("one-token sentence has a closed-form marginal") {
  auto p = DmvParams::random(kTags, 5);
  std::vector<int> tags = {2};
  double expect = p.root[2] + p.st(2, Dir::kLeft, 0, true) + p.st(2, Dir::kRight, 0, true);
  auto sw = dmv_sentence_weights(p, tags);
  CHECK(eisner_inside(sw) == doctest::Approx(expect).epsilon(1e-12));
  auto ec = eisner_expected_counts(sw);
  DmvCounts c(3);
  add_dmv_counts(sw, ec, tags, c);
  CHECK(c.stop[((2 * 2 + 0) * 2 + 0) * 2] == doctest::Approx(1.0));
  CHECK(c.stop[((2 * 2 + 1) * 2 + 0) * 2] == doctest::Approx(1.0));
  CHECK(c.root[2] == doctest::Approx(1.0));
}

TEST_CASE("count semiring matches the number of projective trees") {
  auto p = DmvParams::uniform(kTags);
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> tags(n, 0);
    double c = eisner_inside(dmv_sentence_weights(p, tags), Semiring::kCount);
    CHECK(c == static_cast<double>(oracle::projective_trees(n).size()));
  }
  CHECK(eisner_inside(dmv_sentence_weights(p, {0, 1, 2}), Semiring::kCount) == 7.0);
}

TEST_CASE("inside equals brute-force marginal") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 6;
    auto p = DmvParams::random(kTags, 100 + trial, 0.7);
    auto tags = oracle::random_tags(rng, n, 3);
    double z = eisner_inside(dmv_sentence_weights(p, tags));
    CHECK(z == doctest::Approx(oracle::brute_marginal(p, tags)).epsilon(1e-10));
  }
}

TEST_CASE("expected counts equal brute-force expectations") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + trial % 5;
    auto p = DmvParams::random(kTags, 200 + trial, 0.7);
    auto tags = oracle::random_tags(rng, n, 3);
    auto sw = dmv_sentence_weights(p, tags);
    auto ec = eisner_expected_counts(sw);
    REQUIRE_FALSE(ec.skipped);
    DmvCounts c(3);
    add_dmv_counts(sw, ec, tags, c);
    CHECK(oracle::max_abs_diff(c, oracle::brute_expected(p, tags)) < 1e-8);

    double roots = 0;
    for (double x : c.root) roots += x;
    CHECK(roots == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : ec.c) {
      CHECK(x >= -1e-12);
      CHECK(x <= n + 1e-9);
    }
    // Every token receives exactly one head.
    for (int d = 1; d <= n; ++d) {
      double in = 0;
      for (int h = 1; h <= n + 1; ++h)
        for (int s = 0; s < 2; ++s)
          if (h != d) in += ec.c[sw.att_id(d < h ? Dir::kLeft : Dir::kRight, h, s, d)];
      CHECK(in == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("outside counts are derivatives of the log marginal") {
  auto p = DmvParams::random(kTags, 9, 0.8);
  std::vector<int> tags = {0, 2, 1, 1};
  auto sw = dmv_sentence_weights(p, tags);
  auto ec = eisner_expected_counts(sw);
  const double eps = 1e-6;
  for (size_t id = 0; id < sw.w.size(); ++id) {
    if (sw.w[id] == kNegInf) continue;
    auto up = sw, dn = sw;
    up.w[id] += eps;
    dn.w[id] -= eps;
    double fd = (eisner_inside(up) - eisner_inside(dn)) / (2 * eps);
    CHECK(ec.c[id] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("viterbi matches brute-force maximum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 5;
    auto p = DmvParams::random(kTags, 300 + trial, 0.5);
    auto tags = oracle::random_tags(rng, n, 3);
    auto sw = dmv_sentence_weights(p, tags);
    auto v = eisner_viterbi(sw);
    double bs;
    auto best = oracle::brute_best(p, tags, {}, &bs);
    CHECK(v.score == doctest::Approx(bs).epsilon(1e-10));
    CHECK(v.heads == best);
    CHECK(tree_log_weight(sw, v.heads) == doctest::Approx(v.score).epsilon(1e-12));
  }
}

TEST_CASE("viterbi returns a planted right-branching chain") {
  DmvParams p = DmvParams::uniform({"W"});
  p.root[0] = 0;
  p.st(0, Dir::kLeft, 0, true) = 0;
  p.st(0, Dir::kLeft, 0, false) = kNegInf;
  p.st(0, Dir::kRight, 0, true) = std::log(0.1);
  p.st(0, Dir::kRight, 0, false) = std::log(0.9);
  p.st(0, Dir::kRight, 1, true) = 0;
  p.st(0, Dir::kRight, 1, false) = kNegInf;
  auto v = eisner_viterbi(dmv_sentence_weights(p, {0, 0, 0, 0, 0}));
  CHECK(v.heads == root_at(5, {0, 1, 2, 3, 4}));
}

TEST_CASE("ties resolve to lower heads") {
  // Under uniform parameters w1 <- w2 and w1 -> w2 score the same.
  auto p = DmvParams::uniform({"W"});
  auto v = eisner_viterbi(dmv_sentence_weights(p, {0, 0}));
  CHECK(v.heads == root_at(2, {0, 1}));
  CHECK(v.heads == oracle::brute_best(p, {0, 0}));
  auto v3 = eisner_viterbi(dmv_sentence_weights(p, {0, 0, 0}));
  CHECK(v3.heads == oracle::brute_best(p, {0, 0, 0}));
}

TEST_CASE("must-head tokens are never leaves") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 4;
    auto p = DmvParams::random(kTags, 400 + trial, 0.7);
    auto tags = oracle::random_tags(rng, n, 3);
    auto sw = dmv_sentence_weights(p, tags);
    std::vector<int> must;
    for (int i = 1; i <= n; ++i)
      if (tags[i - 1] == 0) sw.must_head[i] = 1, must.push_back(i);
    auto keep = [&](const std::vector<int>& h) {
      for (int m : must) {
        bool has = false;
        for (int d = 1; d <= n; ++d) has |= h[d] == m;
        if (!has) return false;
      }
      return true;
    };
    double bz = oracle::brute_marginal(p, tags, keep);
    double z = eisner_inside(sw);
    if (bz == kNegInf) {
      CHECK(z == kNegInf);
      continue;
    }
    CHECK(z == doctest::Approx(bz).epsilon(1e-10));
    auto ec = eisner_expected_counts(sw);
    DmvCounts c(3);
    add_dmv_counts(sw, ec, tags, c);
    CHECK(oracle::max_abs_diff(c, oracle::brute_expected(p, tags, keep)) < 1e-8);
    CHECK(eisner_viterbi(sw).heads == oracle::brute_best(p, tags, keep));
  }
}

TEST_CASE("EM on a one-token corpus drives stop probabilities to one") {
  auto p = DmvParams::uniform({"X", "Y"});
  auto q = em_step({{0}}, p);
  CHECK(q.st(0, Dir::kLeft, 0, true) == doctest::Approx(0.0));
  CHECK(q.st(0, Dir::kRight, 0, true) == doctest::Approx(0.0));
  CHECK(q.root[0] == doctest::Approx(0.0));
  q.validate();
}

TEST_CASE("EM likelihood is non-decreasing") {
  std::mt19937_64 rng(53);
  for (int c = 0; c < 5; ++c) {
    std::vector<std::vector<int>> corpus;
    for (int s = 0; s < 8; ++s) corpus.push_back(oracle::random_tags(rng, 1 + s % 6, 3));
    auto p = DmvParams::random(kTags, 500 + c);
    double prev = kNegInf;
    for (int it = 0; it < 20; ++it) {
      double ll;
      p = em_step(corpus, p, &ll, 2);
      CHECK(ll >= prev - 1e-9);
      prev = ll;
      p.validate(1e-9);
    }
  }
}

TEST_CASE("EM fixed point") {
  std::vector<std::vector<int>> corpus = {{0, 1, 2}};
  auto p = DmvParams::random(kTags, 7);
  for (int it = 0; it < 3000; ++it) p = em_step(corpus, p);
  auto q = em_step(corpus, p);
  for (size_t i = 0; i < p.attach.size(); ++i)
    if (std::isfinite(p.attach[i])) CHECK(std::exp(q.attach[i]) == doctest::Approx(std::exp(p.attach[i])).epsilon(1e-9).scale(1));
  for (size_t i = 0; i < p.stop.size(); ++i)
    if (std::isfinite(p.stop[i])) CHECK(std::exp(q.stop[i]) == doctest::Approx(std::exp(p.stop[i])).epsilon(1e-9).scale(1));
}

TEST_CASE("model text round trip") {
  auto p = DmvParams::random(kTags, 11);
  p.st(1, Dir::kLeft, 0, true) = kNegInf;
  auto text = write_dmv(p);
  CHECK(text.find("attach\tA|left\tB\t") != std::string::npos);
  CHECK(text.find("stop\tB|left|adj\tstop\t-inf") != std::string::npos);
  auto q = read_dmv(text);
  CHECK(q.tags == p.tags);
  CHECK(q.attach == p.attach);
  CHECK(q.stop == p.stop);
  CHECK(q.root == p.root);
  CHECK_THROWS_AS(read_dmv("bogus\tx\ty\t0\n"), FormatError);
  CHECK_THROWS_AS(read_dmv("root\t$\tA\t0\nattach\tZ|left\tA\t0\n"), FormatError);
}
