#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "lcdep/treebank.hpp"
#include "oracles.hpp"

using namespace lcdep;

namespace {

const char* kSample =
    "# sent_id = 1\n"
    "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
    "2\tdog\tdog\tNOUN\tNN\t_\t3\tnsubj\t_\t_\n"
    "3\tbarks\tbark\tVERB\tVBZ\t_\t0\troot\t_\t_\n"
    "4\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\t_\n"
    "\n"
    "1-2\tdu\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "1\tde\tde\tADP\tP\t_\t2\tcase\t_\t_\n"
    "2\tle\tle\tDET\tD\t_\t0\troot\t_\t_\n";

}  // namespace

TEST_CASE("conll round trip") {
  Corpus c = parse_conll(kSample);
  REQUIRE(c.sentences.size() == 2);
  CHECK(c.sentences[0].size() == 4);
  CHECK(c.sentences[0].pos(1) == "DET");
  CHECK(c.sentences[0].head(2) == 3);
  CHECK(c.sentences[1].size() == 2);
  Corpus again = parse_conll(write_conll(c));
  REQUIRE(again.sentences.size() == 2);
  CHECK(again.sentences[0].heads() == c.sentences[0].heads());
  CHECK(again.sentences[0].tags() == c.sentences[0].tags());

  Corpus fine = parse_conll(kSample, PosColumn::kFine);
  CHECK(fine.sentences[0].pos(3) == "VBZ");
}

TEST_CASE("malformed input reports location") {
  CHECK_THROWS_WITH_AS(parse_conll("1\tx\tx\tN\n"), doctest::Contains("line 1"), FormatError);
  CHECK_THROWS_WITH_AS(parse_conll("1\ta\ta\tN\tN\t_\tz\t_\t_\t_\n"), doctest::Contains("HEAD"), FormatError);
  CHECK_THROWS_WITH_AS(parse_conll("1\ta\ta\tN\tN\t_\t2\t_\t_\t_\n2\tb\tb\tN\tN\t_\t1\t_\t_\t_\n"),
                       doctest::Contains("cycle"), FormatError);
  CHECK_THROWS_AS(parse_conll("1\ta\ta\tN\tN\t_\t0\t_\t_\t_\n3\tb\tb\tN\tN\t_\t1\t_\t_\t_\n"), FormatError);
}

TEST_CASE("tag inventory") {
  CHECK(kUdTags.size() == 17);
  CHECK(std::count(kUdTags.begin(), kUdTags.end(), "PROPN") == 1);
  CHECK(std::set<std::string>(kUdTags.begin(), kUdTags.end()).size() == 17);
}

TEST_CASE("length filter excludes the artificial root") {
  Corpus c = parse_conll(kSample);
  CHECK(filter_length(c, 3).sentences.size() == 1);
  Corpus r;
  for (auto& t : c.sentences) r.sentences.push_back(append_root(t));
  CHECK(filter_length(r, 4).sentences.size() == 2);
  CHECK(filter_length(r, 2).sentences.size() == 1);
}

TEST_CASE("punctuation removal reattaches to nearest kept ancestor") {
  // 1 <- 2(punct) <- 3 root
  auto t = DepTree::from_heads({2, 3, 0}, {"NOUN", "PUNCT", "VERB"});
  auto s = strip_punctuation(t, kUdPunctTags);
  REQUIRE(s.size() == 2);
  CHECK(s.head(1) == 2);
  CHECK(s.head(2) == 0);
}

TEST_CASE("projectivity against crossing-arc definition") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& h : oracle::all_trees(n))
      CHECK(is_projective(oracle::tree_from(h)) == oracle::projective_by_crossing(h));
}

TEST_CASE("projectivize lifts the relative clause") {
  // Mary met the senator yesterday who attacked the reporter
  auto t = DepTree::from_heads({2, 0, 4, 2, 2, 4, 6, 9, 7});
  CHECK_FALSE(is_projective(t));
  auto p = projectivize(t);
  CHECK(is_projective(p));
  CHECK(p.head(6) == 2);
  for (int i = 1; i <= 9; ++i)
    if (i != 6) CHECK(p.head(i) == t.head(i));
}

TEST_CASE("projectivize yields projective trees on all small inputs") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& h : oracle::all_trees(n)) {
      auto t = oracle::tree_from(h);
      auto p = projectivize(t);
      CHECK(is_projective(p));
      p.validate();
      if (is_projective(t)) CHECK(p.heads() == t.heads());
    }
}

TEST_CASE("append_root") {
  auto t = DepTree::from_heads({2, 0});
  auto r = append_root(t);
  REQUIRE(r.size() == 3);
  CHECK(r.root_appended());
  CHECK(r.pos(3) == "$");
  CHECK(r.head(2) == 3);
  CHECK(r.head(3) == 0);
  CHECK_THROWS_AS(append_root(r), std::logic_error);
  auto back = parse_conll(write_conll(r)).sentences.at(0);
  CHECK(back.heads() == t.heads());
}

TEST_CASE("random reordering preserves projectivity and determinism") {
  auto trees = oracle::projective_trees(6);
  for (size_t k = 0; k < trees.size(); k += 7) {
    auto t = append_root(oracle::tree_from(trees[k]));
    auto a = random_reorder(t, 42 + k);
    auto b = random_reorder(t, 42 + k);
    CHECK(a.heads() == b.heads());
    CHECK(a.tags() == b.tags());
    CHECK(is_projective(a));
    CHECK(a.pos(a.size()) == "$");
    auto ta = a.tags(), tt = t.tags();
    std::sort(ta.begin(), ta.end());
    std::sort(tt.begin(), tt.end());
    CHECK(ta == tt);
  }
}

TEST_CASE("projective tree enumeration counts") {
  const int expected[] = {0, 1, 2, 7, 30, 143, 728};
  for (int n = 1; n <= 6; ++n) CHECK(oracle::projective_trees(n).size() == static_cast<size_t>(expected[n]));
  for (int n = 1; n <= 5; ++n) {
    size_t proj = 0;
    for (const auto& h : oracle::all_trees(n)) proj += oracle::projective_by_crossing(h);
    CHECK(proj == oracle::projective_trees(n).size());
  }
}
