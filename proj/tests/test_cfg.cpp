#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <climits>

#include "lcdep/cfg.hpp"
#include "oracles.hpp"

using namespace lcdep;

namespace {

const char* kDegreeOne = "(S (A' a) (B (C (B' b) (C' c)) (D d)))";
const char* kDegreeTwo =
    "(S (A'' a') (B1 (C1 (A' a) (B2 (C2 (B' b) (C' c)) (D2 d))) (D1 d')))";
const char* kMirror = "(S (B (A' a) (C (B' b) (C' c))) (D d))";

}  // namespace

TEST_CASE("bracket io") {
  auto p = CfgParse::parse_bracketed(kDegreeOne);
  CHECK(p.num_terminals() == 4);
  CHECK(p.is_cnf());
  CHECK(p.to_bracketed() == kDegreeOne);
  CHECK_THROWS_AS(CfgParse::parse_bracketed("(S (A a)"), FormatError);
  CHECK_THROWS_AS(CfgParse::parse_bracketed("(S a (B b))"), FormatError);
  auto flat = CfgParse::parse_bracketed("(S (A a) (B b) (C c))");
  CHECK_FALSE(flat.is_cnf());
  CHECK_THROWS_AS(simulate_pda(flat, PdaVariant::kMain), std::invalid_argument);
}

TEST_CASE("embedding degree of the minimal patterns") {
  CHECK(embedding_degree(CfgParse::parse_bracketed(kDegreeOne)) == 1);
  CHECK(embedding_degree(CfgParse::parse_bracketed(kDegreeTwo)) == 2);
  CHECK(embedding_degree(CfgParse::parse_bracketed(kMirror)) == 0);
  CHECK(embedding_degree(CfgParse::parse_bracketed("(S (X (Y (Z (P a) (Q b)) (R c)) (T d)) (U e))")) == 0);
}

TEST_CASE("degree agrees with path enumeration on all small parses") {
  for (int m = 1; m <= 7; ++m)
    for (const auto& p : oracle::all_cnf_parses(m))
      CHECK(embedding_degree(p) == oracle::embedding_degree_by_paths(p));
}

TEST_CASE("token degrees") {
  auto p = CfgParse::parse_bracketed(kDegreeOne);
  CHECK(token_embedding_degree(p, 1) == 0);
  CHECK(token_embedding_degree(p, 3) == 1);
  CHECK(token_embedding_degree(p, 4) == 0);
  for (const auto& q : oracle::all_cnf_parses(4)) {
    CHECK(token_embedding_degree(q, 1) == 0);
    CHECK(token_embedding_degree(q, 4) == 0);
  }
}

TEST_CASE("main PDA trace on the degree-one parse") {
  auto p = CfgParse::parse_bracketed(kDegreeOne);
  auto tr = simulate_pda(p, PdaVariant::kMain);
  CHECK(tr.accepted);
  REQUIRE(tr.steps.size() == 7);
  CHECK(tr.steps[3].action == "Prediction");
  CHECK(tr.steps[3].stack == std::vector<std::string>{"S/B", "C/C'"});
  CHECK(tr.steps[3].depth == 2);
  CHECK(max_depth_after_reduce(tr) == 2);
  CHECK(tr.steps[6].stack == std::vector<std::string>{"S"});
}

TEST_CASE("alt PDA depth readings") {
  auto b = simulate_pda(CfgParse::parse_bracketed(kDegreeOne), PdaVariant::kAlt);
  CHECK(b.accepted);
  REQUIRE(b.steps.size() == 7);
  CHECK(b.steps[1].stack == std::vector<std::string>{"B"});
  CHECK(b.steps[3].stack == std::vector<std::string>{"B-C", "C'"});
  CHECK(b.steps[6].stack.empty());
  for (size_t i = 0; i + 1 < b.steps.size(); ++i)
    if (b.steps[i].phase == Phase::kAfterShift) CHECK(b.steps[i].depth == 1);
  auto d = simulate_pda(CfgParse::parse_bracketed(kMirror), PdaVariant::kAlt);
  CHECK(d.accepted);
  CHECK(d.steps[2].phase == Phase::kAfterShift);
  CHECK(d.steps[2].depth == 2);
  CHECK(d.steps[2].stack == std::vector<std::string>{"S-B", "C-B'"});
  CHECK(d.steps[3].stack == std::vector<std::string>{"S-B", "C'"});
  CHECK(max_depth_after_shift(d) == 2);
  auto dm = simulate_pda(CfgParse::parse_bracketed(kMirror), PdaVariant::kMain);
  // Degree readings: main (after reduce − 1), alt (after shift − 1).
  CHECK(max_depth_after_reduce(simulate_pda(CfgParse::parse_bracketed(kDegreeOne), PdaVariant::kMain)) - 1 == 1);
  CHECK(max_depth_after_shift(b) - 1 == 0);
  CHECK(max_depth_after_reduce(dm) - 1 == 0);
  CHECK(max_depth_after_shift(d) - 1 == 1);
}

TEST_CASE("left-branching parse keeps depth one") {
  auto p = CfgParse::parse_bracketed("(S (X (Y (Z (P a) (Q b)) (R c)) (T d)) (U e))");
  CHECK(max_depth_after_reduce(simulate_pda(p, PdaVariant::kMain)) == 1);
}

TEST_CASE("PDA invariants on all parses up to six terminals") {
  for (int m = 1; m <= 6; ++m)
    for (const auto& p : oracle::all_cnf_parses(m)) {
      auto tr = simulate_pda(p, PdaVariant::kMain);
      REQUIRE(tr.accepted);
      CHECK(tr.steps.size() == static_cast<size_t>(2 * m - 1));
      for (size_t i = 0; i < tr.steps.size(); ++i) {
        CHECK((tr.steps[i].phase == Phase::kAfterShift) == (i % 2 == 0));
        if (tr.steps[i].phase == Phase::kAfterReduce)
          for (const auto& sym : tr.steps[i].stack) CHECK(sym.find('/') != std::string::npos);
      }
      CHECK(max_depth_after_reduce(tr) - 1 == embedding_degree(p));
      auto pre = pre_shift_depths(tr);
      for (int e = 2; e <= m; ++e) CHECK(pre[e] == token_embedding_degree(p, e) + 1);
      CHECK(simulate_pda(p, PdaVariant::kAlt).accepted);
    }
}

TEST_CASE("binarization follows the head's attachment side") {
  // a <- b -> d, c <- d -> e
  auto t = DepTree::from_heads({2, 0, 4, 2, 4}, {"a", "b", "c", "d", "e"});
  auto p = binarize_dependency(t);
  CHECK(p.to_bracketed() ==
        "(X[b] (X[b] (X[a] a) (X[b] b)) (X[d] (X[c] c) (X[d] (X[d] d) (X[e] e))))");
  auto two = binarize_dependency(DepTree::from_heads({0, 1}, {"a", "b"}));
  CHECK(two.to_bracketed() == "(X[a] (X[a] a) (X[b] b))");
  CHECK_THROWS_AS(binarize_dependency(DepTree::from_heads({2, 0, 4, 2, 2, 4, 6, 9, 7})), std::invalid_argument);
}

TEST_CASE("binarization minimizes degree over all binarizations") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& h : oracle::projective_trees(n)) {
      auto t = oracle::tree_from(h);
      int best = INT_MAX;
      for (const auto& b : oracle::all_binarizations(t)) best = std::min(best, oracle::embedding_degree_by_paths(b));
      CHECK(embedding_degree(binarize_dependency(t)) == best);
    }
}
