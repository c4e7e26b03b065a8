#pragma once

#include <string>
#include <vector>

#include "lcdep/common.hpp"
#include "lcdep/sbg.hpp"

namespace lcdep {

// Stack depth bound D; constituents of at most C tokens do not count when
// they are composed away.
struct DepthPolicy {
  int D = kUnbounded;
  int C = 1;

  bool unbounded() const { return D == kUnbounded; }
  void validate() const;
};

std::string to_string(const DepthPolicy& p);  // "inf", "1", "1(3)"
DepthPolicy policy_from_string(const std::string& s);

// Left-corner tabulation of the sentence's split bilexical grammar. Only
// trees whose left-corner derivation stays within the policy are counted.
double lc_inside(const SentenceWeights& sw, const DepthPolicy& policy, Semiring sr = Semiring::kLogSum);
EventCounts lc_expected_counts(const SentenceWeights& sw, const DepthPolicy& policy);
ViterbiResult lc_viterbi(const SentenceWeights& sw, const DepthPolicy& policy);

// Number of licensed trees of an n-token sentence under unit weights.
double lc_derivation_count(int n, const DepthPolicy& policy);

// Rules and items of the best derivation, one per line, consequents after
// their antecedents.
std::vector<std::string> lc_derivation_dump(const SentenceWeights& sw, const DepthPolicy& policy);

}  // namespace lcdep
