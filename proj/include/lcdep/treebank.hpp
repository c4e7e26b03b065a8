#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcdep {

// Universal POS tags (UD v1).
extern const std::vector<std::string> kUdTags;
extern const std::set<std::string> kUdFunctionTags;
extern const std::set<std::string> kGoogleFunctionTags;
extern const std::set<std::string> kUdPunctTags;

inline constexpr const char* kRootTag = "$";

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string pos;
  int head = 0;   // 0 = attached to the artificial root
  std::string deprel = "_";
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DepTree {
 public:
  DepTree() = default;
  explicit DepTree(std::vector<Token> tokens, bool root_appended = false);

  // Convenience: heads[i-1] is the head of token i; tags parallel.
  static DepTree from_heads(const std::vector<int>& heads,
                            const std::vector<std::string>& tags = {});

  int size() const { return static_cast<int>(tokens_.size()); }
  bool empty() const { return tokens_.empty(); }
  const Token& token(int i) const { return tokens_.at(i - 1); }
  Token& token(int i) { return tokens_.at(i - 1); }
  const std::vector<Token>& tokens() const { return tokens_; }

  int head(int i) const { return tokens_.at(i - 1).head; }
  const std::string& pos(int i) const { return tokens_.at(i - 1).pos; }
  std::vector<int> heads() const;  // 1-based, index 0 unused
  std::vector<std::string> tags() const;

  // (head, dependent) pairs; root attachments appear with head 0.
  std::vector<std::pair<int, int>> arcs() const;
  std::vector<std::vector<int>> children() const;  // index 0 = root's children
  std::vector<int> roots() const;
  int root() const;  // first root-attached token, 0 if empty

  bool root_appended() const { return root_appended_; }

  // Throws FormatError if heads are out of range or cyclic.
  void validate() const;

 private:
  std::vector<Token> tokens_;
  bool root_appended_ = false;
};

enum class PosColumn { kCoarse = 3, kFine = 4 };

struct Corpus {
  std::vector<DepTree> sentences;
  PosColumn pos_column = PosColumn::kCoarse;
  int max_len = 0;  // 0 = unlimited
};

Corpus parse_conll(const std::string& text, PosColumn pos_column = PosColumn::kCoarse);
Corpus read_conll_file(const std::string& path, PosColumn pos_column = PosColumn::kCoarse);
std::string write_conll(const Corpus& corpus);
std::string write_conll(const DepTree& tree);

// Drops sentences longer than max_len (artificial root excluded).
Corpus filter_length(const Corpus& corpus, int max_len);

DepTree strip_punctuation(const DepTree& tree, const std::set<std::string>& punct_tags);
bool is_projective(const DepTree& tree);
DepTree projectivize(const DepTree& tree);
DepTree append_root(const DepTree& tree, bool allow_twice = false);
DepTree random_reorder(const DepTree& tree, std::uint64_t seed);

}  // namespace lcdep
