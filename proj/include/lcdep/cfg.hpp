#pragma once

#include <string>
#include <vector>

#include "lcdep/treebank.hpp"

namespace lcdep {

struct CfgNode {
  std::string label;
  std::vector<int> children;  // node ids; empty for preterminals
  int parent = -1;
  std::string terminal;       // set on preterminals
  int position = 0;           // 1-based terminal position for preterminals
  int head = 0;               // head token for dependency-derived parses, 0 if unknown
};

class CfgParse {
 public:
  int add_preterminal(std::string label, std::string terminal, int head = 0);
  int add_node(std::string label, std::vector<int> children, int head = 0);
  void set_root(int id) { root_ = id; }
  void finalize();  // assigns positions and parents

  int root() const { return root_; }
  const CfgNode& node(int id) const { return nodes_.at(id); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_terminals() const { return static_cast<int>(leaves_.size()); }
  // Preterminal node ids in surface order.
  const std::vector<int>& leaves() const { return leaves_; }
  bool is_preterminal(int id) const { return nodes_[id].children.empty(); }
  int yield_size(int id) const { return yield_[id]; }
  bool is_cnf() const;

  static CfgParse parse_bracketed(const std::string& text);
  std::string to_bracketed() const;

 private:
  std::vector<CfgNode> nodes_;
  std::vector<int> leaves_;
  std::vector<int> yield_;
  int root_ = -1;
};

int embedding_degree(const CfgParse& parse);
int token_embedding_degree(const CfgParse& parse, int position);

enum class PdaVariant { kMain, kAlt };
enum class Phase { kAfterShift, kAfterReduce };

struct PdaStep {
  std::string action;  // Shift, Scan, Prediction, Composition
  std::vector<std::string> stack;
  int depth = 0;
  int position = 0;  // terminals consumed so far
  Phase phase = Phase::kAfterShift;
};

struct PdaTrace {
  PdaVariant variant = PdaVariant::kMain;
  std::vector<PdaStep> steps;
  bool accepted = false;
};

PdaTrace simulate_pda(const CfgParse& parse, PdaVariant variant);
int max_depth_after_reduce(const PdaTrace& trace);
int max_depth_after_shift(const PdaTrace& trace);
// Stack depth right before each terminal is consumed; index 0 unused.
std::vector<int> pre_shift_depths(const PdaTrace& trace);

// Head-labeled CNF parse following the left-corner oracle's binarization.
CfgParse binarize_dependency(const DepTree& tree);

}  // namespace lcdep
