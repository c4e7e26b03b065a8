#include "lcdep/cfg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace lcdep {

int CfgParse::add_preterminal(std::string label, std::string terminal, int head) {
  CfgNode n;
  n.label = std::move(label);
  n.terminal = std::move(terminal);
  n.head = head;
  nodes_.push_back(std::move(n));
  return num_nodes() - 1;
}

int CfgParse::add_node(std::string label, std::vector<int> children, int head) {
  CfgNode n;
  n.label = std::move(label);
  n.children = std::move(children);
  n.head = head;
  nodes_.push_back(std::move(n));
  return num_nodes() - 1;
}

void CfgParse::finalize() {
  if (root_ < 0) root_ = num_nodes() - 1;
  leaves_.clear();
  yield_.assign(nodes_.size(), 0);
  for (auto& n : nodes_) n.parent = -1;
  std::function<void(int)> visit = [&](int v) {
    auto& nd = nodes_[v];
    if (nd.children.empty()) {
      leaves_.push_back(v);
      nd.position = static_cast<int>(leaves_.size());
      yield_[v] = 1;
      return;
    }
    for (int c : nd.children) {
      nodes_[c].parent = v;
      visit(c);
      yield_[v] += yield_[c];
    }
  };
  visit(root_);
}

bool CfgParse::is_cnf() const {
  for (int v = 0; v < num_nodes(); ++v) {
    const auto& n = nodes_[v];
    if (!n.children.empty() && n.children.size() != 2) return false;
    if (n.children.empty() && n.terminal.empty()) return false;
  }
  return root_ >= 0;
}

namespace {

struct BracketReader {
  const std::string& s;
  size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  std::string symbol() {
    skip();
    size_t st = i;
    while (i < s.size() && s[i] != '(' && s[i] != ')' && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (st == i) throw FormatError("bracketed tree: expected symbol at offset " + std::to_string(st));
    return s.substr(st, i - st);
  }
  int node(CfgParse& p) {
    skip();
    if (i >= s.size() || s[i] != '(') throw FormatError("bracketed tree: expected '(' at offset " + std::to_string(i));
    ++i;
    std::string label = symbol();
    std::vector<int> kids;
    std::string term;
    for (;;) {
      skip();
      if (i >= s.size()) throw FormatError("bracketed tree: unbalanced parentheses");
      if (s[i] == ')') {
        ++i;
        break;
      }
      if (s[i] == '(') {
        kids.push_back(node(p));
      } else {
        if (!term.empty() || !kids.empty()) throw FormatError("bracketed tree: mixed terminal and nonterminal children");
        term = symbol();
      }
    }
    if (!term.empty()) {
      if (!kids.empty()) throw FormatError("bracketed tree: mixed terminal and nonterminal children");
      return p.add_preterminal(label, term);
    }
    if (kids.empty()) throw FormatError("bracketed tree: empty constituent " + label);
    return p.add_node(label, kids);
  }
};

}  // namespace

CfgParse CfgParse::parse_bracketed(const std::string& text) {
  CfgParse p;
  BracketReader r{text};
  int root = r.node(p);
  r.skip();
  if (r.i != text.size()) throw FormatError("bracketed tree: trailing input");
  p.set_root(root);
  p.finalize();
  return p;
}

std::string CfgParse::to_bracketed() const {
  std::function<std::string(int)> rec = [&](int v) -> std::string {
    const auto& n = nodes_[v];
    if (n.children.empty()) return "(" + n.label + " " + n.terminal + ")";
    std::string s = "(" + n.label;
    for (int c : n.children) s += " " + rec(c);
    return s + ")";
  };
  return rec(root_);
}

int embedding_degree(const CfgParse& parse) {
  // right_k[v]: best k with v reached by right edges from A (k = 0) or from C_k.
  // left_k[v]:  best k with v = C_k, i.e. v reached by left edges from B_k.
  const int m = parse.num_nodes();
  std::vector<int> right_k(m, -1), left_k(m, -1);
  int degree = 0;
  std::function<void(int)> visit = [&](int v) {
    const auto& n = parse.node(v);
    if (left_k[v] >= 0 && parse.yield_size(v) >= 2) degree = std::max(degree, left_k[v]);
    if (n.children.size() != 2) return;
    int l = n.children[0], r = n.children[1];
    right_k[r] = std::max({0, left_k[v], right_k[v]});
    left_k[l] = std::max(left_k[v], right_k[v] >= 0 ? right_k[v] + 1 : -1);
    visit(l);
    visit(r);
  };
  visit(parse.root());
  return degree;
}

int token_embedding_degree(const CfgParse& parse, int position) {
  if (position <= 1) return 0;
  int v = parse.leaves().at(position - 1);
  std::vector<char> dirs;  // edge directions from the root down
  while (parse.node(v).parent >= 0) {
    int p = parse.node(v).parent;
    dirs.push_back(parse.node(p).children[0] == v ? 'L' : 'R');
    v = p;
  }
  std::reverse(dirs.begin(), dirs.end());
  // Blocks after the leading left edges: R+ (A..B1) L+ (B1..C1) R+ ...
  auto first_r = std::find(dirs.begin(), dirs.end(), 'R');
  if (first_r == dirs.end()) return 0;
  int r_blocks = 0, l_blocks = 0;
  char prev = 0;
  for (auto it = first_r; it != dirs.end(); ++it) {
    if (*it != prev) (*it == 'R' ? r_blocks : l_blocks)++;
    prev = *it;
  }
  if (prev == 'R') {
    if (r_blocks == 1) return 0;  // B_1 = C_1 = E
    return l_blocks;              // E is a right descendant of C_m
  }
  return l_blocks - 1;            // C_m = E
}

namespace {

struct Sym {
  int a;
  int b;  // -1: complete (main) / goal (alt)
};

std::string render(const CfgParse& p, const Sym& s, PdaVariant v) {
  if (s.b < 0) return p.node(s.a).label;
  return p.node(s.a).label + (v == PdaVariant::kMain ? "/" : "-") + p.node(s.b).label;
}

}  // namespace

PdaTrace simulate_pda(const CfgParse& parse, PdaVariant variant) {
  if (!parse.is_cnf()) throw std::invalid_argument("simulate_pda: parse is not in CNF");
  PdaTrace trace;
  trace.variant = variant;
  std::vector<Sym> stack;
  auto record = [&](const char* action, int pos, Phase ph) {
    PdaStep st;
    st.action = action;
    for (const auto& s : stack) st.stack.push_back(render(parse, s, variant));
    st.depth = static_cast<int>(stack.size());
    st.position = pos;
    st.phase = ph;
    trace.steps.push_back(std::move(st));
  };
  auto fail = [](const std::string& why) { throw std::logic_error("simulate_pda: " + why); };
  auto split = [&](int x, int& parent, int& sibling) {
    parent = parse.node(x).parent;
    if (parent < 0 || parse.node(parent).children[0] != x) fail("reduced symbol is not a left child");
    sibling = parse.node(parent).children[1];
  };
  const auto& leaves = parse.leaves();
  const int n = static_cast<int>(leaves.size());
  if (variant == PdaVariant::kMain) {
    for (int k = 0; k < n; ++k) {
      int e = leaves[k];
      if (!stack.empty() && stack.back().b == e) {
        stack.back().b = -1;
        record("Scan", k + 1, Phase::kAfterShift);
      } else {
        stack.push_back({e, -1});
        record("Shift", k + 1, Phase::kAfterShift);
      }
      if (k == n - 1) break;
      Sym x = stack.back();
      if (x.b >= 0) fail("reduce on incomplete symbol");
      int parent, sibling;
      split(x.a, parent, sibling);
      if (stack.size() >= 2 && stack[stack.size() - 2].b == parent) {
        stack.pop_back();
        stack.back().b = sibling;
        record("Composition", k + 1, Phase::kAfterReduce);
      } else {
        stack.back() = {parent, sibling};
        record("Prediction", k + 1, Phase::kAfterReduce);
      }
    }
    trace.accepted = stack.size() == 1 && stack[0].b < 0 && stack[0].a == parse.root();
  } else {
    stack.push_back({parse.root(), -1});
    for (int k = 0; k < n; ++k) {
      int e = leaves[k];
      if (stack.empty() || stack.back().b >= 0) fail("shift without a goal on top");
      if (stack.back().a == e) {
        stack.pop_back();
        record("Scan", k + 1, Phase::kAfterShift);
      } else {
        stack.back().b = e;
        record("Shift", k + 1, Phase::kAfterShift);
      }
      if (k == n - 1) break;
      if (stack.empty() || stack.back().b < 0) fail("reduce without a recognized left corner");
      Sym top = stack.back();
      int parent, sibling;
      split(top.b, parent, sibling);
      if (parent == top.a) {
        stack.back() = {sibling, -1};
        record("Composition", k + 1, Phase::kAfterReduce);
      } else {
        stack.back() = {top.a, parent};
        stack.push_back({sibling, -1});
        record("Prediction", k + 1, Phase::kAfterReduce);
      }
    }
    trace.accepted = stack.empty();
  }
  return trace;
}

int max_depth_after_reduce(const PdaTrace& trace) {
  int m = 1;
  for (const auto& s : trace.steps)
    if (s.phase == Phase::kAfterReduce) m = std::max(m, s.depth);
  return m;
}

int max_depth_after_shift(const PdaTrace& trace) {
  int m = 0;
  for (const auto& s : trace.steps)
    if (s.phase == Phase::kAfterShift) m = std::max(m, s.depth);
  return m;
}

std::vector<int> pre_shift_depths(const PdaTrace& trace) {
  std::vector<int> out(1, 0);
  int prev = trace.variant == PdaVariant::kMain ? 0 : 1;
  for (const auto& s : trace.steps) {
    if (s.phase == Phase::kAfterShift) out.push_back(prev);
    prev = s.depth;
  }
  return out;
}

CfgParse binarize_dependency(const DepTree& tree) {
  if (!is_projective(tree)) throw std::invalid_argument("binarize_dependency: tree is not projective");
  auto roots = tree.roots();
  if (roots.size() != 1) throw std::invalid_argument("binarize_dependency: tree must have a single root");
  auto ch = tree.children();
  CfgParse p;
  auto label = [&](int h) {
    const auto& t = tree.token(h);
    return "X[" + (t.form.empty() ? t.pos : t.form) + "]";
  };
  std::function<int(int)> build = [&](int h) {
    const auto& t = tree.token(h);
    int node = p.add_preterminal(label(h), t.form.empty() ? t.pos : t.form, h);
    std::vector<int> lefts, rights;
    for (int c : ch[h]) (c < h ? lefts : rights).push_back(c);
    std::reverse(lefts.begin(), lefts.end());  // closest first
    bool left_first = tree.head(h) == 0 || tree.head(h) > h;
    auto attach_left = [&] {
      for (int c : lefts) node = p.add_node(label(h), {build(c), node}, h);
    };
    auto attach_right = [&] {
      for (int c : rights) node = p.add_node(label(h), {node, build(c)}, h);
    };
    if (left_first) {
      attach_left();
      attach_right();
    } else {
      attach_right();
      attach_left();
    }
    return node;
  };
  p.set_root(build(roots[0]));
  p.finalize();
  return p;
}

}  // namespace lcdep
