#include "lcdep/treebank.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace lcdep {

const std::vector<std::string> kUdTags = {
    "ADJ", "ADP", "ADV", "AUX", "CONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
const std::set<std::string> kUdFunctionTags = {"ADP", "AUX", "CONJ", "DET", "PART", "SCONJ"};
const std::set<std::string> kGoogleFunctionTags = {"DET", "CONJ", "PRT", "ADP"};
const std::set<std::string> kUdPunctTags = {"PUNCT"};

DepTree::DepTree(std::vector<Token> tokens, bool root_appended)
    : tokens_(std::move(tokens)), root_appended_(root_appended) {
  for (int i = 0; i < size(); ++i) tokens_[i].index = i + 1;
}

DepTree DepTree::from_heads(const std::vector<int>& heads, const std::vector<std::string>& tags) {
  std::vector<Token> toks(heads.size());
  for (size_t i = 0; i < heads.size(); ++i) {
    toks[i].head = heads[i];
    toks[i].pos = i < tags.size() ? tags[i] : "X";
    toks[i].form = toks[i].pos;
  }
  return DepTree(std::move(toks));
}

std::vector<int> DepTree::heads() const {
  std::vector<int> h(size() + 1, 0);
  for (int i = 1; i <= size(); ++i) h[i] = head(i);
  return h;
}

std::vector<std::string> DepTree::tags() const {
  std::vector<std::string> t;
  for (const auto& tok : tokens_) t.push_back(tok.pos);
  return t;
}

std::vector<std::pair<int, int>> DepTree::arcs() const {
  std::vector<std::pair<int, int>> a;
  for (int i = 1; i <= size(); ++i) a.emplace_back(head(i), i);
  return a;
}

std::vector<std::vector<int>> DepTree::children() const {
  std::vector<std::vector<int>> ch(size() + 1);
  for (int i = 1; i <= size(); ++i) ch[head(i)].push_back(i);
  return ch;
}

std::vector<int> DepTree::roots() const {
  std::vector<int> r;
  for (int i = 1; i <= size(); ++i)
    if (head(i) == 0) r.push_back(i);
  return r;
}

int DepTree::root() const {
  auto r = roots();
  return r.empty() ? 0 : r.front();
}

void DepTree::validate() const {
  const int n = size();
  for (int i = 1; i <= n; ++i) {
    int h = head(i);
    if (h < 0 || h > n) throw FormatError("token " + std::to_string(i) + " has head out of range");
    if (h == i) throw FormatError("token " + std::to_string(i) + " heads itself");
  }
  // Every token must reach 0 without revisiting.
  std::vector<int> state(n + 1, 0);  // 0 unseen, 1 on path, 2 done
  for (int i = 1; i <= n; ++i) {
    std::vector<int> path;
    int v = i;
    while (v != 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = head(v);
    }
    if (v != 0 && state[v] == 1) throw FormatError("cycle through token " + std::to_string(v));
    for (int p : path) state[p] = 2;
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t pos = 0;
  try {
    out = std::stoi(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

}  // namespace

Corpus parse_conll(const std::string& text, PosColumn pos_column) {
  Corpus corpus;
  corpus.pos_column = pos_column;
  std::istringstream in(text);
  std::string line;
  std::vector<Token> block;
  int line_no = 0;
  auto flush = [&]() {
    if (block.empty()) return;
    for (size_t i = 0; i < block.size(); ++i) {
      if (block[i].index != static_cast<int>(i) + 1)
        throw FormatError("sentence " + std::to_string(corpus.sentences.size() + 1) +
                          ": token ids are not consecutive");
    }
    DepTree tree(block);
    try {
      tree.validate();
    } catch (const FormatError& e) {
      throw FormatError("sentence " + std::to_string(corpus.sentences.size() + 1) + ": " + e.what());
    }
    corpus.sentences.push_back(std::move(tree));
    block.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() < 8)
      throw FormatError("line " + std::to_string(line_no) + ": expected at least 8 tab-separated columns");
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) continue;
    Token tok;
    if (!parse_int(cols[0], tok.index))
      throw FormatError("line " + std::to_string(line_no) + ": bad ID field '" + cols[0] + "'");
    if (!parse_int(cols[6], tok.head))
      throw FormatError("line " + std::to_string(line_no) + ": bad HEAD field '" + cols[6] + "'");
    tok.form = cols[1];
    tok.pos = cols[static_cast<int>(pos_column)];
    tok.deprel = cols[7];
    block.push_back(tok);
  }
  flush();
  return corpus;
}

Corpus read_conll_file(const std::string& path, PosColumn pos_column) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_conll(ss.str(), pos_column);
}

std::string write_conll(const DepTree& tree) {
  std::ostringstream out;
  for (int i = 1; i <= tree.size(); ++i) {
    if (tree.root_appended() && i == tree.size()) break;
    const Token& t = tree.token(i);
    int h = t.head;
    if (tree.root_appended() && h == tree.size()) h = 0;
    out << i << '\t' << (t.form.empty() ? "_" : t.form) << "\t_\t" << t.pos << '\t' << t.pos
        << "\t_\t" << h << '\t' << (t.deprel.empty() ? "_" : t.deprel) << "\t_\t_\n";
  }
  out << '\n';
  return out.str();
}

std::string write_conll(const Corpus& corpus) {
  std::string s;
  for (const auto& t : corpus.sentences) s += write_conll(t);
  return s;
}

Corpus filter_length(const Corpus& corpus, int max_len) {
  Corpus out;
  out.pos_column = corpus.pos_column;
  out.max_len = max_len;
  for (const auto& t : corpus.sentences) {
    int n = t.size() - (t.root_appended() ? 1 : 0);
    if (max_len <= 0 || n <= max_len) out.sentences.push_back(t);
  }
  return out;
}

DepTree strip_punctuation(const DepTree& tree, const std::set<std::string>& punct_tags) {
  const int n = tree.size();
  std::vector<int> new_index(n + 1, 0);
  std::vector<Token> kept;
  for (int i = 1; i <= n; ++i) {
    if (punct_tags.count(tree.pos(i))) continue;
    new_index[i] = static_cast<int>(kept.size()) + 1;
    kept.push_back(tree.token(i));
  }
  for (auto& t : kept) {
    int h = t.head;
    while (h != 0 && punct_tags.count(tree.pos(h))) h = tree.head(h);
    t.head = h == 0 ? 0 : new_index[h];
  }
  return DepTree(std::move(kept), tree.root_appended());
}

namespace {

// Position used for head 0: one past the last token.
int arc_pos(int h, int n) { return h == 0 ? n + 1 : h; }

bool dominates(const std::vector<int>& heads, int anc, int v) {
  while (v != 0) {
    if (v == anc) return true;
    v = heads[v];
  }
  return anc == 0;
}

// Arc (h, d) is projective iff h dominates every token strictly between them.
bool arc_projective(const std::vector<int>& heads, int d) {
  const int n = static_cast<int>(heads.size()) - 1;
  int h = heads[d];
  int a = std::min(arc_pos(h, n), d), b = std::max(arc_pos(h, n), d);
  for (int k = a + 1; k < b; ++k)
    if (k <= n && !dominates(heads, h, k)) return false;
  return true;
}

}  // namespace

bool is_projective(const DepTree& tree) {
  auto heads = tree.heads();
  for (int d = 1; d <= tree.size(); ++d)
    if (!arc_projective(heads, d)) return false;
  return true;
}

DepTree projectivize(const DepTree& tree) {
  auto heads = tree.heads();
  const int n = tree.size();
  for (;;) {
    int best = 0, best_len = 0;
    for (int d = 1; d <= n; ++d) {
      if (arc_projective(heads, d)) continue;
      int len = std::abs(arc_pos(heads[d], n) - d);
      if (best == 0 || len < best_len) {
        best = d;
        best_len = len;
      }
    }
    if (best == 0) break;
    heads[best] = heads[heads[best]];
  }
  std::vector<Token> toks = tree.tokens();
  for (int i = 1; i <= n; ++i) toks[i - 1].head = heads[i];
  return DepTree(std::move(toks), tree.root_appended());
}

DepTree append_root(const DepTree& tree, bool allow_twice) {
  if (tree.root_appended()) {
    if (!allow_twice) throw std::logic_error("append_root: root already appended");
    return tree;
  }
  std::vector<Token> toks = tree.tokens();
  const int root_pos = static_cast<int>(toks.size()) + 1;
  for (auto& t : toks)
    if (t.head == 0) t.head = root_pos;
  Token r;
  r.form = kRootTag;
  r.pos = kRootTag;
  r.head = 0;
  toks.push_back(r);
  return DepTree(std::move(toks), true);
}

DepTree random_reorder(const DepTree& tree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto ch = tree.children();
  const int n = tree.size();
  std::vector<int> order;  // new position -> old index
  std::function<void(int)> visit = [&](int v) {
    std::vector<int> group = ch[v];
    group.push_back(v);
    std::sort(group.begin(), group.end());
    std::shuffle(group.begin(), group.end(), rng);
    for (int u : group) {
      if (u == v)
        order.push_back(v);
      else
        visit(u);
    }
  };
  // The artificial root stays last; only the real tokens are permuted.
  std::vector<int> top = tree.root_appended() ? ch[n] : ch[0];
  std::shuffle(top.begin(), top.end(), rng);
  for (int r : top) visit(r);
  if (tree.root_appended()) order.push_back(n);
  std::vector<int> new_pos(n + 1, 0);
  for (int i = 0; i < n; ++i) new_pos[order[i]] = i + 1;
  std::vector<Token> toks(n);
  for (int i = 0; i < n; ++i) {
    Token t = tree.token(order[i]);
    t.head = t.head == 0 ? 0 : new_pos[t.head];
    toks[i] = t;
  }
  return DepTree(std::move(toks), tree.root_appended());
}

}  // namespace lcdep
