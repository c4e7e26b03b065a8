#pragma once
// Brute-force reference implementations used only by tests.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "lcdep/cfg.hpp"
#include "lcdep/treebank.hpp"

namespace oracle {

// All projective single-root trees over n tokens; heads[i] for i in 1..n, heads[0] unused.
inline std::vector<std::vector<int>> projective_trees(int n) {
  std::vector<std::vector<int>> out;
  if (n <= 0) return out;
  std::vector<int> heads(n + 1, 0);
  // Each pending task covers a span whose tokens still need heads.
  struct Task {
    int lo, hi, head;  // attach sequence of subtrees in [lo, hi] to head
  };
  std::function<void(std::vector<Task>&)> go = [&](std::vector<Task>& tasks) {
    if (tasks.empty()) {
      out.push_back(heads);
      return;
    }
    Task t = tasks.back();
    tasks.pop_back();
    if (t.lo > t.hi) {
      go(tasks);
      tasks.push_back(t);
      return;
    }
    // First subtree spans [lo, k] with root r.
    for (int k = t.lo; k <= t.hi; ++k) {
      for (int r = t.lo; r <= k; ++r) {
        heads[r] = t.head;
        tasks.push_back({k + 1, t.hi, t.head});
        tasks.push_back({t.lo, r - 1, r});
        tasks.push_back({r + 1, k, r});
        go(tasks);
        tasks.resize(tasks.size() - 3);
      }
    }
    tasks.push_back(t);
  };
  for (int r = 1; r <= n; ++r) {
    heads.assign(n + 1, 0);
    std::vector<Task> tasks = {{1, r - 1, r}, {r + 1, n, r}};
    go(tasks);
  }
  return out;
}

// All head vectors (not necessarily projective) with exactly one root and no cycles.
inline std::vector<std::vector<int>> all_trees(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> h(n + 1, 0);
  std::function<void(int)> go = [&](int i) {
    if (i > n) {
      int roots = 0;
      for (int k = 1; k <= n; ++k) roots += h[k] == 0;
      if (roots != 1) return;
      for (int k = 1; k <= n; ++k) {
        int v = k, steps = 0;
        while (v != 0 && steps <= n) v = h[v], ++steps;
        if (v != 0) return;
      }
      out.push_back(h);
      return;
    }
    for (int x = 0; x <= n; ++x) {
      if (x == i) continue;
      h[i] = x;
      go(i + 1);
    }
  };
  go(1);
  return out;
}

inline bool projective_by_crossing(const std::vector<int>& h) {
  const int n = static_cast<int>(h.size()) - 1;
  auto pos = [&](int x) { return x == 0 ? n + 1 : x; };
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      int l1 = std::min(a, pos(h[a])), r1 = std::max(a, pos(h[a]));
      int l2 = std::min(b, pos(h[b])), r2 = std::max(b, pos(h[b]));
      if (l1 < l2 && l2 < r1 && r1 < r2) return false;
    }
  return true;
}

inline lcdep::DepTree tree_from(const std::vector<int>& heads) {
  std::vector<int> h(heads.begin() + 1, heads.end());
  std::vector<std::string> tags;
  for (size_t i = 0; i < h.size(); ++i) tags.push_back(std::string(1, static_cast<char>('a' + i)));
  return lcdep::DepTree::from_heads(h, tags);
}

// All binary bracketings over m terminals, as CfgParse with unique labels.
inline std::vector<lcdep::CfgParse> all_cnf_parses(int m) {
  struct Shape {
    int left = -1, right = -1;
  };
  std::function<std::vector<std::vector<Shape>>(int)> shapes = [&](int k) {
    std::vector<std::vector<Shape>> res;
    if (k == 1) {
      res.push_back({Shape{}});
      return res;
    }
    for (int a = 1; a < k; ++a) {
      for (auto& l : shapes(a))
        for (auto& r : shapes(k - a)) {
          std::vector<Shape> s;
          s.push_back(Shape{1, 1 + static_cast<int>(l.size())});
          for (auto x : l) {
            if (x.left >= 0) x.left += 1, x.right += 1;
            s.push_back(x);
          }
          int off = 1 + static_cast<int>(l.size());
          for (auto x : r) {
            if (x.left >= 0) x.left += off, x.right += off;
            s.push_back(x);
          }
          res.push_back(s);
        }
    }
    return res;
  };
  std::vector<lcdep::CfgParse> out;
  for (const auto& s : shapes(m)) {
    lcdep::CfgParse p;
    int term = 0;
    std::function<int(int)> build = [&](int i) -> int {
      if (s[i].left < 0) {
        ++term;
        return p.add_preterminal("P" + std::to_string(term), "w" + std::to_string(term));
      }
      int l = build(s[i].left);
      int r = build(s[i].right);
      return p.add_node("N" + std::to_string(i), {l, r});
    };
    p.set_root(build(0));
    p.finalize();
    out.push_back(p);
  }
  return out;
}

// Degree by enumerating every downward path and counting (R+ L+) blocks.
inline int embedding_degree_by_paths(const lcdep::CfgParse& p) {
  int best = 0;
  std::function<void(int, int, char, int)> walk = [&](int v, int blocks, char last, int started) {
    if (started && last == 'L' && p.yield_size(v) >= 2) best = std::max(best, blocks);
    const auto& n = p.node(v);
    if (n.children.size() != 2) return;
    // Left edge
    {
      int b = blocks;
      if (started && last == 'R') ++b;
      walk(n.children[0], b, started ? 'L' : 0, started);
    }
    // Right edge
    walk(n.children[1], blocks, 'R', 1);
  };
  for (int v = 0; v < p.num_nodes(); ++v) walk(v, 0, 0, 0);
  return best;
}

// Every CNF binarization of a projective dependency tree (each head interleaves its
// nearest-first left and right attachments).
inline std::vector<lcdep::CfgParse> all_binarizations(const lcdep::DepTree& t) {
  auto ch = t.children();
  const int n = t.size();
  // choice[h] = bitmask over attachment order (1 = attach left next)
  std::vector<std::vector<std::vector<bool>>> orders(n + 1);
  for (int h = 1; h <= n; ++h) {
    int nl = 0, nr = 0;
    for (int c : ch[h]) (c < h ? nl : nr)++;
    std::vector<bool> cur;
    std::function<void(int, int)> gen = [&](int l, int r) {
      if (l == 0 && r == 0) {
        orders[h].push_back(cur);
        return;
      }
      if (l > 0) {
        cur.push_back(true);
        gen(l - 1, r);
        cur.pop_back();
      }
      if (r > 0) {
        cur.push_back(false);
        gen(l, r - 1);
        cur.pop_back();
      }
    };
    gen(nl, nr);
  }
  std::vector<lcdep::CfgParse> out;
  std::vector<int> pick(n + 1, 0);
  std::function<void(int)> go = [&](int h) {
    if (h > n) {
      lcdep::CfgParse p;
      std::function<int(int)> build = [&](int x) {
        int node = p.add_preterminal(t.pos(x), t.pos(x), x);
        std::vector<int> lefts, rights;
        for (int c : ch[x]) (c < x ? lefts : rights).push_back(c);
        std::reverse(lefts.begin(), lefts.end());
        size_t li = 0, ri = 0;
        for (bool left : orders[x][pick[x]]) {
          if (left)
            node = p.add_node("X", {build(lefts[li++]), node}, x);
          else
            node = p.add_node("X", {node, build(rights[ri++])}, x);
        }
        return node;
      };
      p.set_root(build(t.root()));
      p.finalize();
      out.push_back(p);
      return;
    }
    for (size_t k = 0; k < orders[h].size(); ++k) {
      pick[h] = static_cast<int>(k);
      go(h + 1);
    }
  };
  go(1);
  return out;
}

}  // namespace oracle
