#pragma once
// Memoized pull evaluation over a chart hypergraph, shared by the Eisner and
// left-corner grammars. A grammar supplies dense item ids and, per item, an
// enumerator of its incoming hyperedges.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "lcdep/sbg.hpp"

namespace lcdep::detail {

struct Edge {
  int ant[2] = {-1, -1};
  int nant = 0;
  int term[3] = {-1, -1, -1};
  int nterm = 0;
};

inline Edge edge(std::initializer_list<int> ants, std::initializer_list<int> terms) {
  Edge e;
  for (int a : ants) e.ant[e.nant++] = a;
  for (int t : terms) e.term[e.nterm++] = t;
  return e;
}

struct Val {
  double v = 0;
  double k1 = 0, k2 = 0;  // tie-break keys for max, smaller wins
  bool operator==(const Val&) const = default;
};

template <class G>
class ChartEngine {
 public:
  ChartEngine(const G& g, const SentenceWeights& sw, Semiring sr)
      : g_(g), sw_(sw), sr_(sr), val_(g.num_items()), state_(g.num_items(), 0) {}

  Val total() { return get(g_.goal()); }

  // Expected use count of every weight entry; requires kLogSum and a finite total.
  std::vector<double> outside() {
    std::vector<double> counts(sw_.w.size(), 0.0);
    double z = get(g_.goal()).v;
    std::vector<double> out(val_.size(), kNegInf);
    out[g_.goal()] = 0.0;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      int item = *it;
      double o = out[item];
      if (o == kNegInf || val_[item].v == kNegInf) continue;
      g_.for_each_incoming(item, [&](const Edge& e) {
        double s = 0;
        for (int k = 0; k < e.nterm; ++k) s += sw_.w[e.term[k]];
        for (int k = 0; k < e.nant; ++k) s += val_[e.ant[k]].v;
        if (s == kNegInf) return;
        double lp = o + s - z;
        double p = std::exp(lp);
        for (int k = 0; k < e.nterm; ++k) counts[e.term[k]] += p;
        for (int k = 0; k < e.nant; ++k) {
          int a = e.ant[k];
          out[a] = log_add(out[a], o + s - val_[a].v);
        }
      });
    }
    return counts;
  }

  // Edges of the best derivation, parents before children; requires kMax.
  std::vector<std::pair<int, Edge>> best_edges() {
    std::vector<std::pair<int, Edge>> out;
    if (get(g_.goal()).v == kNegInf) return out;
    std::vector<int> stack = {g_.goal()};
    while (!stack.empty()) {
      int item = stack.back();
      stack.pop_back();
      bool found = false;
      g_.for_each_incoming(item, [&](const Edge& e) {
        if (found) return;
        Val x;
        if (!edge_value(e, x) || !(x == val_[item])) return;
        found = true;
        out.emplace_back(item, e);
        for (int k = e.nant - 1; k >= 0; --k) stack.push_back(e.ant[k]);
      });
      assert(found);
    }
    return out;
  }

  std::vector<int> best_terms() {
    std::vector<int> terms;
    for (const auto& [item, e] : best_edges())
      for (int k = 0; k < e.nterm; ++k) terms.push_back(e.term[k]);
    return terms;
  }

 private:
  Val zero() const { return {sr_ == Semiring::kCount ? 0.0 : kNegInf, 0, 0}; }
  Val one() const { return {sr_ == Semiring::kCount ? 1.0 : 0.0, 0, 0}; }
  bool is_zero(const Val& x) const { return sr_ == Semiring::kCount ? x.v == 0.0 : x.v == kNegInf; }

  void times_term(Val& x, int t) const {
    double w = sw_.w[t];
    switch (sr_) {
      case Semiring::kCount:
        if (w == kNegInf) x.v = 0.0;
        return;
      case Semiring::kMax: {
        x.v += w;
        auto ev = sw_.decode(t);
        if (ev.attach) {
          x.k1 += ev.h;
          x.k2 += std::abs(ev.h - ev.d);
        }
        return;
      }
      case Semiring::kLogSum: x.v += w; return;
    }
  }

  void times(Val& x, const Val& y) const {
    if (sr_ == Semiring::kCount) {
      x.v *= y.v;
    } else {
      x.v += y.v;
      x.k1 += y.k1;
      x.k2 += y.k2;
    }
  }

  static bool better(const Val& a, const Val& b) {
    if (b.v == kNegInf) return a.v != kNegInf;
    if (a.v == kNegInf) return false;
    double tol = 1e-10 * std::max(1.0, std::abs(a.v));
    if (a.v > b.v + tol) return true;
    if (a.v < b.v - tol) return false;
    if (a.k1 != b.k1) return a.k1 < b.k1;
    return a.k2 < b.k2;
  }

  void plus(Val& acc, const Val& x) const {
    switch (sr_) {
      case Semiring::kCount: acc.v += x.v; return;
      case Semiring::kLogSum: acc.v = log_add(acc.v, x.v); return;
      case Semiring::kMax:
        if (better(x, acc)) acc = x;
        return;
    }
  }

  bool edge_value(const Edge& e, Val& x) {
    x = one();
    for (int k = 0; k < e.nterm; ++k) {
      times_term(x, e.term[k]);
      if (is_zero(x)) return false;
    }
    for (int k = 0; k < e.nant; ++k) {
      const Val& a = get(e.ant[k]);
      if (is_zero(a)) return false;
      times(x, a);
    }
    return !is_zero(x);
  }

  const Val& get(int item) {
    if (state_[item] == 2) return val_[item];
    assert(state_[item] == 0 && "cyclic chart");
    state_[item] = 1;
    Val acc = zero();
    g_.for_each_incoming(item, [&](const Edge& e) {
      Val x;
      if (edge_value(e, x)) plus(acc, x);
    });
    val_[item] = acc;
    state_[item] = 2;
    order_.push_back(item);
    return val_[item];
  }

  const G& g_;
  const SentenceWeights& sw_;
  Semiring sr_;
  std::vector<Val> val_;
  std::vector<std::uint8_t> state_;
  std::vector<int> order_;  // completion order, antecedents first
};

// Reads the head vector off the attachment terms of a derivation.
inline std::vector<int> heads_from_terms(const SentenceWeights& sw, const std::vector<int>& terms) {
  std::vector<int> heads(sw.n + 1, 0);
  for (int t : terms) {
    auto ev = sw.decode(t);
    if (ev.attach) heads[ev.d] = ev.h;
  }
  return heads;
}

}  // namespace lcdep::detail
