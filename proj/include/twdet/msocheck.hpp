#pragma once

// Executable semantics of the head-selection predicate: an order on an
// augmented vertex set built from an Euler traversal of a binarized tree
// decomposition, and a direct evaluator of the predicate that accepts a
// cycle cover Y together with its set of heads X.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/rational.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet {

/// Node of the binarized decomposition. Unary nodes get an empty dummy as
/// right child; a node with more than two children keeps the first as left
/// child and hands the rest to a copy of itself on the right.
struct BinaryBagNode {
  Bag bag;
  int left = -1, right = -1, parent = -1;
  int source = -1; // bag index in the input decomposition, -1 for a dummy
};

/// Originals are 0..n-1; node x owns the bag vertices n+3x (left visit),
/// n+3x+1 (middle) and n+3x+2 (right).
struct NxtOrder {
  int original_count = 0;
  int vertex_count = 0;
  std::vector<BinaryBagNode> nodes;
  TreeDecomposition augmented;                  // decomposition of G' over all vertices
  std::vector<std::pair<Vertex, Vertex>> base;  // bag chain plus original/bag pairs
  std::vector<std::pair<Vertex, Vertex>> ties;  // original pairs ordered by index
  std::vector<std::vector<char>> base_closure;  // transitive closure of `base`
  std::vector<std::vector<char>> closure;       // of base and ties

  Vertex left_visit(int x) const { return original_count + 3 * x; }
  Vertex middle_visit(int x) const { return original_count + 3 * x + 1; }
  Vertex right_visit(int x) const { return original_count + 3 * x + 2; }
  bool is_bag_vertex(Vertex v) const { return v >= original_count; }

  bool less(Vertex u, Vertex v) const { return closure[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != 0; }
  bool base_less(Vertex u, Vertex v) const {
    return base_closure[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != 0;
  }

  /// Original vertices sorted by the final order.
  std::vector<Vertex> original_order() const {
    std::vector<Vertex> out(static_cast<std::size_t>(original_count));
    for (int v = 0; v < original_count; ++v) out[static_cast<std::size_t>(v)] = v;
    std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return less(a, b); });
    return out;
  }

  /// Bag vertices sorted by the final order.
  std::vector<Vertex> bag_vertex_order() const {
    std::vector<Vertex> out;
    for (Vertex v = original_count; v < vertex_count; ++v) out.push_back(v);
    std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return less(a, b); });
    return out;
  }

  /// Original pairs (u < v by index) left incomparable by the base relation.
  std::vector<std::pair<Vertex, Vertex>> base_incomparable() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex u = 0; u < original_count; ++u)
      for (Vertex v = u + 1; v < original_count; ++v)
        if (!base_less(u, v) && !base_less(v, u)) out.emplace_back(u, v);
    return out;
  }
};

namespace detail {

inline std::vector<std::vector<char>> transitive_closure(int n, const std::vector<std::pair<Vertex, Vertex>>& rel) {
  std::vector<std::vector<char>> c(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [u, v] : rel) c[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
  for (std::size_t k = 0; k < c.size(); ++k)
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i][k])
        for (std::size_t j = 0; j < c.size(); ++j) c[i][j] = static_cast<char>(c[i][j] | c[k][j]);
  return c;
}

inline std::vector<BinaryBagNode> binarize(const TreeDecomposition& t) {
  std::vector<BinaryBagNode> nodes;
  if (t.bags.empty()) return nodes;
  auto adj = t.adjacency();
  // children in index order, rooted at bag 0
  std::vector<std::vector<int>> kids(t.bags.size());
  std::vector<int> par(t.bags.size(), -2), stack{0};
  par[0] = -1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<std::size_t>(x)])
      if (par[static_cast<std::size_t>(y)] == -2) {
        par[static_cast<std::size_t>(y)] = x;
        kids[static_cast<std::size_t>(x)].push_back(y);
        stack.push_back(y);
      }
  }
  for (auto& k : kids) std::sort(k.begin(), k.end());

  auto make = [&](const Bag& bag, int source, int parent) {
    nodes.push_back({bag, -1, -1, parent, source});
    return static_cast<int>(nodes.size()) - 1;
  };
  // (binary node, input bag, first child index still to place)
  struct Pending {
    int node;
    int bag;
    std::size_t from;
  };
  std::vector<Pending> work{{make(t.bags[0], 0, -1), 0, 0}};
  while (!work.empty()) {
    Pending p = work.back();
    work.pop_back();
    const auto& ks = kids[static_cast<std::size_t>(p.bag)];
    std::size_t left = ks.size() - std::min(ks.size(), p.from);
    if (left == 0) continue;
    int c = ks[p.from];
    int l = make(t.bags[static_cast<std::size_t>(c)], c, p.node);
    nodes[static_cast<std::size_t>(p.node)].left = l;
    work.push_back({l, c, 0});
    if (left == 1) {
      nodes[static_cast<std::size_t>(p.node)].right = make({}, -1, p.node);
    } else if (left == 2) {
      int d = ks[p.from + 1];
      int r = make(t.bags[static_cast<std::size_t>(d)], d, p.node);
      nodes[static_cast<std::size_t>(p.node)].right = r;
      work.push_back({r, d, 0});
    } else {
      int r = make(t.bags[static_cast<std::size_t>(p.bag)], p.bag, p.node);
      nodes[static_cast<std::size_t>(p.node)].right = r;
      work.push_back({r, p.bag, p.from + 1});
    }
  }
  return nodes;
}

} // namespace detail

/// Order on G' = originals plus three visit vertices per binarized bag.
///
/// The visit vertices are chained in Euler-traversal order: left visit,
/// left subtree, middle visit, right subtree, right visit. An original v is
/// placed against the bags on its way down from the topmost bag A holding
/// it: after a_l (after a_0 when v is only in the right child) and before
/// a_r (before a_0 when v is only in the left child). The walk stops at the
/// first bag where v is in neither child or in both; there v is also put
/// between the left subtree and the right subtree. Originals still
/// incomparable afterwards share that bag and are ordered by index.
inline NxtOrder build_nxt(const Graph& g, const TreeDecomposition& t) {
  require_valid(t, g);
  NxtOrder ord;
  const int n = g.size();
  ord.original_count = n;
  ord.nodes = detail::binarize(t);
  ord.vertex_count = n + 3 * static_cast<int>(ord.nodes.size());

  // Euler chain of visit vertices
  std::vector<Vertex> chain;
  struct Step {
    int node;
    int phase;
  };
  if (!ord.nodes.empty()) {
    std::vector<Step> stack{{0, 0}};
    while (!stack.empty()) {
      Step& s = stack.back();
      const auto& nd = ord.nodes[static_cast<std::size_t>(s.node)];
      int x = s.node;
      switch (s.phase++) {
      case 0:
        chain.push_back(ord.left_visit(x));
        if (nd.left >= 0) stack.push_back({nd.left, 0});
        break;
      case 1:
        chain.push_back(ord.middle_visit(x));
        if (nd.right >= 0) stack.push_back({nd.right, 0});
        break;
      default:
        chain.push_back(ord.right_visit(x));
        stack.pop_back();
      }
    }
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) ord.base.emplace_back(chain[i], chain[i + 1]);

  auto in = [&](int x, Vertex v) {
    return x >= 0 && bag_contains(ord.nodes[static_cast<std::size_t>(x)].bag, v);
  };
  for (Vertex v = 0; v < n; ++v) {
    // topmost node holding v: node order is a preorder, so the first hit
    int x = -1;
    for (std::size_t i = 0; i < ord.nodes.size(); ++i)
      if (in(static_cast<int>(i), v)) {
        x = static_cast<int>(i);
        break;
      }
    while (x >= 0) {
      const auto& nd = ord.nodes[static_cast<std::size_t>(x)];
      bool l = in(nd.left, v), r = in(nd.right, v);
      ord.base.emplace_back(!l && r ? ord.middle_visit(x) : ord.left_visit(x), v);
      ord.base.emplace_back(v, l && !r ? ord.middle_visit(x) : ord.right_visit(x));
      if (l == r) {
        if (nd.left >= 0) ord.base.emplace_back(ord.right_visit(nd.left), v);
        if (nd.right >= 0) ord.base.emplace_back(v, ord.left_visit(nd.right));
        break;
      }
      x = l ? nd.left : nd.right;
    }
  }
  ord.base_closure = detail::transitive_closure(ord.vertex_count, ord.base);

  ord.closure = ord.base_closure;
  auto& c = ord.closure;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      if (c[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ||
          c[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)])
        continue;
      ord.ties.emplace_back(u, v);
      for (std::size_t a = 0; a < c.size(); ++a) {
        bool below = a == static_cast<std::size_t>(u) || c[a][static_cast<std::size_t>(u)];
        if (!below) continue;
        for (std::size_t b = 0; b < c.size(); ++b)
          if (b == static_cast<std::size_t>(v) || c[static_cast<std::size_t>(v)][b]) c[a][b] = 1;
      }
    }

  // G' decomposition: each node keeps its originals and own visits, plus
  // the visits it is chained to in its children and parent
  ord.augmented.bags.resize(ord.nodes.size());
  for (std::size_t i = 0; i < ord.nodes.size(); ++i) {
    const auto& nd = ord.nodes[i];
    int x = static_cast<int>(i);
    Bag b = nd.bag;
    b.push_back(ord.left_visit(x));
    b.push_back(ord.middle_visit(x));
    b.push_back(ord.right_visit(x));
    if (nd.left >= 0) b.push_back(ord.right_visit(nd.left));
    if (nd.right >= 0) b.push_back(ord.left_visit(nd.right));
    if (nd.parent >= 0) {
      const auto& p = ord.nodes[static_cast<std::size_t>(nd.parent)];
      b.push_back(p.left == x ? ord.left_visit(nd.parent) : ord.right_visit(nd.parent));
      ord.augmented.edges.emplace_back(nd.parent, x);
    }
    ord.augmented.bags[i] = std::move(b);
  }
  ord.augmented.normalize();
  return ord;
}

inline NxtOrder build_nxt(const WeightedDigraph& g, const TreeDecomposition& t) {
  return build_nxt(underlying_graph(g), t);
}

/// Irreflexive closure: no vertex precedes itself.
inline bool is_partial_order(const NxtOrder& ord) {
  for (std::size_t v = 0; v < ord.closure.size(); ++v)
    if (ord.closure[v][v]) return false;
  return true;
}

/// Every pair of the relation lies inside some bag of the augmented
/// decomposition.
inline bool is_compatible(const NxtOrder& ord) {
  auto shared = [&](Vertex u, Vertex v) {
    for (const auto& b : ord.augmented.bags)
      if (bag_contains(b, u) && bag_contains(b, v)) return true;
    return false;
  };
  for (auto [u, v] : ord.base)
    if (!shared(u, v)) return false;
  for (auto [u, v] : ord.ties)
    if (!shared(u, v)) return false;
  return true;
}

/// Originals pairwise comparable under the final order.
inline bool is_total_on_originals(const NxtOrder& ord) {
  for (Vertex u = 0; u < ord.original_count; ++u)
    for (Vertex v = 0; v < ord.original_count; ++v)
      if (u != v && ord.less(u, v) == ord.less(v, u)) return false;
  return true;
}

struct CycleCoverWitness {
  std::vector<Vertex> X; // claimed heads
  std::vector<Arc> Y;    // claimed cover
};

/// Every vertex has in- and out-degree 1 in Y, and has exactly one h in X
/// that reaches it within Y and is not after it in the order.
inline bool eval_phi(const WeightedDigraph& g, const CycleCoverWitness& w, const NxtOrder& ord) {
  const int n = g.size();
  if (ord.original_count != n) return false;
  std::vector<int> in(static_cast<std::size_t>(n), 0), out(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<Vertex>> succ(static_cast<std::size_t>(n));
  for (auto [u, v] : w.Y) {
    if (u < 0 || v < 0 || u >= n || v >= n || !g.has_arc(u, v)) return false;
    ++out[static_cast<std::size_t>(u)];
    ++in[static_cast<std::size_t>(v)];
    succ[static_cast<std::size_t>(u)].push_back(v);
  }
  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)] != 1 || out[static_cast<std::size_t>(v)] != 1) return false;

  std::vector<char> head(static_cast<std::size_t>(n), 0);
  for (Vertex h : w.X) {
    if (h < 0 || h >= n) return false;
    head[static_cast<std::size_t>(h)] = 1;
  }
  // reach[h][v]: path from h to v in Y (length 0 allowed)
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int h = 0; h < n; ++h) {
    auto& r = reach[static_cast<std::size_t>(h)];
    std::vector<Vertex> stack{h};
    r[static_cast<std::size_t>(h)] = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : succ[static_cast<std::size_t>(x)])
        if (!r[static_cast<std::size_t>(y)]) {
          r[static_cast<std::size_t>(y)] = 1;
          stack.push_back(y);
        }
    }
  }
  for (int v = 0; v < n; ++v) {
    int found = 0;
    for (int h = 0; h < n; ++h)
      if (head[static_cast<std::size_t>(h)] && reach[static_cast<std::size_t>(h)][static_cast<std::size_t>(v)] &&
          (h == v || ord.less(h, v)))
        ++found;
    if (found != 1) return false;
  }
  return true;
}

/// All cycle covers of g as arc lists sorted by tail, in lexicographic
/// order.
inline std::vector<std::vector<Arc>> enumerate_cycle_covers(const WeightedDigraph& g, int cap = 10) {
  const int n = g.size();
  if (n > cap) throw PreconditionError("enumerate_cycle_covers: " + std::to_string(n) + " vertices exceed cap " +
                                       std::to_string(cap));
  std::vector<std::vector<Vertex>> succ(static_cast<std::size_t>(n));
  for (const auto& [a, w] : g.arcs()) succ[static_cast<std::size_t>(a.first)].push_back(a.second);
  std::vector<std::vector<Arc>> out;
  std::vector<Arc> cur;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int u) -> void {
    if (u == n) {
      out.push_back(cur);
      return;
    }
    for (Vertex v : succ[static_cast<std::size_t>(u)]) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = 1;
      cur.emplace_back(u, v);
      self(self, u + 1);
      cur.pop_back();
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

/// Accepted witnesses grouped by (|X|, |Y|). Y ranges over cycle covers
/// (anything else fails the degree clause) and X over all vertex subsets.
inline std::map<std::pair<int, int>, Integer> accepted_witness_counts(const WeightedDigraph& g, const NxtOrder& ord,
                                                                      int cap = 10) {
  const int n = g.size();
  if (n > 20) throw PreconditionError("accepted_witness_counts: too many vertex subsets");
  std::map<std::pair<int, int>, Integer> counts;
  for (const auto& y : enumerate_cycle_covers(g, cap)) {
    CycleCoverWitness w{{}, y};
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      w.X.clear();
      for (int v = 0; v < n; ++v)
        if (mask >> v & 1u) w.X.push_back(v);
      if (eval_phi(g, w, ord)) counts[{static_cast<int>(w.X.size()), static_cast<int>(y.size())}] += 1;
    }
  }
  return counts;
}

} // namespace twdet
