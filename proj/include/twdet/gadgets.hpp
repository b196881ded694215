#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet {

/// Partition of the arcs of a digraph into value classes. The class of an
/// x-loop (characteristic-polynomial mode) carries no concrete value.
struct EdgeClassMap {
  std::vector<Rational> values;
  std::map<Arc, int> arc_class;
  std::optional<int> x_class;

  int class_count() const { return static_cast<int>(values.size()); }
  bool symbolic() const { return x_class.has_value(); }

  int class_of(Vertex u, Vertex v) const {
    auto it = arc_class.find({u, v});
    if (it == arc_class.end()) throw PreconditionError("arc has no class");
    return it->second;
  }
};

/// One class per distinct arc weight, classes sorted by value.
inline EdgeClassMap classes_by_value(const WeightedDigraph& g) {
  std::set<Rational> distinct;
  for (const auto& [a, w] : g.arcs()) distinct.insert(w);
  EdgeClassMap m;
  m.values.assign(distinct.begin(), distinct.end());
  for (const auto& [a, w] : g.arcs())
    m.arc_class[a] = static_cast<int>(std::lower_bound(m.values.begin(), m.values.end(), w) - m.values.begin());
  return m;
}

inline std::size_t distinct_weight_count(const WeightedDigraph& g) {
  std::set<Rational> distinct;
  for (const auto& [a, w] : g.arcs()) distinct.insert(w);
  return distinct.size();
}

/// Checks that every arc has a class and concrete classes match weights.
inline bool consistent(const EdgeClassMap& m, const WeightedDigraph& g) {
  if (m.arc_class.size() != g.arc_count()) return false;
  for (const auto& [a, w] : g.arcs()) {
    auto it = m.arc_class.find(a);
    if (it == m.arc_class.end() || it->second < 0 || it->second >= m.class_count()) return false;
    if (m.x_class && it->second == *m.x_class) {
      if (a.first != a.second) return false;
      continue;
    }
    if (m.values[static_cast<std::size_t>(it->second)] != w) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Integer weights -> {0,1} weights

/// Record of the subgraph that replaced one original arc.
struct GadgetRecord {
  Rational weight;
  std::vector<Vertex> internal;    // all new vertices, each with a self-loop
  Vertex parity = -1;              // common vertex in front of the head
  Vertex sign_flip = -1;           // extra subdivision vertex for negative weights
  int path_internal = 0;           // internal vertices on every tail->head path
};

struct GadgetExpansion {
  WeightedDigraph graph;
  TreeDecomposition td;
  int original_vertices = 0;
  std::map<Arc, GadgetRecord> gadgets;
};

namespace detail {

inline int closest_bag_to_root(const TreeDecomposition& t, Vertex u, Vertex v) {
  auto adj = t.adjacency();
  std::vector<int> dist(t.bags.size(), -1);
  std::vector<int> queue{0};
  dist[0] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int x = queue[h];
    if (bag_contains(t.bags[static_cast<std::size_t>(x)], u) && bag_contains(t.bags[static_cast<std::size_t>(x)], v))
      return x;
    for (int y : adj[static_cast<std::size_t>(x)])
      if (dist[static_cast<std::size_t>(y)] < 0) {
        dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
        queue.push_back(y);
      }
  }
  throw InvalidDecomposition("no bag holds both endpoints of an arc");
}

inline int add_bag(TreeDecomposition& t, Bag b, int parent) {
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  t.bags.push_back(std::move(b));
  int id = static_cast<int>(t.bags.size()) - 1;
  if (parent >= 0) t.edges.emplace_back(parent, id);
  return id;
}

} // namespace detail

/// Replaces every arc whose weight is not 1 by a {0,1} gadget with the same
/// signed path weight. Arc weights must be integers. For |w| >= 2 the
/// gadget has one branch per set bit i of |w|; branch i is a chain of i
/// doubling diamonds padded so that every branch has the same length, and
/// all branches meet in a parity vertex before the head. Each tail->head
/// path then has 2B+2 internal vertices (B = top bit), so using the gadget
/// changes the cycle count by an even amount. A negative weight adds one
/// more subdivision vertex, which flips the sign exactly when the path is
/// used. The decomposition gets a bag {u,v} below the bag closest to the
/// root holding u and v, and the gadget's own bags below that; gadget bags
/// hold at most four vertices.
inline GadgetExpansion expand_weights(const WeightedDigraph& g, const TreeDecomposition& t) {
  Graph ug = underlying_graph(g);
  TreeDecomposition td = t;
  td.normalize();
  require_valid(td, ug);
  for (const auto& [a, w] : g.arcs())
    if (!is_integer(w)) throw PreconditionError("expand_weights needs integer weights");

  GadgetExpansion out;
  out.original_vertices = g.size();
  WeightedDigraph h(g.size());
  if (td.bags.empty()) detail::add_bag(td, {}, -1);

  for (const auto& [arc, w] : g.arcs()) {
    auto [u, v] = arc;
    if (w == 1) {
      h.set_arc(u, v, 1);
      continue;
    }
    GadgetRecord rec;
    rec.weight = w;
    auto fresh = [&]() {
      Vertex x = h.add_vertex();
      h.set_arc(x, x, 1);
      rec.internal.push_back(x);
      return x;
    };
    const bool negative = w < 0;
    Integer mag = numerator_of(w);
    if (negative) mag = -mag;

    int anchor = detail::closest_bag_to_root(td, u, v);
    int edge_bag = detail::add_bag(td, {u, v}, anchor);

    if (mag == 1) {
      Vertex q = fresh();
      rec.sign_flip = q;
      rec.path_internal = 1;
      h.set_arc(u, q, 1);
      h.set_arc(q, v, 1);
      detail::add_bag(td, {u, v, q}, edge_bag);
      out.gadgets.emplace(arc, std::move(rec));
      continue;
    }

    unsigned top = static_cast<unsigned>(boost::multiprecision::msb(mag));
    Vertex p = fresh();
    rec.parity = p;
    Bag hub{u, v, p};
    if (negative) {
      Vertex q = fresh();
      rec.sign_flip = q;
      h.set_arc(p, q, 1);
      h.set_arc(q, v, 1);
      hub.push_back(q);
    } else {
      h.set_arc(p, v, 1);
    }
    int hub_bag = detail::add_bag(td, hub, edge_bag);
    rec.path_internal = 2 * static_cast<int>(top) + 2 + (negative ? 1 : 0);

    for (unsigned i = 0; i <= top; ++i) {
      if (!boost::multiprecision::bit_test(mag, i)) continue;
      Vertex s = fresh();
      h.set_arc(u, s, 1);
      int bag = detail::add_bag(td, {u, p, s}, hub_bag);
      Vertex cur = s;
      for (unsigned stage = 0; stage < i; ++stage) {
        Vertex x = fresh(), y = fresh(), next = fresh();
        h.set_arc(cur, x, 1);
        h.set_arc(cur, y, 1);
        h.set_arc(x, next, 1);
        h.set_arc(y, next, 1);
        bag = detail::add_bag(td, {p, cur, x, y}, bag);
        bag = detail::add_bag(td, {p, x, y, next}, bag);
        cur = next;
      }
      for (unsigned pad = 0; pad < 2 * (top - i); ++pad) {
        Vertex c = fresh();
        h.set_arc(cur, c, 1);
        bag = detail::add_bag(td, {p, cur, c}, bag);
        cur = c;
      }
      h.set_arc(cur, p, 1);
    }
    out.gadgets.emplace(arc, std::move(rec));
  }
  out.graph = std::move(h);
  out.td = std::move(td);
  return out;
}

/// Every arc in class 0 with value 1.
inline EdgeClassMap unit_classes(const WeightedDigraph& g) {
  EdgeClassMap m;
  m.values = {Rational(1)};
  for (const auto& [a, w] : g.arcs()) m.arc_class[a] = 0;
  return m;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial graph

/// Digraph of xI - A. Vertex v < n carries an x-loop; off-diagonal entry
/// a_ij becomes arc (i,j) of weight -a_ij; a nonzero diagonal entry d is
/// realized as a detour v -> q -> v through a fresh vertex q with a unit
/// self-loop, where arc (v,q) has weight d and (q,v) weight 1. The detour
/// has one more vertex than a plain loop, so its cover sign is flipped and
/// it contributes -d in parallel with the x-loop.
struct CharPolyGraph {
  WeightedDigraph graph;
  EdgeClassMap classes;
  int original_vertices = 0;
  std::map<Vertex, Vertex> diagonal_detour; // v -> q
};

inline CharPolyGraph charpoly_graph(const RationalMatrix& a) {
  if (!a.square()) throw PreconditionError("charpoly_graph needs a square matrix");
  const int n = static_cast<int>(a.rows());
  CharPolyGraph out;
  out.original_vertices = n;
  WeightedDigraph g(n);
  for (const auto& [ij, val] : a.entries()) {
    Vertex i = static_cast<Vertex>(ij.first), j = static_cast<Vertex>(ij.second);
    if (i != j) g.set_arc(i, j, -val);
  }
  for (const auto& [ij, val] : a.entries()) {
    if (ij.first != ij.second) continue;
    Vertex v = static_cast<Vertex>(ij.first);
    Vertex q = g.add_vertex();
    g.set_arc(v, q, val);
    g.set_arc(q, v, 1);
    g.set_arc(q, q, 1);
    out.diagonal_detour[v] = q;
  }
  // Valued classes exclude the x-loops, which get their own class last.
  WeightedDigraph valued = g;
  out.classes = classes_by_value(valued);
  for (Vertex v = 0; v < n; ++v) g.set_arc(v, v, 1);
  out.classes.x_class = out.classes.class_count();
  out.classes.values.push_back(Rational(0));
  for (Vertex v = 0; v < n; ++v) out.classes.arc_class[{v, v}] = *out.classes.x_class;
  out.graph = std::move(g);
  return out;
}

/// Extends a decomposition of the support of A to the charpoly graph by
/// hanging a bag {v, q} under some bag holding v, for every detour.
inline TreeDecomposition charpoly_decomposition(const CharPolyGraph& cg, const TreeDecomposition& t) {
  TreeDecomposition td = t;
  td.normalize();
  if (td.bags.empty()) detail::add_bag(td, {}, -1);
  for (const auto& [v, q] : cg.diagonal_detour) {
    int anchor = detail::closest_bag_to_root(td, v, v);
    detail::add_bag(td, {v, q}, anchor);
  }
  return td;
}

} // namespace twdet
