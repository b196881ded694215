#pragma once

// Generators for structured instances: order-on-a-path determinants, path
// powering and the layered walk gadget for iterated products.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet {

namespace detail {
inline std::vector<Vertex> random_path_order(int n, std::mt19937_64& rng) {
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
} // namespace detail

/// Directed path a -> ... -> b with marked s, t and the rewired digraph.
/// With s' the predecessor of s and t' the successor of t, the rewiring
/// removes (s', s) and (t, t') and adds (s', a), (s', t), (t, s), (s, a)
/// and (b, t').
struct OrdInstance {
  int n = 0;
  std::vector<Vertex> path; // vertices in path order
  Vertex a = -1, b = -1, s = -1, t = -1, s_prev = -1, t_next = -1;
  bool s_precedes_t = false;
  WeightedDigraph path_graph;
  WeightedDigraph graph; // rewired
  TreeDecomposition td;  // of the rewired graph (min-fill)
};

/// `gap` is the number of path steps from s to t when s comes first
/// (0 picks it at random). The determinant of the rewired graph vanishes
/// for s-first instances only when gap == 1: for longer gaps the cycle
/// through a, s', t, s leaves the vertices strictly between s and t
/// uncovered and a single cover survives.
/// Treewidth of the rewired graph: 2 when s comes first, 3 otherwise (the
/// segments a..t, t'..s' and s..b together with a and t form a K4 minor).
inline OrdInstance gen_ord_instance(int n, bool s_first, std::uint64_t seed, int gap = 1) {
  if (n < 6) throw PreconditionError("gen_ord_instance needs n >= 6");
  if (gap < 0) throw PreconditionError("gap must be nonnegative");
  std::mt19937_64 rng(seed);
  OrdInstance inst;
  inst.n = n;
  inst.path = detail::random_path_order(n, rng);
  int ps = 0, pt = 0;
  if (s_first) {
    // positions: s' = ps-1 >= 1, t = ps + gap, t' = t + 1 <= n - 2
    int g = gap > 0 ? gap : detail::pick(rng, 1, n - 5);
    if (g > n - 5) throw PreconditionError("gap too large for n");
    ps = detail::pick(rng, 2, n - 3 - g);
    pt = ps + g;
  } else {
    // positions: t >= 1, t' = t + 1, s' = ps - 1 >= t + 2, s <= n - 2
    pt = detail::pick(rng, 1, n - 5);
    ps = detail::pick(rng, pt + 3, n - 2);
  }
  auto at = [&](int pos) { return inst.path[static_cast<std::size_t>(pos)]; };
  inst.a = at(0);
  inst.b = at(n - 1);
  inst.s = at(ps);
  inst.s_prev = at(ps - 1);
  inst.t = at(pt);
  inst.t_next = at(pt + 1);
  inst.s_precedes_t = ps < pt;

  inst.path_graph = WeightedDigraph(n);
  for (int i = 0; i + 1 < n; ++i) inst.path_graph.set_arc(at(i), at(i + 1), 1);
  inst.graph = inst.path_graph;
  inst.graph.set_arc(inst.s_prev, inst.s, 0);
  inst.graph.set_arc(inst.t, inst.t_next, 0);
  inst.graph.set_arc(inst.s_prev, inst.a, 1);
  inst.graph.set_arc(inst.s_prev, inst.t, 1);
  inst.graph.set_arc(inst.t, inst.s, 1);
  inst.graph.set_arc(inst.s, inst.a, 1);
  inst.graph.set_arc(inst.b, inst.t_next, 1);

  inst.td = decompose(inst.graph);
  require_valid(inst.td, underlying_graph(inst.graph));
  if (inst.td.width() > 3) throw Error("internal: rewired path decomposition wider than 3");
  return inst;
}

/// Adjacency matrix of a random directed path with marked s, t.
struct PoweringInstance {
  RationalMatrix adjacency;
  std::vector<Vertex> path;
  Vertex s = -1, t = -1;
  bool reachable = false; // s reaches t along the path (s == t included)
};

inline PoweringInstance gen_powering_instance(int n, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("gen_powering_instance needs n >= 2");
  std::mt19937_64 rng(seed);
  PoweringInstance inst;
  inst.path = detail::random_path_order(n, rng);
  inst.adjacency = RationalMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i)
    inst.adjacency.set(static_cast<std::size_t>(inst.path[static_cast<std::size_t>(i)]),
                       static_cast<std::size_t>(inst.path[static_cast<std::size_t>(i + 1)]), 1);
  int ps = detail::pick(rng, 0, n - 1), pt = detail::pick(rng, 0, n - 1);
  inst.s = inst.path[static_cast<std::size_t>(ps)];
  inst.t = inst.path[static_cast<std::size_t>(pt)];
  inst.reachable = ps <= pt;
  return inst;
}

// ---------------------------------------------------------------------------
// Walk gadget

/// Layered digraph W for the m-th power of a 0/1 matrix A on n vertices.
/// It consists of m blocks of n layers each, plus one terminal layer. Every
/// layer holds an upper copy U and a lower copy L of the vertex set. Each
/// layer is joined to the next one by the identity on U and on L. At the
/// i-th layer of a block, vertex v_i may also cross to each out-neighbour
/// in the next layer: from L to U in odd blocks (1st, 3rd, ...), from U to
/// L in even blocks. A walk v_s = w_0, ..., w_m of G_A corresponds to the
/// path from L(v_s) in the first layer that crosses once in every block,
/// ending at w_m in the terminal layer on side U for odd m, L for even m.
struct ImmGadget {
  int n = 0;
  unsigned m = 0;
  WeightedDigraph graph;
  std::vector<RationalMatrix> layers; // 2n x 2n transfer matrix per layer step, U first
  std::set<Arc> crossing;             // arcs of W that come from arcs of A

  int layer_count() const { return static_cast<int>(m) * n + 1; }
  /// side 0 = U, side 1 = L
  Vertex id(int layer, int side, int v) const { return layer * 2 * n + side * n + v; }
  Vertex source(int s) const { return id(0, 1, s); }
  Vertex target(int t) const { return id(layer_count() - 1, m % 2 == 1 ? 0 : 1, t); }
};

inline ImmGadget gen_imm_gadget(const RationalMatrix& a, unsigned m) {
  if (!a.square()) throw PreconditionError("gen_imm_gadget needs a square matrix");
  for (const auto& [ij, v] : a.entries())
    if (v != 1) throw PreconditionError("gen_imm_gadget needs a 0/1 matrix");
  ImmGadget w;
  w.n = static_cast<int>(a.rows());
  w.m = m;
  const int n = w.n;
  w.graph = WeightedDigraph(w.layer_count() * 2 * n);
  for (int layer = 0; layer + 1 < w.layer_count(); ++layer) {
    RationalMatrix step(static_cast<std::size_t>(2 * n), static_cast<std::size_t>(2 * n));
    for (int side = 0; side < 2; ++side)
      for (int v = 0; v < n; ++v) {
        w.graph.set_arc(w.id(layer, side, v), w.id(layer + 1, side, v), 1);
        step.set(static_cast<std::size_t>(side * n + v), static_cast<std::size_t>(side * n + v), 1);
      }
    int block = layer / n;
    int i = layer % n;
    int from = block % 2 == 0 ? 1 : 0;
    for (const auto& [ij, v] : a.entries()) {
      if (ij.first != static_cast<std::size_t>(i)) continue;
      int k = static_cast<int>(ij.second);
      Arc arc{w.id(layer, from, i), w.id(layer + 1, 1 - from, k)};
      w.graph.set_arc(arc.first, arc.second, 1);
      w.crossing.insert(arc);
      step.set(static_cast<std::size_t>(from * n + i), static_cast<std::size_t>((1 - from) * n + k), 1);
    }
    w.layers.push_back(std::move(step));
  }
  return w;
}

/// Number of source -> target paths of W that use exactly `crossings`
/// arcs coming from A (W is acyclic and layered, so this is a forward
/// sweep over layers).
inline Integer imm_path_count(const ImmGadget& w, int s, int t, unsigned crossings) {
  const int per_layer = 2 * w.n;
  // ways[c][x]: paths to vertex x of the current layer with c crossings
  std::vector<std::vector<Integer>> ways(crossings + 1, std::vector<Integer>(static_cast<std::size_t>(per_layer), 0));
  ways[0][static_cast<std::size_t>(w.n + s)] = 1;
  for (const auto& step : w.layers) {
    std::vector<std::vector<Integer>> next(crossings + 1,
                                           std::vector<Integer>(static_cast<std::size_t>(per_layer), 0));
    for (const auto& [ij, v] : step.entries()) {
      bool crossing = (ij.first < static_cast<std::size_t>(w.n)) != (ij.second < static_cast<std::size_t>(w.n));
      for (unsigned c = 0; c <= crossings; ++c) {
        const Integer& here = ways[c][ij.first];
        if (here == 0) continue;
        unsigned nc = c + (crossing ? 1 : 0);
        if (nc <= crossings) next[nc][ij.second] += here;
      }
    }
    ways = std::move(next);
  }
  Vertex tgt = w.target(t) - (w.layer_count() - 1) * per_layer;
  return ways[crossings][static_cast<std::size_t>(tgt)];
}

} // namespace twdet
