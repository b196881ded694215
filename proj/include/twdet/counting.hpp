#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/linalg.hpp"
#include "twdet/rational.hpp"

namespace twdet {

/// L = D - Adj for a simple 0/1 digraph, D holding in-degrees (for
/// arborescences directed away from the root) or out-degrees (toward it).
/// Self-loops cancel between D and Adj and are left out of both.
struct LaplacianView {
  Orientation orientation = Orientation::away_from_root;
  std::vector<Integer> degree;
  RationalMatrix adjacency;
  RationalMatrix laplacian;
};

namespace detail {
inline void require_simple_unit(const WeightedDigraph& g) {
  for (const auto& [a, w] : g.arcs())
    if (w != 1)
      throw PreconditionError("arc (" + std::to_string(a.first + 1) + "," + std::to_string(a.second + 1) +
                              ") has weight " + to_string(w) + "; counting needs a simple 0/1 digraph");
}
} // namespace detail

inline LaplacianView laplacian(const WeightedDigraph& g, Orientation orient = Orientation::away_from_root) {
  detail::require_simple_unit(g);
  const auto n = static_cast<std::size_t>(g.size());
  LaplacianView lv;
  lv.orientation = orient;
  lv.degree.assign(n, 0);
  lv.adjacency = RationalMatrix(n, n);
  lv.laplacian = RationalMatrix(n, n);
  for (const auto& [a, w] : g.arcs()) {
    if (a.first == a.second) continue;
    auto u = static_cast<std::size_t>(a.first), v = static_cast<std::size_t>(a.second);
    lv.adjacency.set(u, v, 1);
    lv.laplacian.add(u, v, -1);
    std::size_t d = orient == Orientation::away_from_root ? v : u;
    lv.degree[d] += 1;
    lv.laplacian.add(d, d, 1);
  }
  return lv;
}

/// Spanning arborescences rooted at `root`: the (root, root) principal
/// minor of the Laplacian, evaluated by the cycle-cover determinant.
inline Integer count_arborescences(const WeightedDigraph& g, Vertex root,
                                   Orientation orient = Orientation::away_from_root, const LinalgOptions& opt = {}) {
  if (root < 0 || root >= g.size()) throw PreconditionError("root out of range");
  LaplacianView lv = laplacian(g, orient);
  const auto n = static_cast<std::size_t>(g.size());
  const auto r = static_cast<std::size_t>(root);
  RationalMatrix minor(n - 1, n - 1);
  for (const auto& [ij, v] : lv.laplacian.entries()) {
    if (ij.first == r || ij.second == r) continue;
    minor.set(ij.first - (ij.first > r), ij.second - (ij.second > r), v);
  }
  Rational d = determinant(minor, std::nullopt, opt);
  if (!is_integer(d) || d < 0) throw Error("Laplacian minor is not a nonnegative integer: " + to_string(d));
  return numerator_of(d);
}

struct EulerTourReport {
  Vertex root = 0;                     // root used for the tour count
  Integer arborescences = 0;           // t at that root
  std::vector<int> degree;             // out-degree (= in-degree) per vertex
  Integer factorial_product = 1;       // prod over non-isolated v of (deg(v)-1)!
  Integer tours = 0;                   // arborescences * factorial_product
  std::vector<Integer> per_root;       // t at every non-isolated vertex
  bool root_independent = true;
};

/// Euler circuits (arc sequences up to rotation) of a connected balanced
/// digraph with unit arcs, by the BEST formula. Isolated vertices are
/// ignored; the arborescence count is taken on the remaining vertices and
/// recomputed at every root to confirm it does not depend on the choice.
inline EulerTourReport count_euler_tours(const WeightedDigraph& g, const LinalgOptions& opt = {}) {
  detail::require_simple_unit(g);
  if (g.arc_count() == 0) throw PreconditionError("digraph has no arcs");
  const int n = g.size();
  std::vector<int> in(static_cast<std::size_t>(n), 0), out(static_cast<std::size_t>(n), 0);
  for (const auto& [a, w] : g.arcs()) {
    ++out[static_cast<std::size_t>(a.first)];
    ++in[static_cast<std::size_t>(a.second)];
  }
  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)] != out[static_cast<std::size_t>(v)])
      throw PreconditionError("not Eulerian: vertex " + std::to_string(v + 1) + " has in-degree " +
                              std::to_string(in[static_cast<std::size_t>(v)]) + " and out-degree " +
                              std::to_string(out[static_cast<std::size_t>(v)]));

  std::vector<int> keep;
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (out[static_cast<std::size_t>(v)] > 0) {
      index[static_cast<std::size_t>(v)] = static_cast<int>(keep.size());
      keep.push_back(v);
    }
  WeightedDigraph h(static_cast<int>(keep.size()));
  for (const auto& [a, w] : g.arcs())
    h.set_arc(index[static_cast<std::size_t>(a.first)], index[static_cast<std::size_t>(a.second)], 1);

  // one weak component is enough once degrees balance
  std::vector<int> comp(keep.size());
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[static_cast<std::size_t>(x)] != x) x = comp[static_cast<std::size_t>(x)];
    return x;
  };
  for (const auto& [a, w] : h.arcs()) comp[static_cast<std::size_t>(find(a.first))] = find(a.second);
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (find(static_cast<int>(i)) != find(0))
      throw PreconditionError("not Eulerian: vertices " + std::to_string(keep[0] + 1) + " and " +
                              std::to_string(keep[i] + 1) + " lie in different components");

  EulerTourReport rep;
  rep.degree = out;
  for (int v : keep) rep.factorial_product *= factorial(static_cast<unsigned>(out[static_cast<std::size_t>(v)] - 1));
  for (std::size_t i = 0; i < keep.size(); ++i)
    rep.per_root.push_back(count_arborescences(h, static_cast<Vertex>(i), Orientation::toward_root, opt));
  for (const auto& t : rep.per_root)
    if (t != rep.per_root.front()) rep.root_independent = false;
  rep.root = keep.front();
  rep.arborescences = rep.per_root.front();
  rep.tours = rep.arborescences * rep.factorial_product;
  return rep;
}

} // namespace twdet
