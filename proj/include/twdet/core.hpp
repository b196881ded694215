#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "twdet/errors.hpp"
#include "twdet/rational.hpp"

namespace twdet {

using Vertex = int;
using Index = std::pair<std::size_t, std::size_t>;
using Arc = std::pair<Vertex, Vertex>;

/// Arborescence orientation: every arc points away from the root
/// (out-branching) or toward it (in-branching).
enum class Orientation { away_from_root, toward_root };

/// Sparse matrix over exact rationals. Zero entries are never stored.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  /// Dense row-major construction, mostly for tests and small literals.
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.front().size() : 0;
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw PreconditionError("ragged row list");
      for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  std::size_t nonzeros() const { return entries_.size(); }

  void set(std::size_t i, std::size_t j, const Rational& v) {
    check(i, j);
    if (v == 0)
      entries_.erase({i, j});
    else
      entries_[{i, j}] = v;
  }

  void add(std::size_t i, std::size_t j, const Rational& v) {
    check(i, j);
    auto it = entries_.find({i, j});
    if (it == entries_.end()) {
      if (v != 0) entries_.emplace(Index{i, j}, v);
      return;
    }
    it->second += v;
    if (it->second == 0) entries_.erase(it);
  }

  Rational at(std::size_t i, std::size_t j) const {
    check(i, j);
    auto it = entries_.find({i, j});
    return it == entries_.end() ? Rational(0) : it->second;
  }

  const std::map<Index, Rational>& entries() const { return entries_; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (const auto& [ij, v] : entries_) t.entries_.emplace(Index{ij.second, ij.first}, v);
    return t;
  }

  std::vector<std::vector<Rational>> dense() const {
    std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_));
    for (const auto& [ij, v] : entries_) d[ij.first][ij.second] = v;
    return d;
  }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product dimension mismatch");
    std::vector<std::vector<std::pair<std::size_t, Rational>>> brow(b.rows_);
    for (const auto& [ij, v] : b.entries_) brow[ij.first].emplace_back(ij.second, v);
    RationalMatrix c(a.rows_, b.cols_);
    for (const auto& [ij, v] : a.entries_)
      for (const auto& [k, w] : brow[ij.second]) c.add(ij.first, k, v * w);
    return c;
  }

  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("matrix difference dimension mismatch");
    RationalMatrix c = a;
    for (const auto& [ij, v] : b.entries_) c.add(ij.first, ij.second, -v);
    return c;
  }

private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw PreconditionError("matrix index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<Index, Rational> entries_;
};

/// Directed graph with exact nonzero arc weights; self-loops allowed,
/// parallel arcs not representable.
class WeightedDigraph {
public:
  WeightedDigraph() = default;
  explicit WeightedDigraph(int n) : n_(n) {
    if (n < 0) throw PreconditionError("negative vertex count");
  }

  int size() const { return n_; }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::map<Arc, Rational>& arcs() const { return arcs_; }

  int add_vertex() { return n_++; }

  void set_arc(Vertex u, Vertex v, const Rational& w) {
    check(u);
    check(v);
    if (w == 0)
      arcs_.erase({u, v});
    else
      arcs_[{u, v}] = w;
  }

  bool has_arc(Vertex u, Vertex v) const { return arcs_.count({u, v}) != 0; }

  Rational weight(Vertex u, Vertex v) const {
    auto it = arcs_.find({u, v});
    return it == arcs_.end() ? Rational(0) : it->second;
  }

  RationalMatrix adjacency_matrix() const {
    RationalMatrix m(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
    for (const auto& [a, w] : arcs_) m.set(static_cast<std::size_t>(a.first), static_cast<std::size_t>(a.second), w);
    return m;
  }

  friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;

private:
  void check(Vertex v) const {
    if (v < 0 || v >= n_) throw PreconditionError("vertex index out of range");
  }

  int n_ = 0;
  std::map<Arc, Rational> arcs_;
};

/// Simple undirected graph; self-loops are dropped on insertion.
class Graph {
public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {}

  int size() const { return static_cast<int>(adj_.size()); }

  void add_edge(Vertex u, Vertex v) {
    if (u < 0 || v < 0 || u >= size() || v >= size()) throw PreconditionError("edge endpoint out of range");
    if (u == v) return;
    adj_[static_cast<std::size_t>(u)].insert(v);
    adj_[static_cast<std::size_t>(v)].insert(u);
  }

  bool has_edge(Vertex u, Vertex v) const { return adj_[static_cast<std::size_t>(u)].count(v) != 0; }
  const std::set<Vertex>& neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }

  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (int u = 0; u < size(); ++u)
      for (Vertex v : adj_[static_cast<std::size_t>(u)])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t d = 0;
    for (const auto& s : adj_) d += s.size();
    return d / 2;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  std::vector<std::set<Vertex>> adj_;
};

/// Undirected bipartite multigraph with rational edge weights.
struct BipartiteGraph {
  struct Edge {
    int left;
    int right;
    Rational weight;
  };

  int left_count = 0;
  int right_count = 0;
  std::vector<Edge> edges;

  /// Left vertex i becomes i, right vertex j becomes left_count + j.
  Graph underlying() const {
    Graph g(left_count + right_count);
    for (const auto& e : edges) g.add_edge(e.left, left_count + e.right);
    return g;
  }
};

/// Underlying undirected graph of a digraph (orientation and loops dropped).
inline Graph underlying_graph(const WeightedDigraph& g) {
  Graph u(g.size());
  for (const auto& [a, w] : g.arcs()) u.add_edge(a.first, a.second);
  return u;
}

inline WeightedDigraph support_digraph(const RationalMatrix& a) {
  if (!a.square()) throw PreconditionError("support_digraph needs a square matrix");
  WeightedDigraph g(static_cast<int>(a.rows()));
  for (const auto& [ij, v] : a.entries()) g.set_arc(static_cast<Vertex>(ij.first), static_cast<Vertex>(ij.second), v);
  return g;
}

/// Bipartite double cover: left side holds the v_out copies, right side
/// the v_in copies. One edge per arc (u_out, v_in) plus one (v_in, v_out)
/// per vertex, so a self-loop yields a parallel pair.
inline BipartiteGraph split_graph(const WeightedDigraph& g) {
  BipartiteGraph b;
  b.left_count = g.size();
  b.right_count = g.size();
  for (const auto& [a, w] : g.arcs()) b.edges.push_back({a.first, a.second, w});
  for (int v = 0; v < g.size(); ++v) b.edges.push_back({v, v, Rational(1)});
  return b;
}

/// [[0, A], [A^T, 0]] of dimension (m+n) x (m+n).
inline RationalMatrix symmetric_embedding(const RationalMatrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  RationalMatrix b(m + n, m + n);
  for (const auto& [ij, v] : a.entries()) {
    b.set(ij.first, m + ij.second, v);
    b.set(m + ij.second, ij.first, v);
  }
  return b;
}

inline bool is_symmetric(const RationalMatrix& a) { return a.square() && a == a.transpose(); }

} // namespace twdet
