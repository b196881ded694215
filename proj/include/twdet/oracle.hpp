#pragma once

// Brute-force reference implementations. Nothing here depends on the
// decomposition or cycle-cover machinery.

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/rational.hpp"

namespace twdet::oracle {

/// Fraction-free Gaussian elimination. Rows are first scaled to integers,
/// pivots are searched over the whole remaining submatrix.
inline Rational det_bareiss(const RationalMatrix& a) {
  if (!a.square()) throw PreconditionError("det_bareiss needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  auto dense = a.dense();
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  Rational scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (const auto& q : dense[i]) l = boost::multiprecision::lcm(l, denominator_of(q));
    scale *= l;
    for (std::size_t j = 0; j < n; ++j) m[i][j] = numerator_of(dense[i][j] * l);
  }
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pr = n, pc = n;
    for (std::size_t i = k; i < n && pr == n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (m[i][j] != 0) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == n) return 0;
    if (pr != k) {
      std::swap(m[pr], m[k]);
      sign = -sign;
    }
    if (pc != k) {
      for (auto& row : m) std::swap(row[pc], row[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Rational d = Rational(m[n - 1][n - 1]) / scale;
  return sign < 0 ? Rational(-d) : d;
}

/// Cofactor expansion along the first row; n <= 8.
inline Rational det_laplace(const RationalMatrix& a) {
  if (!a.square()) throw PreconditionError("det_laplace needs a square matrix");
  if (a.rows() > 8) throw PreconditionError("det_laplace capped at n = 8");
  auto d = a.dense();
  std::function<Rational(std::vector<std::size_t>&, std::size_t)> rec = [&](std::vector<std::size_t>& cols,
                                                                             std::size_t row) -> Rational {
    if (cols.empty()) return 1;
    Rational total = 0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Rational& v = d[row][cols[k]];
      if (v == 0) continue;
      std::size_t c = cols[k];
      cols.erase(cols.begin() + static_cast<long>(k));
      Rational sub = v * rec(cols, row + 1);
      cols.insert(cols.begin() + static_cast<long>(k), c);
      total += (k % 2) ? Rational(-sub) : sub;
    }
    return total;
  };
  std::vector<std::size_t> cols(a.cols());
  std::iota(cols.begin(), cols.end(), 0);
  return rec(cols, 0);
}

/// Number of permutations supported on the nonzero pattern; n <= 10.
inline Integer support_permanent(const RationalMatrix& a) {
  if (!a.square() || a.rows() > 10) throw PreconditionError("support_permanent needs square n <= 10");
  const std::size_t n = a.rows();
  std::vector<unsigned> mask(n, 0);
  for (const auto& [ij, v] : a.entries()) mask[ij.first] |= 1u << ij.second;
  std::vector<Integer> dp(std::size_t{1} << n, 0);
  dp[0] = 1;
  for (unsigned used = 0; used < (1u << n); ++used) {
    if (dp[used] == 0) continue;
    std::size_t row = static_cast<std::size_t>(std::popcount(used));
    if (row == n) continue;
    for (unsigned free = mask[row] & ~used; free; free &= free - 1) dp[used | (free & -free)] += dp[used];
  }
  return dp[(std::size_t{1} << n) - 1];
}

inline RationalMatrix power_direct(const RationalMatrix& a, unsigned m) {
  if (!a.square()) throw PreconditionError("power_direct needs a square matrix");
  RationalMatrix r = RationalMatrix::identity(a.rows());
  for (unsigned i = 0; i < m; ++i) r = r * a;
  return r;
}

/// Pivot count of row echelon form over the rationals.
inline std::size_t rank_elimination(const RationalMatrix& a) {
  auto m = a.dense();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < a.rows() && m[piv][col] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      if (m[i][col] == 0) continue;
      Rational f = m[i][col] / m[rank][col];
      for (std::size_t j = col; j < a.cols(); ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Az = b solvable over the rationals, decided by eliminating [A : b].
inline bool feasible_elimination(const RationalMatrix& a, const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw PreconditionError("right-hand side length mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (const auto& [ij, v] : a.entries()) aug.set(ij.first, ij.second, v);
  for (std::size_t i = 0; i < b.size(); ++i) aug.set(i, a.cols(), b[i]);
  return rank_elimination(aug) == rank_elimination(a);
}

/// Coefficients c_0..c_n of det(xI - A), interpolated from det values at
/// x = 0..n computed by Bareiss.
inline std::vector<Rational> charpoly_interpolation(const RationalMatrix& a) {
  if (!a.square()) throw PreconditionError("charpoly_interpolation needs a square matrix");
  const std::size_t n = a.rows();
  std::vector<Rational> coeffs(n + 1, 0);
  for (std::size_t k = 0; k <= n; ++k) {
    RationalMatrix m(n, n);
    for (const auto& [ij, v] : a.entries()) m.set(ij.first, ij.second, -v);
    for (std::size_t i = 0; i < n; ++i) m.add(i, i, static_cast<long>(k));
    Rational yk = det_bareiss(m);
    // Lagrange basis polynomial for node k over nodes 0..n.
    std::vector<Rational> basis{1};
    Rational denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == k) continue;
      std::vector<Rational> next(basis.size() + 1, 0);
      for (std::size_t d = 0; d < basis.size(); ++d) {
        next[d + 1] += basis[d];
        next[d] -= basis[d] * static_cast<long>(j);
      }
      basis = std::move(next);
      denom *= static_cast<long>(k) - static_cast<long>(j);
    }
    for (std::size_t d = 0; d <= n; ++d) coeffs[d] += yk * basis[d] / denom;
  }
  return coeffs;
}

/// Spanning arborescences by choosing one parent arc per non-root vertex;
/// n <= 7.
inline Integer brute_arborescences(const WeightedDigraph& g, Vertex root,
                                   Orientation orient = Orientation::away_from_root) {
  const int n = g.size();
  if (n > 7) throw PreconditionError("brute_arborescences capped at 7 vertices");
  if (root < 0 || root >= n) throw PreconditionError("root out of range");
  // choices[v]: neighbours that may serve as v's parent
  std::vector<std::vector<Vertex>> choices(static_cast<std::size_t>(n));
  for (const auto& [a, w] : g.arcs()) {
    if (a.first == a.second) continue;
    if (orient == Orientation::away_from_root)
      choices[static_cast<std::size_t>(a.second)].push_back(a.first);
    else
      choices[static_cast<std::size_t>(a.first)].push_back(a.second);
  }
  std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
  Integer count = 0;
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      for (int x = 0; x < n; ++x) {
        int cur = x, steps = 0;
        while (cur != root && steps <= n) {
          cur = parent[static_cast<std::size_t>(cur)];
          ++steps;
        }
        if (cur != root) return;
      }
      ++count;
      return;
    }
    if (v == root) {
      rec(v + 1);
      return;
    }
    for (Vertex p : choices[static_cast<std::size_t>(v)]) {
      parent[static_cast<std::size_t>(v)] = p;
      rec(v + 1);
    }
  };
  rec(0);
  return count;
}

/// Euler circuits counted as arc sequences beginning with the least arc;
/// at most 12 arcs.
inline Integer brute_euler_tours(const WeightedDigraph& g) {
  std::vector<Arc> arcs;
  for (const auto& [a, w] : g.arcs()) arcs.push_back(a);
  if (arcs.size() > 12) throw PreconditionError("brute_euler_tours capped at 12 arcs");
  if (arcs.empty()) return 0;
  std::vector<char> used(arcs.size(), 0);
  Integer count = 0;
  std::function<void(Vertex, std::size_t)> rec = [&](Vertex at, std::size_t taken) {
    if (taken == arcs.size()) {
      if (at == arcs[0].first) ++count;
      return;
    }
    for (std::size_t i = 1; i < arcs.size(); ++i)
      if (!used[i] && arcs[i].first == at) {
        used[i] = 1;
        rec(arcs[i].second, taken + 1);
        used[i] = 0;
      }
  };
  used[0] = 1;
  rec(arcs[0].second, 1);
  return count;
}

/// Spanning trees of an undirected graph by subset enumeration; n <= 7.
inline Integer brute_spanning_trees(const Graph& g) {
  const int n = g.size();
  if (n > 7) throw PreconditionError("brute_spanning_trees capped at 7 vertices");
  if (n <= 1) return 1;
  auto edges = g.edges();
  Integer count = 0;
  std::vector<int> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() == static_cast<std::size_t>(n - 1)) {
      std::vector<int> comp(static_cast<std::size_t>(n));
      std::iota(comp.begin(), comp.end(), 0);
      std::function<int(int)> find = [&](int x) {
        return comp[static_cast<std::size_t>(x)] == x ? x : comp[static_cast<std::size_t>(x)] = find(comp[static_cast<std::size_t>(x)]);
      };
      for (int e : pick) {
        int a = find(edges[static_cast<std::size_t>(e)].first), b = find(edges[static_cast<std::size_t>(e)].second);
        if (a == b) return;
        comp[static_cast<std::size_t>(a)] = b;
      }
      ++count;
      return;
    }
    for (std::size_t e = from; e < edges.size(); ++e) {
      pick.push_back(static_cast<int>(e));
      rec(e + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return count;
}

} // namespace twdet::oracle
