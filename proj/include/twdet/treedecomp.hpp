#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"

namespace twdet {

using Bag = std::vector<Vertex>; // kept sorted, no duplicates

struct TreeDecomposition {
  std::vector<Bag> bags;
  std::vector<std::pair<int, int>> edges; // tree edges between bag indices

  int width() const {
    std::size_t w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return static_cast<int>(w) - 1;
  }

  std::size_t max_bag_size() const { return static_cast<std::size_t>(width() + 1); }

  void normalize() {
    for (auto& b : bags) {
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(bags.size());
    for (auto [a, b] : edges) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& l : adj) std::sort(l.begin(), l.end());
    return adj;
  }

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

inline bool bag_contains(const Bag& b, Vertex v) { return std::binary_search(b.begin(), b.end(), v); }

/// First violated clause of the tree-decomposition definition.
///   'a' vertex missing from every bag
///   'b' edge not covered by any bag
///   'c' bags containing a vertex do not induce a connected subtree
///   'd' bag-tree edges do not form a tree (or reference missing bags)
struct Violation {
  char clause;
  std::string detail;
};

namespace detail {

inline bool tree_edges_in_range(const TreeDecomposition& t) {
  for (auto [a, b] : t.edges)
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= t.bags.size() || static_cast<std::size_t>(b) >= t.bags.size())
      return false;
  return true;
}

} // namespace detail

inline std::optional<Violation> validate(const TreeDecomposition& t, const Graph& g) {
  const int n = g.size();
  for (const auto& b : t.bags)
    for (Vertex v : b)
      if (v < 0 || v >= n) return Violation{'a', "bag mentions vertex " + std::to_string(v + 1) + " outside the graph"};

  std::vector<std::vector<int>> holders(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < t.bags.size(); ++i)
    for (Vertex v : t.bags[i]) holders[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));

  for (int v = 0; v < n; ++v)
    if (holders[static_cast<std::size_t>(v)].empty())
      return Violation{'a', "vertex " + std::to_string(v + 1) + " is in no bag"};

  for (auto [u, v] : g.edges()) {
    bool covered = false;
    for (int i : holders[static_cast<std::size_t>(u)])
      if (bag_contains(t.bags[static_cast<std::size_t>(i)], v)) {
        covered = true;
        break;
      }
    if (!covered)
      return Violation{'b', "edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1) + " is not covered"};
  }

  if (!detail::tree_edges_in_range(t)) return Violation{'d', "tree edge references a missing bag"};
  auto adj = t.adjacency();

  for (int v = 0; v < n; ++v) {
    const auto& hs = holders[static_cast<std::size_t>(v)];
    std::vector<char> seen(t.bags.size(), 0);
    std::vector<int> stack{hs.front()};
    seen[static_cast<std::size_t>(hs.front())] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[static_cast<std::size_t>(x)])
        if (!seen[static_cast<std::size_t>(y)] && bag_contains(t.bags[static_cast<std::size_t>(y)], v)) {
          seen[static_cast<std::size_t>(y)] = 1;
          ++reached;
          stack.push_back(y);
        }
    }
    if (reached != hs.size())
      return Violation{'c', "bags containing vertex " + std::to_string(v + 1) + " are disconnected"};
  }

  if (t.bags.empty()) {
    if (n == 0) return std::nullopt;
    return Violation{'d', "decomposition has no bags"};
  }
  if (t.edges.size() + 1 != t.bags.size())
    return Violation{'d', "bag tree has " + std::to_string(t.edges.size()) + " edges for " +
                              std::to_string(t.bags.size()) + " bags"};
  std::vector<char> seen(t.bags.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<std::size_t>(x)])
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        ++reached;
        stack.push_back(y);
      }
  }
  if (reached != t.bags.size()) return Violation{'d', "bag tree is disconnected"};
  return std::nullopt;
}

inline void require_valid(const TreeDecomposition& t, const Graph& g) {
  if (auto v = validate(t, g))
    throw InvalidDecomposition(std::string("clause (") + v->clause + "): " + v->detail);
}

// ---------------------------------------------------------------------------
// Construction from elimination orderings

enum class Strategy { exact, min_fill, min_degree };

inline std::string to_string(Strategy s) {
  switch (s) {
  case Strategy::exact: return "exact";
  case Strategy::min_fill: return "min-fill";
  case Strategy::min_degree: return "min-degree";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "exact") return Strategy::exact;
  if (s == "min-fill") return Strategy::min_fill;
  if (s == "min-degree") return Strategy::min_degree;
  throw ParseError("unknown strategy: " + s);
}

/// Builds the decomposition induced by eliminating vertices in `order`:
/// one bag per vertex (the vertex plus its later neighbours in the filled
/// graph), attached to the bag of its earliest-eliminated later neighbour.
inline TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<Vertex>& order) {
  const int n = g.size();
  TreeDecomposition t;
  if (n == 0) return t;
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  std::vector<std::set<Vertex>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = g.neighbors(v);

  t.bags.resize(static_cast<std::size_t>(n));
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (Vertex v : order) {
    std::vector<Vertex> later;
    for (Vertex u : adj[static_cast<std::size_t>(v)])
      if (pos[static_cast<std::size_t>(u)] > pos[static_cast<std::size_t>(v)]) later.push_back(u);
    for (std::size_t i = 0; i < later.size(); ++i)
      for (std::size_t j = i + 1; j < later.size(); ++j) {
        adj[static_cast<std::size_t>(later[i])].insert(later[j]);
        adj[static_cast<std::size_t>(later[j])].insert(later[i]);
      }
    Bag b = later;
    b.push_back(v);
    std::sort(b.begin(), b.end());
    t.bags[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] = b;
    if (!later.empty()) {
      Vertex next = *std::min_element(later.begin(), later.end(), [&](Vertex a, Vertex c) {
        return pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(c)];
      });
      parent[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] = pos[static_cast<std::size_t>(next)];
    }
  }
  // Components end in a parentless bag; chain those together.
  int last_root = -1;
  for (int i = 0; i < n; ++i) {
    if (parent[static_cast<std::size_t>(i)] >= 0)
      t.edges.emplace_back(parent[static_cast<std::size_t>(i)], i);
    else {
      if (last_root >= 0) t.edges.emplace_back(last_root, i);
      last_root = i;
    }
  }
  return t;
}

/// Width of the decomposition induced by an elimination order.
inline int elimination_width(const Graph& g, const std::vector<Vertex>& order) {
  return decomposition_from_order(g, order).width();
}

namespace detail {

inline std::vector<Vertex> greedy_order(const Graph& g, bool fill) {
  const int n = g.size();
  std::vector<std::set<Vertex>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = g.neighbors(v);
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> order;
  for (int step = 0; step < n; ++step) {
    Vertex best = -1;
    long best_score = std::numeric_limits<long>::max();
    for (int v = 0; v < n; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      const auto& nb = adj[static_cast<std::size_t>(v)];
      long score = 0;
      if (fill) {
        for (auto i = nb.begin(); i != nb.end(); ++i)
          for (auto j = std::next(i); j != nb.end(); ++j)
            if (!adj[static_cast<std::size_t>(*i)].count(*j)) ++score;
      } else {
        score = static_cast<long>(nb.size());
      }
      if (score < best_score) { // strict: ties go to the lowest index
        best_score = score;
        best = v;
      }
    }
    const auto nb = adj[static_cast<std::size_t>(best)];
    for (auto i = nb.begin(); i != nb.end(); ++i)
      for (auto j = std::next(i); j != nb.end(); ++j) {
        adj[static_cast<std::size_t>(*i)].insert(*j);
        adj[static_cast<std::size_t>(*j)].insert(*i);
      }
    for (Vertex u : nb) adj[static_cast<std::size_t>(u)].erase(best);
    adj[static_cast<std::size_t>(best)].clear();
    gone[static_cast<std::size_t>(best)] = 1;
    order.push_back(best);
  }
  return order;
}

/// Branch and bound over elimination orders on graphs with at most 64
/// vertices. Vertex sets are bitmasks; the degree of v after eliminating S
/// is the number of vertices outside S reachable from v through S.
class ExactSearch {
public:
  explicit ExactSearch(const Graph& g) : n_(g.size()), adj_(static_cast<std::size_t>(g.size()), 0) {
    for (auto [u, v] : g.edges()) {
      adj_[static_cast<std::size_t>(u)] |= bit(v);
      adj_[static_cast<std::size_t>(v)] |= bit(u);
    }
    full_ = n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
  }

  /// Minimum width only; skips the search when the bounds meet.
  int min_width(int upper_bound_width) {
    int lo = std::max(degeneracy_lower_bound(), 0);
    int best = upper_bound_width;
    while (best > lo && feasible(best - 1)) --best;
    return best;
  }

  /// Minimum width, then the lexicographically least order attaining it.
  std::vector<Vertex> solve(int upper_bound_width) {
    int lo = std::max(degeneracy_lower_bound(), 0);
    int best = upper_bound_width;
    // Decrease the target until it becomes infeasible.
    while (best > lo && feasible(best - 1)) --best;
    std::vector<Vertex> order;
    failed_.clear();
    if (!find_order(0, best, order)) throw Error("internal: exact search lost its witness order");
    return order;
  }

private:
  static std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

  std::uint64_t eliminated_neighbourhood(std::uint64_t eliminated, int v) const {
    std::uint64_t seen = bit(v), frontier = bit(v), result = 0;
    while (frontier) {
      int x = __builtin_ctzll(frontier);
      frontier &= frontier - 1;
      std::uint64_t nb = adj_[static_cast<std::size_t>(x)] & ~seen;
      seen |= nb;
      result |= nb & ~eliminated;
      frontier |= nb & eliminated;
    }
    return result;
  }

  int degeneracy_lower_bound() const {
    // Minor-min-width style bound: repeatedly contract a min-degree vertex
    // into its min-degree neighbour.
    std::vector<std::uint64_t> adj = adj_;
    std::uint64_t alive = full_;
    int bound = 0;
    while (std::popcount(alive) > 1) {
      int v = -1, dv = 1 << 30;
      for (std::uint64_t a = alive; a; a &= a - 1) {
        int x = __builtin_ctzll(a);
        int d = std::popcount(adj[static_cast<std::size_t>(x)]);
        if (d < dv) {
          dv = d;
          v = x;
        }
      }
      bound = std::max(bound, dv);
      if (dv == 0) {
        alive &= ~bit(v);
        continue;
      }
      int u = -1, du = 1 << 30;
      for (std::uint64_t a = adj[static_cast<std::size_t>(v)]; a; a &= a - 1) {
        int x = __builtin_ctzll(a);
        int d = std::popcount(adj[static_cast<std::size_t>(x)]);
        if (d < du) {
          du = d;
          u = x;
        }
      }
      std::uint64_t merged = (adj[static_cast<std::size_t>(u)] | adj[static_cast<std::size_t>(v)]) & ~bit(u) & ~bit(v);
      for (std::uint64_t a = adj[static_cast<std::size_t>(v)]; a; a &= a - 1) {
        int x = __builtin_ctzll(a);
        adj[static_cast<std::size_t>(x)] &= ~bit(v);
      }
      adj[static_cast<std::size_t>(u)] = merged;
      for (std::uint64_t a = merged; a; a &= a - 1) adj[static_cast<std::size_t>(__builtin_ctzll(a))] |= bit(u);
      adj[static_cast<std::size_t>(v)] = 0;
      alive &= ~bit(v);
    }
    return bound;
  }

  bool feasible(int target) {
    failed_.clear();
    std::vector<Vertex> scratch;
    return find_order(0, target, scratch);
  }

  // Depth-first in increasing vertex order; the first success is the
  // lexicographically least order of width <= target.
  bool find_order(std::uint64_t eliminated, int target, std::vector<Vertex>& order) {
    if (eliminated == full_) return true;
    if (std::popcount(full_ & ~eliminated) <= target + 1) {
      for (std::uint64_t rest = full_ & ~eliminated; rest; rest &= rest - 1) order.push_back(__builtin_ctzll(rest));
      return true;
    }
    if (failed_.count(eliminated)) return false;
    for (std::uint64_t rest = full_ & ~eliminated; rest; rest &= rest - 1) {
      int v = __builtin_ctzll(rest);
      if (std::popcount(eliminated_neighbourhood(eliminated, v)) > target) continue;
      order.push_back(v);
      if (find_order(eliminated | bit(v), target, order)) return true;
      order.pop_back();
    }
    failed_.insert(eliminated);
    return false;
  }

  int n_;
  std::uint64_t full_ = 0;
  std::vector<std::uint64_t> adj_;
  std::unordered_set<std::uint64_t> failed_;
};

} // namespace detail

struct DecomposeOptions {
  Strategy strategy = Strategy::min_fill;
  int exact_cap = 32;
};

/// Elimination order used by `decompose`; exposed for tests.
inline std::vector<Vertex> elimination_order(const Graph& g, const DecomposeOptions& opt = {}) {
  switch (opt.strategy) {
  case Strategy::min_fill: return detail::greedy_order(g, true);
  case Strategy::min_degree: return detail::greedy_order(g, false);
  case Strategy::exact: {
    if (g.size() > opt.exact_cap || g.size() > 64)
      throw PreconditionError("exact decomposition refused: " + std::to_string(g.size()) +
                              " vertices exceeds cap " + std::to_string(std::min(opt.exact_cap, 64)));
    auto heuristic = detail::greedy_order(g, true);
    return detail::ExactSearch(g).solve(elimination_width(g, heuristic));
  }
  }
  return {};
}

inline TreeDecomposition decompose(const Graph& g, const DecomposeOptions& opt = {}) {
  return decomposition_from_order(g, elimination_order(g, opt));
}

inline TreeDecomposition decompose(const WeightedDigraph& g, const DecomposeOptions& opt = {}) {
  return decompose(underlying_graph(g), opt);
}

inline int treewidth_exact(const Graph& g, int cap = 32) {
  if (g.size() == 0) return -1;
  if (g.size() > cap || g.size() > 64)
    throw PreconditionError("exact treewidth refused: " + std::to_string(g.size()) + " vertices exceeds cap " +
                            std::to_string(std::min(cap, 64)));
  int upper = elimination_width(g, detail::greedy_order(g, true));
  return detail::ExactSearch(g).min_width(upper);
}

// ---------------------------------------------------------------------------
// Nice tree decompositions

enum class NodeKind { leaf, introduce, forget, join };

struct NiceNode {
  NodeKind kind = NodeKind::leaf;
  Vertex vertex = -1;          // introduced / forgotten vertex
  std::vector<int> children;   // 0 (leaf), 1 (introduce/forget) or 2 (join)
  Bag bag;
};

/// Rooted binary normal form. Nodes are stored children-first, so index
/// order is a valid bottom-up evaluation order and the root is last.
struct NiceTreeDecomposition {
  std::vector<NiceNode> nodes;

  int root() const { return static_cast<int>(nodes.size()) - 1; }

  int width() const {
    std::size_t w = 0;
    for (const auto& nd : nodes) w = std::max(w, nd.bag.size());
    return static_cast<int>(w) - 1;
  }

  TreeDecomposition as_tree_decomposition() const {
    TreeDecomposition t;
    for (const auto& nd : nodes) t.bags.push_back(nd.bag);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (int c : nodes[i].children) t.edges.emplace_back(static_cast<int>(i), c);
    return t;
  }
};

/// Checks the local normal-form rules; returns a description of the first
/// broken rule.
inline std::optional<std::string> check_nice(const NiceTreeDecomposition& nt) {
  if (nt.nodes.empty()) return "no nodes";
  if (!nt.nodes.back().bag.empty()) return "root bag is not empty";
  for (std::size_t i = 0; i < nt.nodes.size(); ++i) {
    const auto& nd = nt.nodes[i];
    for (int c : nd.children)
      if (c < 0 || static_cast<std::size_t>(c) >= i) return "child not stored before parent at node " + std::to_string(i);
    auto child_bag = [&](std::size_t k) -> const Bag& { return nt.nodes[static_cast<std::size_t>(nd.children[k])].bag; };
    switch (nd.kind) {
    case NodeKind::leaf:
      if (!nd.children.empty() || !nd.bag.empty()) return "leaf with children or nonempty bag";
      break;
    case NodeKind::introduce: {
      if (nd.children.size() != 1) return "introduce arity";
      Bag expect = child_bag(0);
      if (bag_contains(expect, nd.vertex)) return "introduce of present vertex";
      expect.insert(std::lower_bound(expect.begin(), expect.end(), nd.vertex), nd.vertex);
      if (expect != nd.bag) return "introduce bag mismatch at node " + std::to_string(i);
      break;
    }
    case NodeKind::forget: {
      if (nd.children.size() != 1) return "forget arity";
      Bag expect = child_bag(0);
      auto it = std::lower_bound(expect.begin(), expect.end(), nd.vertex);
      if (it == expect.end() || *it != nd.vertex) return "forget of absent vertex";
      expect.erase(it);
      if (expect != nd.bag) return "forget bag mismatch at node " + std::to_string(i);
      break;
    }
    case NodeKind::join:
      if (nd.children.size() != 2) return "join arity";
      if (child_bag(0) != nd.bag || child_bag(1) != nd.bag) return "join children bags differ at node " + std::to_string(i);
      break;
    }
  }
  return std::nullopt;
}

/// Converts a decomposition rooted at bag 0 into nice form. Children are
/// visited in increasing bag index; vertices are introduced and forgotten
/// in increasing order.
inline NiceTreeDecomposition make_nice(const TreeDecomposition& input, const Graph& g) {
  TreeDecomposition t = input;
  t.normalize();
  require_valid(t, g);
  NiceTreeDecomposition nt;
  auto push = [&](NiceNode nd) {
    nt.nodes.push_back(std::move(nd));
    return static_cast<int>(nt.nodes.size()) - 1;
  };
  if (t.bags.empty()) {
    push(NiceNode{});
    return nt;
  }
  auto adj = t.adjacency();

  auto change_bag = [&](int node, const Bag& target) {
    Bag cur = nt.nodes[static_cast<std::size_t>(node)].bag;
    for (Vertex v : Bag(cur)) {
      if (bag_contains(target, v)) continue;
      Bag next = cur;
      next.erase(std::find(next.begin(), next.end(), v));
      node = push(NiceNode{NodeKind::forget, v, {node}, next});
      cur = next;
    }
    for (Vertex v : target) {
      if (bag_contains(cur, v)) continue;
      Bag next = cur;
      next.insert(std::lower_bound(next.begin(), next.end(), v), v);
      node = push(NiceNode{NodeKind::introduce, v, {node}, next});
      cur = next;
    }
    return node;
  };

  // Iterative post-order to survive deep path decompositions.
  std::vector<int> result(t.bags.size(), -1), parent(t.bags.size(), -1);
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  parent[0] = 0;
  while (!stack.empty()) {
    auto& [b, next_child] = stack.back();
    const auto& nb = adj[static_cast<std::size_t>(b)];
    if (next_child < nb.size()) {
      int c = nb[next_child++];
      if (c == parent[static_cast<std::size_t>(b)] && b != 0) continue;
      if (parent[static_cast<std::size_t>(c)] != -1) continue;
      parent[static_cast<std::size_t>(c)] = b;
      stack.emplace_back(c, 0);
      continue;
    }
    const Bag& bag = t.bags[static_cast<std::size_t>(b)];
    int acc = -1;
    for (int c : nb) {
      if (parent[static_cast<std::size_t>(c)] != b || c == 0) continue;
      int sub = change_bag(result[static_cast<std::size_t>(c)], bag);
      acc = acc < 0 ? sub : push(NiceNode{NodeKind::join, -1, {acc, sub}, bag});
    }
    if (acc < 0) acc = change_bag(push(NiceNode{}), bag);
    result[static_cast<std::size_t>(b)] = acc;
    stack.pop_back();
  }
  change_bag(result[0], Bag{});
  return nt;
}

} // namespace twdet
