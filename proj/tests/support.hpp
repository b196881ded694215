#pragma once

// Shared random instance generators for the test binaries.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "twdet/ccdp.hpp"
#include "twdet/core.hpp"
#include "twdet/gadgets.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random partial k-tree on n vertices together with the decomposition
/// that comes from its construction. Each edge of the underlying k-tree is
/// kept with probability `keep`.
struct PartialKTree {
  Graph graph;
  TreeDecomposition td;
};

inline PartialKTree random_partial_ktree(int n, int k, double keep, Rng& rng) {
  PartialKTree out{Graph(n), {}};
  if (n == 0) return out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(keep);
  const int base = std::min(n, k + 1);
  Bag first(perm.begin(), perm.begin() + base);
  std::sort(first.begin(), first.end());
  for (int i = 0; i < base; ++i)
    for (int j = i + 1; j < base; ++j)
      if (coin(rng)) out.graph.add_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  out.td.bags.push_back(first);
  // each new vertex attaches to (at most) k vertices of a random existing bag
  for (int i = base; i < n; ++i) {
    int parent = uniform(rng, 0, static_cast<int>(out.td.bags.size()) - 1);
    Bag pb = out.td.bags[static_cast<std::size_t>(parent)];
    if (static_cast<int>(pb.size()) > k) pb.erase(pb.begin() + uniform(rng, 0, static_cast<int>(pb.size()) - 1));
    Vertex v = perm[static_cast<std::size_t>(i)];
    for (Vertex u : pb)
      if (coin(rng)) out.graph.add_edge(u, v);
    pb.push_back(v);
    std::sort(pb.begin(), pb.end());
    out.td.bags.push_back(pb);
    out.td.edges.emplace_back(parent, static_cast<int>(out.td.bags.size()) - 1);
  }
  return out;
}

/// Orients each undirected edge randomly (one way, other way, or both) and
/// adds self-loops with probability `loops`.
inline WeightedDigraph random_orientation(const Graph& g, double loops, Rng& rng) {
  WeightedDigraph d(g.size());
  for (auto [u, v] : g.edges()) {
    int how = uniform(rng, 0, 2);
    if (how != 1) d.set_arc(u, v, 1);
    if (how != 0) d.set_arc(v, u, 1);
  }
  std::bernoulli_distribution coin(loops);
  for (int v = 0; v < g.size(); ++v)
    if (coin(rng)) d.set_arc(v, v, 1);
  return d;
}

/// Matrix whose nonzero pattern is `d` with entries drawn from [lo, hi]
/// minus zero.
inline RationalMatrix random_entries(const WeightedDigraph& d, int lo, int hi, Rng& rng) {
  RationalMatrix m(static_cast<std::size_t>(d.size()), static_cast<std::size_t>(d.size()));
  for (const auto& [a, w] : d.arcs()) {
    int x = 0;
    while (x == 0) x = uniform(rng, lo, hi);
    m.set(static_cast<std::size_t>(a.first), static_cast<std::size_t>(a.second), x);
  }
  return m;
}

inline WeightedDigraph to_digraph(const RationalMatrix& m) { return support_digraph(m); }

/// Histogram by enumerating permutations supported on the arcs.
inline CycleCoverHistogram brute_histogram(const WeightedDigraph& g, const EdgeClassMap& classes) {
  CycleCoverHistogram h;
  h.n = g.size();
  h.classes = classes.class_count();
  std::vector<int> perm(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) perm[static_cast<std::size_t>(i)] = i;
  do {
    std::vector<int> key(static_cast<std::size_t>(h.classes) + 1, 0);
    bool ok = true;
    for (int i = 0; i < g.size() && ok; ++i) {
      if (!g.has_arc(i, perm[static_cast<std::size_t>(i)])) ok = false;
      else ++key[static_cast<std::size_t>(classes.class_of(i, perm[static_cast<std::size_t>(i)])) + 1];
    }
    if (!ok) continue;
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (seen[i]) continue;
      ++key[0];
      for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) seen[j] = 1;
    }
    h.entries[key] += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return h;
}

} // namespace twdet::testing
