#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/gadgets.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet {

/// Counts of cycle covers keyed by (cycle count k, per-class arc counts y).
struct CycleCoverHistogram {
  using Key = std::vector<int>; // [k, y_0, ..., y_{s-1}]

  int n = 0;
  int classes = 0;
  std::map<Key, Integer> entries;

  Integer total() const {
    Integer t = 0;
    for (const auto& [key, c] : entries) t += c;
    return t;
  }

  /// Counts grouped by (k, sum of y) = (|X|, |Y|).
  std::map<std::pair<int, int>, Integer> marginal() const {
    std::map<std::pair<int, int>, Integer> m;
    for (const auto& [key, c] : entries) {
      int arcs = 0;
      for (std::size_t i = 1; i < key.size(); ++i) arcs += key[i];
      m[{key[0], arcs}] += c;
    }
    return m;
  }

  friend bool operator==(const CycleCoverHistogram&, const CycleCoverHistogram&) = default;
};

/// Per-bag DP state. Position i of `code` describes the i-th vertex of the
/// (sorted) bag:
///   untouched  no chosen arc at the vertex yet
///   done       chosen in- and out-arc, not the end of an open path
///   start(j)   first vertex of an open path ending at position j; still
///              needs an incoming arc
///   end(j)     last vertex of an open path starting at position j; still
///              needs an outgoing arc
struct BagState {
  static constexpr std::int8_t untouched = -1;
  static constexpr std::int8_t done = -2;
  static constexpr std::int8_t start(int partner) { return static_cast<std::int8_t>(2 * partner); }
  static constexpr std::int8_t end(int partner) { return static_cast<std::int8_t>(2 * partner + 1); }
  static constexpr bool is_start(std::int8_t c) { return c >= 0 && (c & 1) == 0; }
  static constexpr bool is_end(std::int8_t c) { return c >= 0 && (c & 1) == 1; }
  static constexpr int partner(std::int8_t c) { return c >> 1; }

  std::vector<std::int8_t> code;

  /// Structural invariants: pairs are mutual and vertex-disjoint.
  bool well_formed() const {
    for (std::size_t i = 0; i < code.size(); ++i) {
      std::int8_t c = code[i];
      if (c == untouched || c == done) continue;
      if (c < 0) return false;
      auto j = static_cast<std::size_t>(partner(c));
      if (j >= code.size() || j == i) return false;
      std::int8_t back = code[j];
      if (is_start(c) && back != end(static_cast<int>(i))) return false;
      if (is_end(c) && back != start(static_cast<int>(i))) return false;
    }
    return true;
  }

  friend auto operator<=>(const BagState&, const BagState&) = default;
};

struct DpOptions {
  double budget = 1e8;
};

namespace detail {

using Cell = std::vector<int>;
using CellMap = std::map<Cell, Integer>;
using StateTable = std::map<std::vector<std::int8_t>, CellMap>;

inline void accumulate(CellMap& into, const Cell& key, const Integer& v) {
  auto [it, inserted] = into.try_emplace(key, v);
  if (!inserted) it->second += v;
}

inline void shift_partners_insert(std::vector<std::int8_t>& code, int at) {
  for (auto& c : code)
    if (c >= 0 && BagState::partner(c) >= at) c = static_cast<std::int8_t>(c + 2);
  code.insert(code.begin() + at, BagState::untouched);
}

inline void shift_partners_erase(std::vector<std::int8_t>& code, int at) {
  code.erase(code.begin() + at);
  for (auto& c : code)
    if (c >= 0 && BagState::partner(c) > at) c = static_cast<std::int8_t>(c - 2);
}

/// Adds arc x->y (bag positions) to a state. Returns false when the arc
/// cannot be chosen; sets `closed` when it completes a cycle.
inline bool add_arc(std::vector<std::int8_t>& code, int x, int y, bool& closed) {
  closed = false;
  std::int8_t cx = code[static_cast<std::size_t>(x)], cy = code[static_cast<std::size_t>(y)];
  if (x == y) {
    if (cx != BagState::untouched) return false;
    code[static_cast<std::size_t>(x)] = BagState::done;
    closed = true;
    return true;
  }
  bool x_free = cx == BagState::untouched || BagState::is_end(cx);
  bool y_free = cy == BagState::untouched || BagState::is_start(cy);
  if (!x_free || !y_free) return false;
  int s = cx == BagState::untouched ? x : BagState::partner(cx); // start of the path through x
  int e = cy == BagState::untouched ? y : BagState::partner(cy); // end of the path through y
  if (s == y) { // x ends the path that starts at y
    code[static_cast<std::size_t>(x)] = BagState::done;
    code[static_cast<std::size_t>(y)] = BagState::done;
    closed = true;
    return true;
  }
  if (s != x) code[static_cast<std::size_t>(x)] = BagState::done;
  if (e != y) code[static_cast<std::size_t>(y)] = BagState::done;
  code[static_cast<std::size_t>(s)] = BagState::start(e);
  code[static_cast<std::size_t>(e)] = BagState::end(s);
  return true;
}

/// Combines two partial solutions with disjoint processed arcs over the
/// same bag. Returns the number of cycles closed by the union, or -1.
inline int join_codes(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b,
                      std::vector<std::int8_t>& out) {
  const std::size_t m = a.size();
  int in[64], outd[64], seg[64];
  char seen[64];
  for (std::size_t i = 0; i < m; ++i) {
    auto deg = [](std::int8_t c, int& di, int& dout) {
      if (c == BagState::untouched) {
        di = 0, dout = 0;
      } else if (c == BagState::done) {
        di = 1, dout = 1;
      } else if (BagState::is_start(c)) {
        di = 0, dout = 1;
      } else {
        di = 1, dout = 0;
      }
    };
    int ai, ao, bi, bo;
    deg(a[i], ai, ao);
    deg(b[i], bi, bo);
    in[i] = ai + bi;
    outd[i] = ao + bo;
    if (in[i] > 1 || outd[i] > 1) return -1;
    seg[i] = -1;
    seen[i] = 0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (BagState::is_start(a[i])) seg[i] = BagState::partner(a[i]);
    if (BagState::is_start(b[i])) seg[i] = BagState::partner(b[i]);
  }
  out.assign(m, BagState::untouched);
  for (std::size_t i = 0; i < m; ++i)
    if (in[i] == 1 && outd[i] == 1) out[i] = BagState::done;
  for (std::size_t i = 0; i < m; ++i) {
    if (in[i] != 0 || outd[i] != 1) continue;
    int cur = static_cast<int>(i);
    seen[i] = 1;
    while (seg[static_cast<std::size_t>(cur)] >= 0) {
      cur = seg[static_cast<std::size_t>(cur)];
      seen[static_cast<std::size_t>(cur)] = 1;
    }
    out[i] = BagState::start(cur);
    out[static_cast<std::size_t>(cur)] = BagState::end(static_cast<int>(i));
  }
  int cycles = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i] || seg[i] < 0) continue;
    int cur = static_cast<int>(i);
    do {
      seen[static_cast<std::size_t>(cur)] = 1;
      cur = seg[static_cast<std::size_t>(cur)];
    } while (cur != static_cast<int>(i));
    ++cycles;
  }
  return cycles;
}

inline void include_arc(const StateTable& from, StateTable& into, int x, int y, int cls) {
  for (const auto& [code, cells] : from) {
    std::vector<std::int8_t> next = code;
    bool closed = false;
    if (!add_arc(next, x, y, closed)) continue;
    auto& target = into[next];
    for (const auto& [cell, count] : cells) {
      Cell c = cell;
      if (closed) ++c[0];
      ++c[static_cast<std::size_t>(cls) + 1];
      accumulate(target, c, count);
    }
  }
}

inline void merge_into(StateTable& into, StateTable&& from) {
  for (auto& [code, cells] : from) {
    auto& target = into[code];
    if (target.empty()) {
      target = std::move(cells);
      continue;
    }
    for (auto& [cell, count] : cells) accumulate(target, cell, count);
  }
}

} // namespace detail

/// State-space estimate: (w+1)! * 4^(w+1) bag codes times the number of
/// class-count tuples a partial cover can reach. The range of a class is
/// min(n, #arcs in it) + 1, the largest class is implied by the others, and
/// since a cover has n arcs the tuples are also bounded by C(n+s-1, s-1).
inline double dp_cost_estimate(const WeightedDigraph& g, const EdgeClassMap& classes, int width) {
  double bagfactor = 1;
  for (int i = 1; i <= width + 1; ++i) bagfactor *= i * 4.0;
  std::vector<long> sizes(static_cast<std::size_t>(classes.class_count()), 0);
  for (const auto& [a, c] : classes.arc_class) ++sizes[static_cast<std::size_t>(c)];
  std::sort(sizes.begin(), sizes.end());
  double ranges = 1;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    ranges *= static_cast<double>(std::min<long>(g.size(), sizes[i]) + 1);
  double compositions = 1;
  const int s = classes.class_count();
  for (int i = 1; i < s; ++i) compositions = compositions * (g.size() + i) / i;
  return bagfactor * std::min(ranges, compositions);
}

inline void check_budget(const WeightedDigraph& g, const EdgeClassMap& classes, int width, const DpOptions& opt) {
  double est = dp_cost_estimate(g, classes, width);
  if (est > opt.budget)
    throw BudgetExceeded("cycle-cover DP refused: width " + std::to_string(width) + " with " +
                         std::to_string(classes.class_count()) + " classes gives estimate " + std::to_string(est) +
                         " > budget " + std::to_string(opt.budget));
}

/// Number of cycle covers of `g` per (cycle count, class counts), by
/// dynamic programming over a nice decomposition of its underlying graph.
/// Arcs are chosen at the forget node of whichever endpoint is forgotten
/// first (a vertex is forgotten exactly once, introduced possibly several
/// times); a cycle is counted at the moment its last arc closes it.
inline CycleCoverHistogram cycle_cover_histogram(const WeightedDigraph& g, const EdgeClassMap& classes,
                                                 const NiceTreeDecomposition& nice, const DpOptions& opt = {}) {
  if (!consistent(classes, g)) throw PreconditionError("class map does not match the digraph");
  if (auto bad = check_nice(nice)) throw InvalidDecomposition("not a nice decomposition: " + *bad);
  require_valid(nice.as_tree_decomposition(), underlying_graph(g));
  if (nice.width() + 1 > 60) throw BudgetExceeded("bag too large for the state encoding");
  check_budget(g, classes, nice.width(), opt);

  const int s = classes.class_count();
  std::vector<std::vector<std::pair<Vertex, int>>> out_arcs(static_cast<std::size_t>(g.size())),
      in_arcs(static_cast<std::size_t>(g.size()));
  std::vector<int> loop_class(static_cast<std::size_t>(g.size()), -1);
  for (const auto& [a, c] : classes.arc_class) {
    if (a.first == a.second)
      loop_class[static_cast<std::size_t>(a.first)] = c;
    else {
      out_arcs[static_cast<std::size_t>(a.first)].emplace_back(a.second, c);
      in_arcs[static_cast<std::size_t>(a.second)].emplace_back(a.first, c);
    }
  }

  std::vector<std::optional<detail::StateTable>> tables(nice.nodes.size());
  for (std::size_t idx = 0; idx < nice.nodes.size(); ++idx) {
    const NiceNode& nd = nice.nodes[idx];
    detail::StateTable table;
    switch (nd.kind) {
    case NodeKind::leaf:
      table[{}][detail::Cell(static_cast<std::size_t>(s) + 1, 0)] = 1;
      break;
    case NodeKind::introduce: {
      auto child = std::move(*tables[static_cast<std::size_t>(nd.children[0])]);
      tables[static_cast<std::size_t>(nd.children[0])].reset();
      int at = static_cast<int>(std::lower_bound(nd.bag.begin(), nd.bag.end(), nd.vertex) - nd.bag.begin());
      for (auto& [code, cells] : child) {
        std::vector<std::int8_t> next = code;
        detail::shift_partners_insert(next, at);
        table[next] = std::move(cells);
      }
      break;
    }
    case NodeKind::forget: {
      auto cur = std::move(*tables[static_cast<std::size_t>(nd.children[0])]);
      tables[static_cast<std::size_t>(nd.children[0])].reset();
      const Bag& cbag = nice.nodes[static_cast<std::size_t>(nd.children[0])].bag;
      auto pos = [&](Vertex v) {
        return static_cast<int>(std::lower_bound(cbag.begin(), cbag.end(), v) - cbag.begin());
      };
      int at = pos(nd.vertex);
      auto process = [&](int x, int y, int cls) {
        detail::StateTable with;
        detail::include_arc(cur, with, x, y, cls);
        detail::merge_into(cur, std::move(with));
      };
      if (int lc = loop_class[static_cast<std::size_t>(nd.vertex)]; lc >= 0) process(at, at, lc);
      for (const auto& [w, c] : out_arcs[static_cast<std::size_t>(nd.vertex)])
        if (bag_contains(nd.bag, w)) process(at, pos(w), c);
      for (const auto& [w, c] : in_arcs[static_cast<std::size_t>(nd.vertex)])
        if (bag_contains(nd.bag, w)) process(pos(w), at, c);
      for (auto& [code, cells] : cur) {
        if (code[static_cast<std::size_t>(at)] != BagState::done) continue;
        std::vector<std::int8_t> next = code;
        detail::shift_partners_erase(next, at);
        auto& target = table[next];
        for (auto& [cell, count] : cells) detail::accumulate(target, cell, count);
      }
      break;
    }
    case NodeKind::join: {
      auto left = std::move(*tables[static_cast<std::size_t>(nd.children[0])]);
      auto right = std::move(*tables[static_cast<std::size_t>(nd.children[1])]);
      tables[static_cast<std::size_t>(nd.children[0])].reset();
      tables[static_cast<std::size_t>(nd.children[1])].reset();
      std::vector<std::int8_t> joined;
      for (const auto& [ca, ha] : left)
        for (const auto& [cb, hb] : right) {
          int cycles = detail::join_codes(ca, cb, joined);
          if (cycles < 0) continue;
          auto& target = table[joined];
          for (const auto& [ka, va] : ha)
            for (const auto& [kb, vb] : hb) {
              detail::Cell c(ka.size());
              for (std::size_t i = 0; i < c.size(); ++i) c[i] = ka[i] + kb[i];
              c[0] += cycles;
              detail::accumulate(target, c, va * vb);
            }
        }
      break;
    }
    }
    // Drop states whose histograms vanished (never negative, but joins and
    // forgets may leave empty maps behind).
    for (auto it = table.begin(); it != table.end();) it = it->second.empty() ? table.erase(it) : std::next(it);
    tables[idx] = std::move(table);
  }

  CycleCoverHistogram h;
  h.n = g.size();
  h.classes = s;
  auto& root = *tables.back();
  auto it = root.find({});
  if (it != root.end())
    for (auto& [cell, count] : it->second)
      if (count != 0) h.entries.emplace(cell, count);
  return h;
}

inline CycleCoverHistogram cycle_cover_histogram(const WeightedDigraph& g, const EdgeClassMap& classes,
                                                 const TreeDecomposition& t, const DpOptions& opt = {}) {
  return cycle_cover_histogram(g, classes, make_nice(t, underlying_graph(g)), opt);
}

/// Sum over entries of (-1)^(n+k) * count * prod c_i^(y_i).
inline Rational signed_sum(const CycleCoverHistogram& h, const EdgeClassMap& classes) {
  if (classes.symbolic()) throw PreconditionError("signed_sum needs concrete class values (x-loop class present)");
  if (classes.class_count() != h.classes) throw PreconditionError("class map does not match histogram");
  Rational total = 0;
  for (const auto& [key, count] : h.entries) {
    Rational term = Rational(count);
    for (int i = 0; i < h.classes; ++i)
      term *= pow(classes.values[static_cast<std::size_t>(i)], static_cast<unsigned>(key[static_cast<std::size_t>(i) + 1]));
    if ((h.n + key[0]) % 2) term = -term;
    total += term;
  }
  return total;
}

} // namespace twdet
