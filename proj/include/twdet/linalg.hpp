#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twdet/ccdp.hpp"
#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/gadgets.hpp"
#include "twdet/rational.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet {

/// How the weights reached the cycle-cover DP.
enum class Route {
  value_classes,   // one histogram dimension per distinct entry value
  weight_gadgets,  // integer weights expanded into {0,1} gadgets
};

inline std::string to_string(Route r) { return r == Route::value_classes ? "value-classes" : "weight-gadgets"; }

struct LinalgOptions {
  std::size_t class_threshold = 6; // max distinct values for the class route
  DpOptions dp;
};

struct DeterminantResult {
  Rational value;
  Route route = Route::value_classes;
  int width = 0; // width of the decomposition the DP ran on
};

namespace detail {

/// Multiplies each row by the lcm of its denominators. Returns the integer
/// matrix and the product of the multipliers.
inline std::pair<RationalMatrix, Integer> scale_rows(const RationalMatrix& a) {
  std::vector<Integer> l(a.rows(), 1);
  for (const auto& [ij, v] : a.entries()) l[ij.first] = twdet::lcm(l[ij.first], denominator_of(v));
  RationalMatrix b(a.rows(), a.cols());
  Integer prod = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) prod *= l[i];
  for (const auto& [ij, v] : a.entries()) b.set(ij.first, ij.second, v * l[ij.first]);
  return {b, prod};
}

inline bool class_route_fits(const WeightedDigraph& g, const EdgeClassMap& c, int width, const LinalgOptions& opt) {
  return static_cast<std::size_t>(c.class_count()) <= opt.class_threshold &&
         dp_cost_estimate(g, c, width) <= opt.dp.budget;
}

/// Determinant of an integer matrix given a valid decomposition of its
/// support.
inline DeterminantResult integer_determinant(const RationalMatrix& a, const TreeDecomposition& t,
                                             const LinalgOptions& opt) {
  WeightedDigraph g = support_digraph(a);
  EdgeClassMap c = classes_by_value(g);
  DeterminantResult r;
  if (class_route_fits(g, c, t.width(), opt)) {
    r.route = Route::value_classes;
    r.width = std::max(t.width(), 0);
    r.value = signed_sum(cycle_cover_histogram(g, c, t, opt.dp), c);
    return r;
  }
  GadgetExpansion ex = expand_weights(g, t);
  EdgeClassMap unit = unit_classes(ex.graph);
  r.route = Route::weight_gadgets;
  r.width = ex.td.width();
  r.value = signed_sum(cycle_cover_histogram(ex.graph, unit, ex.td, opt.dp), unit);
  return r;
}

inline TreeDecomposition checked_decomposition(const RationalMatrix& a, const std::optional<TreeDecomposition>& t) {
  Graph ug = underlying_graph(support_digraph(a));
  if (!t) return decompose(ug);
  TreeDecomposition td = *t;
  td.normalize();
  require_valid(td, ug);
  return td;
}

} // namespace detail

/// Exact determinant via the signed cycle-cover histogram. Rows are scaled
/// to integers first (this keeps the support, hence the decomposition).
inline DeterminantResult determinant_report(const RationalMatrix& a, const std::optional<TreeDecomposition>& t = {},
                                            const LinalgOptions& opt = {}) {
  if (!a.square()) throw PreconditionError("determinant needs a square matrix");
  TreeDecomposition td = detail::checked_decomposition(a, t);
  auto [b, scale] = detail::scale_rows(a);
  DeterminantResult r = detail::integer_determinant(b, td, opt);
  r.value /= scale;
  return r;
}

inline Rational determinant(const RationalMatrix& a, const std::optional<TreeDecomposition>& t = {},
                            const LinalgOptions& opt = {}) {
  return determinant_report(a, t, opt).value;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial

/// Coefficients c_0..c_n of det(xI - A).
struct CharPolynomial {
  std::vector<Rational> coefficients;
  Route route = Route::value_classes;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  friend bool operator==(const CharPolynomial& a, const CharPolynomial& b) { return a.coefficients == b.coefficients; }
};

namespace detail {

/// Reads det(xI - A) off a histogram whose class `x` counts x-loops:
/// the coefficient of x^r collects the cells with r x-loops.
inline std::vector<Rational> assemble_charpoly(const CycleCoverHistogram& h, const EdgeClassMap& c, int n) {
  std::vector<Rational> coeffs(static_cast<std::size_t>(n) + 1, 0);
  const int x = *c.x_class;
  for (const auto& [key, count] : h.entries) {
    Rational term = Rational(count);
    for (int i = 0; i < h.classes; ++i)
      if (i != x) term *= pow(c.values[static_cast<std::size_t>(i)], static_cast<unsigned>(key[static_cast<std::size_t>(i) + 1]));
    if ((h.n + key[0]) % 2) term = -term;
    coeffs[static_cast<std::size_t>(key[static_cast<std::size_t>(x) + 1])] += term;
  }
  return coeffs;
}

inline CharPolynomial integer_charpoly(const RationalMatrix& a, const TreeDecomposition& t, const LinalgOptions& opt) {
  const int n = static_cast<int>(a.rows());
  CharPolyGraph cg = charpoly_graph(a);
  TreeDecomposition td = charpoly_decomposition(cg, t);
  CharPolynomial out;
  // the x class is not a value, so it does not count against the threshold
  LinalgOptions relaxed = opt;
  relaxed.class_threshold = opt.class_threshold + 1;
  if (class_route_fits(cg.graph, cg.classes, td.width(), relaxed)) {
    out.route = Route::value_classes;
    out.coefficients = assemble_charpoly(cycle_cover_histogram(cg.graph, cg.classes, td, opt.dp), cg.classes, n);
    return out;
  }
  // Gadget fallback: expand the valued arcs, then put the x-loops back.
  WeightedDigraph valued = cg.graph;
  for (Vertex v = 0; v < n; ++v) valued.set_arc(v, v, 0);
  GadgetExpansion ex = expand_weights(valued, td);
  EdgeClassMap classes = unit_classes(ex.graph);
  classes.x_class = 1;
  classes.values.push_back(Rational(0));
  for (Vertex v = 0; v < n; ++v) {
    ex.graph.set_arc(v, v, 1);
    classes.arc_class[{v, v}] = 1;
  }
  out.route = Route::weight_gadgets;
  out.coefficients = assemble_charpoly(cycle_cover_histogram(ex.graph, classes, ex.td, opt.dp), classes, n);
  return out;
}

} // namespace detail

/// det(xI - A). A rational A is scaled by the lcm L of all denominators:
/// c_r(A) = c_r(LA) * L^(r-n).
inline CharPolynomial char_poly(const RationalMatrix& a, const std::optional<TreeDecomposition>& t = {},
                                const LinalgOptions& opt = {}) {
  if (!a.square()) throw PreconditionError("char_poly needs a square matrix");
  TreeDecomposition td = detail::checked_decomposition(a, t);
  Integer l = 1;
  for (const auto& [ij, v] : a.entries()) l = twdet::lcm(l, denominator_of(v));
  RationalMatrix b(a.rows(), a.cols());
  for (const auto& [ij, v] : a.entries()) b.set(ij.first, ij.second, v * l);
  CharPolynomial cp = detail::integer_charpoly(b, td, opt);
  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r) cp.coefficients[r] /= pow(Rational(l), static_cast<unsigned>(n - r));
  return cp;
}

// ---------------------------------------------------------------------------
// Rank and feasibility

namespace detail {
inline std::size_t lowest_nonzero(const std::vector<Rational>& c) {
  std::size_t r = 0;
  while (r < c.size() && c[r] == 0) ++r;
  return r;
}
} // namespace detail

/// Rank through the symmetric embedding B = [[0, A], [A^T, 0]]: B is
/// symmetric, so its rank is dim(B) minus the multiplicity of the root 0
/// of its characteristic polynomial, and rank(B) = 2 rank(A).
inline std::size_t rank(const RationalMatrix& a, const LinalgOptions& opt = {}) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  RationalMatrix b = symmetric_embedding(a);
  CharPolynomial cp = char_poly(b, std::nullopt, opt);
  std::size_t rank_b = b.rows() - detail::lowest_nonzero(cp.coefficients);
  return rank_b / 2;
}

/// n minus the lowest power of x in det(xI - A). Equals the rank only for
/// diagonalizable A (it undercounts nilpotent parts); kept as a diagnostic.
inline std::size_t rank_from_charpoly_unchecked(const RationalMatrix& a, const LinalgOptions& opt = {}) {
  if (!a.square()) throw PreconditionError("rank_from_charpoly_unchecked needs a square matrix");
  CharPolynomial cp = char_poly(a, std::nullopt, opt);
  return a.rows() - detail::lowest_nonzero(cp.coefficients);
}

struct FsleInstance {
  RationalMatrix a;
  std::vector<Rational> b;
};

/// Az = b has a rational solution iff rank(A) = rank([A : b]).
inline bool fsle(const FsleInstance& inst, const LinalgOptions& opt = {}) {
  if (inst.b.size() != inst.a.rows()) throw PreconditionError("right-hand side length does not match row count");
  RationalMatrix aug(inst.a.rows(), inst.a.cols() + 1);
  for (const auto& [ij, v] : inst.a.entries()) aug.set(ij.first, ij.second, v);
  for (std::size_t i = 0; i < inst.b.size(); ++i) aug.set(i, inst.a.cols(), inst.b[i]);
  return rank(inst.a, opt) == rank(aug, opt);
}

// ---------------------------------------------------------------------------
// Inverse

namespace detail {

/// Matrix and decomposition for the cofactor C_ij. For i == j this is the
/// principal minor. For i != j, columns i and j are swapped and vertex i
/// is deleted; the swap moves the in-arcs of i onto j, so j is added to
/// every bag. Returns the sign relating det(minor) to C_ij.
inline int cofactor_instance(const RationalMatrix& a, const TreeDecomposition& t, std::size_t i, std::size_t j,
                             RationalMatrix& minor, TreeDecomposition& td) {
  const std::size_t n = a.rows();
  auto index = [&](std::size_t v) { return v < i ? v : v - 1; };
  minor = RationalMatrix(n - 1, n - 1);
  for (const auto& [rc, v] : a.entries()) {
    std::size_t r = rc.first;
    std::size_t c = rc.second;
    if (c == i)
      c = j;
    else if (c == j)
      c = i;
    if (r == i || c == i) continue;
    minor.set(index(r), index(c), v);
  }
  td = t;
  for (auto& bag : td.bags) {
    Bag nb;
    for (Vertex v : bag)
      if (static_cast<std::size_t>(v) != i) nb.push_back(static_cast<Vertex>(index(static_cast<std::size_t>(v))));
    if (i != j) nb.push_back(static_cast<Vertex>(index(j)));
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    bag = std::move(nb);
  }
  // Moving column i of A to position j past |i-j|-1 columns gives
  // det(minor) = (-1)^(|i-j|-1) det(A_ij), hence C_ij = -det(minor).
  return i == j ? 1 : -1;
}

} // namespace detail

/// A^{-1} = C^T / det(A), each cofactor computed by the cycle-cover
/// pipeline on a patched decomposition.
inline RationalMatrix inverse(const RationalMatrix& a, const std::optional<TreeDecomposition>& t = {},
                              const LinalgOptions& opt = {}) {
  if (!a.square()) throw PreconditionError("inverse needs a square matrix");
  TreeDecomposition td = detail::checked_decomposition(a, t);
  Rational d = determinant(a, td, opt);
  if (d == 0) throw PreconditionError("matrix is singular");
  const std::size_t n = a.rows();
  RationalMatrix inv(n, n);
  if (n == 1) {
    inv.set(0, 0, 1 / d);
    return inv;
  }
  RationalMatrix minor;
  TreeDecomposition mtd;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int sign = detail::cofactor_instance(a, td, i, j, minor, mtd);
      Rational c = determinant(minor, mtd, opt);
      if (sign < 0) c = -c;
      inv.set(j, i, c / d);
    }
  return inv;
}

// ---------------------------------------------------------------------------
// Powering through the resolvent

/// Parameters for reading A^m off 2^p (2^p I - A)^{-1} = sum_j 2^{-pj} A^j.
/// After multiplying by 2^{pm}, A^j occupies bits [p(m-j), p(m-j+1)).
struct PowerPlan {
  unsigned p = 1;                    // t = 2^-p
  unsigned order = 0;                // m
  std::vector<unsigned> offsets;     // offsets[j]: lowest bit of the A^j window
  Integer norm_bound = 0;            // n * max entry; entries of A^j <= bound^j
};

inline PowerPlan make_power_plan(const RationalMatrix& a, unsigned m) {
  Integer maxe = 0;
  for (const auto& [ij, v] : a.entries()) {
    if (!is_integer(v) || v < 0) throw PreconditionError("power_resolvent needs nonnegative integer entries");
    maxe = std::max(maxe, numerator_of(v));
  }
  PowerPlan plan;
  plan.order = m;
  plan.norm_bound = maxe * static_cast<long>(a.rows());
  // 2^p > bound^(m+1) * 2 keeps every window below 2^p and the tail
  // beyond A^m below one unit.
  unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(Integer(plan.norm_bound + 1))) + 1;
  plan.p = (m + 1) * bits + 1;
  for (unsigned j = 0; j <= m; ++j) plan.offsets.push_back(plan.p * (m - j));
  return plan;
}

inline RationalMatrix power_resolvent(const RationalMatrix& a, unsigned m, const std::optional<PowerPlan>& given = {},
                                      const LinalgOptions& opt = {}) {
  if (!a.square()) throw PreconditionError("power_resolvent needs a square matrix");
  PowerPlan plan = given ? *given : make_power_plan(a, m);
  PowerPlan needed = make_power_plan(a, m);
  if (plan.p < needed.p || plan.order != m) throw PreconditionError("power plan too small for this matrix");
  const std::size_t n = a.rows();
  Integer two_p = Integer(1) << plan.p;
  RationalMatrix shifted(n, n);
  for (const auto& [ij, v] : a.entries()) shifted.set(ij.first, ij.second, -v);
  for (std::size_t i = 0; i < n; ++i) shifted.add(i, i, Rational(two_p));
  LinalgOptions wide = opt;
  wide.class_threshold = std::max<std::size_t>(opt.class_threshold, 8);
  RationalMatrix r = inverse(shifted, std::nullopt, wide);
  Integer lift = Integer(1) << (plan.p * (m + 1)); // 2^p from the resolvent, 2^{pm} to align A^m
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational scaled = r.at(i, j) * lift;
      Integer whole = numerator_of(scaled) / denominator_of(scaled);
      out.set(i, j, Rational(whole % two_p));
    }
  return out;
}

} // namespace twdet
