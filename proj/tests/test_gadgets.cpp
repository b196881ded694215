#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "twdet/ccdp.hpp"
#include "twdet/gadgets.hpp"
#include "twdet/linalg.hpp"
#include "twdet/oracle.hpp"

using namespace twdet;
using namespace twdet::testing;

namespace {

GadgetExpansion expand(const RationalMatrix& a) {
  auto g = support_digraph(a);
  return expand_weights(g, decompose(g));
}

void expect_well_formed(const GadgetExpansion& e, const WeightedDigraph& g) {
  for (const auto& [arc, w] : e.graph.arcs()) EXPECT_EQ(w, 1);
  EXPECT_FALSE(validate(e.td, underlying_graph(e.graph)).has_value());
  // every new vertex belongs to exactly one gadget and carries a self-loop
  std::multiset<Vertex> owned;
  for (const auto& [arc, rec] : e.gadgets) {
    EXPECT_TRUE(g.has_arc(arc.first, arc.second));
    EXPECT_EQ(rec.weight, g.weight(arc.first, arc.second));
    for (Vertex v : rec.internal) owned.insert(v);
  }
  EXPECT_EQ(owned.size(), static_cast<std::size_t>(e.graph.size() - e.original_vertices));
  for (Vertex v = e.original_vertices; v < e.graph.size(); ++v) {
    EXPECT_EQ(owned.count(v), 1u);
    EXPECT_TRUE(e.graph.has_arc(v, v));
  }
}

} // namespace

TEST(Gadgets, UnitArcIsKept) {
  auto a = RationalMatrix::from_rows({{0, 1}, {1, 0}});
  auto e = expand(a);
  EXPECT_TRUE(e.gadgets.empty());
  EXPECT_EQ(e.graph, support_digraph(a));
}

TEST(Gadgets, SpecTwoByTwo) {
  auto a = RationalMatrix::from_rows({{0, 3}, {1, 0}});
  auto e = expand(a);
  EXPECT_EQ(oracle::det_bareiss(a), -3);
  EXPECT_EQ(oracle::det_bareiss(e.graph.adjacency_matrix()), -3);
  expect_well_formed(e, support_digraph(a));
}

TEST(Gadgets, MinusOneFlipsSignOnce) {
  auto a = RationalMatrix::from_rows({{0, -1}, {1, 0}});
  auto e = expand(a);
  ASSERT_EQ(e.gadgets.size(), 1u);
  const auto& rec = e.gadgets.begin()->second;
  EXPECT_GE(rec.sign_flip, 0);
  EXPECT_EQ(rec.path_internal, 1);
  // brute force over the expanded graph: the signed cover sum is det(A)
  auto wg = e.graph;
  auto h = brute_histogram(wg, unit_classes(wg));
  EXPECT_EQ(signed_sum(h, unit_classes(wg)), 1);
}

TEST(Gadgets, PathLengthsAreEven) {
  auto a = RationalMatrix::from_rows({{5, 12}, {-7, 2}});
  auto e = expand(a);
  for (const auto& [arc, rec] : e.gadgets) {
    bool neg = rec.weight < 0;
    if (abs(numerator_of(rec.weight)) == 1) continue;
    EXPECT_EQ((rec.path_internal - (neg ? 1 : 0)) % 2, 0);
  }
  EXPECT_EQ(oracle::det_bareiss(e.graph.adjacency_matrix()), oracle::det_bareiss(a));
}

TEST(Gadgets, NonIntegerRejected) {
  WeightedDigraph g(1);
  g.set_arc(0, 0, Rational(1, 2));
  EXPECT_THROW(expand_weights(g, decompose(g)), PreconditionError);
}

TEST(GadgetsProperty, DeterminantPreserved) {
  Rng rng(61);
  for (int iter = 0; iter < 80; ++iter) {
    auto pk = random_partial_ktree(uniform(rng, 1, 5), uniform(rng, 1, 3), 0.7, rng);
    auto a = random_entries(random_orientation(pk.graph, 0.6, rng), -15, 15, rng);
    auto g = support_digraph(a);
    auto e = expand_weights(g, pk.td);
    expect_well_formed(e, g);
    auto classes = unit_classes(e.graph);
    auto h = cycle_cover_histogram(e.graph, classes, e.td);
    EXPECT_EQ(signed_sum(h, classes), oracle::det_bareiss(a)) << iter;
    EXPECT_LE(e.td.width(), std::max(pk.td.width(), 1) + 2);
  }
}

TEST(GadgetsProperty, SmallExpansionsMatchBareiss) {
  Rng rng(62);
  for (int iter = 0; iter < 40; ++iter) {
    auto pk = random_partial_ktree(uniform(rng, 1, 4), 2, 0.7, rng);
    auto a = random_entries(random_orientation(pk.graph, 0.5, rng), -4, 4, rng);
    auto e = expand_weights(support_digraph(a), pk.td);
    EXPECT_EQ(oracle::det_bareiss(e.graph.adjacency_matrix()), oracle::det_bareiss(a)) << iter;
  }
}

TEST(CharPolyGraph, SpecExamples) {
  auto zero = charpoly_graph(RationalMatrix(3, 3));
  EXPECT_EQ(zero.graph.size(), 3);
  EXPECT_EQ(zero.graph.arc_count(), 3u);
  EXPECT_EQ(char_poly(RationalMatrix(3, 3)).coefficients, (std::vector<Rational>{0, 0, 0, 1}));

  auto id = charpoly_graph(RationalMatrix::identity(2));
  EXPECT_EQ(id.diagonal_detour.size(), 2u);
  EXPECT_TRUE(consistent(id.classes, id.graph));
  for (Vertex v = 0; v < 2; ++v) EXPECT_EQ(id.classes.class_of(v, v), *id.classes.x_class);
  EXPECT_EQ(char_poly(RationalMatrix::identity(2)).coefficients, (std::vector<Rational>{1, -2, 1}));

  auto swap = RationalMatrix::from_rows({{0, 1}, {1, 0}});
  EXPECT_EQ(char_poly(swap).coefficients, oracle::charpoly_interpolation(swap));
}

TEST(Classes, ByValue) {
  WeightedDigraph g(3);
  g.set_arc(0, 1, 2);
  g.set_arc(1, 2, 2);
  g.set_arc(2, 0, Rational(-1, 3));
  auto c = classes_by_value(g);
  EXPECT_EQ(c.class_count(), 2);
  EXPECT_EQ(distinct_weight_count(g), 2u);
  EXPECT_TRUE(consistent(c, g));
  EXPECT_EQ(c.class_of(0, 1), c.class_of(1, 2));
  EXPECT_THROW(c.class_of(1, 0), PreconditionError);
}
