#include <gtest/gtest.h>

#include "support.hpp"
#include "twdet/hardness.hpp"
#include "twdet/linalg.hpp"
#include "twdet/oracle.hpp"

using namespace twdet;
using namespace twdet::testing;

TEST(Ord, SFirstDeterminantVanishes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_ord_instance(6 + static_cast<int>(seed % 7), true, seed);
    EXPECT_TRUE(inst.s_precedes_t);
    EXPECT_EQ(determinant(inst.graph.adjacency_matrix(), inst.td), 0);
  }
}

TEST(Ord, TFirstHasSingleCover) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int n = 6 + static_cast<int>(seed % 7);
    auto inst = gen_ord_instance(n, false, seed);
    EXPECT_FALSE(inst.s_precedes_t);
    auto h = cycle_cover_histogram(inst.graph, classes_by_value(inst.graph), inst.td);
    EXPECT_EQ(h.total(), 1);
    EXPECT_EQ(determinant(inst.graph.adjacency_matrix(), inst.td), n % 2 ? 1 : -1);
  }
}

TEST(Ord, LongerGapLeavesOneCover) {
  auto inst = gen_ord_instance(9, true, 3, 3);
  EXPECT_TRUE(inst.s_precedes_t);
  EXPECT_NE(determinant(inst.graph.adjacency_matrix(), inst.td), 0);
  EXPECT_EQ(oracle::det_bareiss(inst.graph.adjacency_matrix()), determinant(inst.graph.adjacency_matrix()));
}

TEST(Ord, StructureAndWidth) {
  auto inst = gen_ord_instance(6, true, 1);
  EXPECT_EQ(inst.graph.arc_count(), 5u - 2u + 5u);
  EXPECT_EQ(treewidth_exact(underlying_graph(inst.graph)), 2);
  EXPECT_EQ(treewidth_exact(underlying_graph(gen_ord_instance(6, false, 1).graph)), 3);
  EXPECT_TRUE(inst.path_graph.has_arc(inst.s_prev, inst.s));
  EXPECT_FALSE(inst.graph.has_arc(inst.s_prev, inst.s));
  EXPECT_TRUE(inst.graph.has_arc(inst.b, inst.t_next));
  EXPECT_THROW(gen_ord_instance(5, true, 0), PreconditionError);
}

TEST(Ord, Deterministic) {
  auto a = gen_ord_instance(12, false, 77), b = gen_ord_instance(12, false, 77);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.path, b.path);
}

TEST(Powering, ReachabilityFromResolvent) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = 2 + static_cast<int>(seed % 5);
    auto inst = gen_powering_instance(n, seed);
    RationalMatrix ip = inst.adjacency;
    for (std::size_t i = 0; i < ip.rows(); ++i) ip.add(i, i, 1);
    auto p = power_resolvent(ip, static_cast<unsigned>(n));
    EXPECT_EQ(p == oracle::power_direct(ip, static_cast<unsigned>(n)), true);
    EXPECT_EQ(p.at(static_cast<std::size_t>(inst.s), static_cast<std::size_t>(inst.t)) != 0, inst.reachable);
  }
}

TEST(Powering, TrivialCases) {
  auto inst = gen_powering_instance(4, 9);
  RationalMatrix ip = inst.adjacency;
  for (std::size_t i = 0; i < 4; ++i) ip.add(i, i, 1);
  auto p = oracle::power_direct(ip, 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_GE(p.at(i, i), 1);
}

TEST(Imm, SelfLoopSinglePath) {
  auto a = RationalMatrix::identity(1);
  for (unsigned m = 1; m <= 4; ++m) {
    auto w = gen_imm_gadget(a, m);
    EXPECT_EQ(imm_path_count(w, 0, 0, m), 1);
  }
}

TEST(Imm, WalkCountsMatchPowers) {
  Rng rng(31);
  for (int iter = 0; iter < 30; ++iter) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
    unsigned m = static_cast<unsigned>(uniform(rng, 1, 3));
    RationalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (uniform(rng, 0, 1)) a.set(i, j, 1);
    auto w = gen_imm_gadget(a, m);
    auto p = oracle::power_direct(a, m);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t)
        EXPECT_EQ(Rational(imm_path_count(w, static_cast<int>(s), static_cast<int>(t), m)), p.at(s, t));
  }
}

TEST(Imm, LayerProductCountsAllPaths) {
  // The plain product of the transfer matrices also counts paths that skip
  // crossings; for K_2 and m = 2 the (s,s) entry exceeds the walk count.
  RationalMatrix k2 = RationalMatrix::from_rows({{0, 1}, {1, 0}});
  auto w = gen_imm_gadget(k2, 2);
  RationalMatrix prod = RationalMatrix::identity(4);
  for (const auto& l : w.layers) prod = prod * l;
  EXPECT_EQ(imm_path_count(w, 0, 0, 2), 1);
  EXPECT_EQ(prod.at(2, 2), 2);
}

TEST(Imm, RejectsNonBinary) {
  EXPECT_THROW(gen_imm_gadget(RationalMatrix::from_rows({{2}}), 1), PreconditionError);
}
