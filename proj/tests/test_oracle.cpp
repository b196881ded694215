#include <gtest/gtest.h>

#include "support.hpp"
#include "twdet/oracle.hpp"

using namespace twdet;
using namespace twdet::testing;

namespace {

RationalMatrix mat(std::vector<std::vector<Rational>> rows) { return RationalMatrix::from_rows(rows); }

WeightedDigraph cycle(int n) {
  WeightedDigraph g(n);
  for (int i = 0; i < n; ++i) g.set_arc(i, (i + 1) % n, 1);
  return g;
}

WeightedDigraph bidirected_triangle() {
  WeightedDigraph g(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) g.set_arc(i, j, 1);
  return g;
}

} // namespace

TEST(Bareiss, SpecExamples) {
  for (std::size_t n : {1u, 3u, 7u}) EXPECT_EQ(oracle::det_bareiss(RationalMatrix::identity(n)), 1);
  EXPECT_EQ(oracle::det_bareiss(mat({{2, 1}, {1, 1}})), 1);
  EXPECT_EQ(oracle::det_bareiss(mat({{1, 2, 3}, {2, 4, 6}, {-1, -2, -3}})), 0);
  EXPECT_EQ(oracle::det_bareiss(RationalMatrix(0, 0)), 1);
}

TEST(Bareiss, NeedsPivotSearch) {
  EXPECT_EQ(oracle::det_bareiss(mat({{0, 1}, {1, 0}})), -1);
  EXPECT_EQ(oracle::det_bareiss(mat({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})), -1);
}

TEST(BareissProperty, AgreesWithLaplace) {
  Rng rng(71);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 5));
    RationalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (uniform(rng, 0, 2)) a.set(i, j, Rational(uniform(rng, -9, 9), uniform(rng, 1, 5)));
    EXPECT_EQ(oracle::det_bareiss(a), oracle::det_laplace(a)) << iter;
  }
}

TEST(PowerDirect, SpecExamples) {
  auto a = mat({{1, 2}, {3, 4}});
  EXPECT_EQ(oracle::power_direct(a, 0), RationalMatrix::identity(2));
  EXPECT_EQ(oracle::power_direct(a, 1), a);
  auto p = mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  EXPECT_EQ(oracle::power_direct(p, 3), RationalMatrix::identity(3));
}

TEST(RankElimination, SpecExamples) {
  EXPECT_EQ(oracle::rank_elimination(RationalMatrix::identity(3)), 3u);
  EXPECT_EQ(oracle::rank_elimination(mat({{0, 1}, {0, 0}})), 1u);
}

TEST(RankEliminationProperty, LowRankProducts) {
  Rng rng(72);
  for (int iter = 0; iter < 50; ++iter) {
    std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 3));
    std::size_t m = static_cast<std::size_t>(uniform(rng, r, 6)), n = static_cast<std::size_t>(uniform(rng, r, 6));
    RationalMatrix u(m, r), v(r, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < r; ++k) u.set(i, k, uniform(rng, -5, 5));
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t j = 0; j < n; ++j) v.set(k, j, uniform(rng, -5, 5));
    std::size_t rk = oracle::rank_elimination(u * v);
    EXPECT_LE(rk, r);
    EXPECT_LE(rk, std::min(oracle::rank_elimination(u), oracle::rank_elimination(v)));
  }
}

TEST(Interpolation, MatchesKnownPolynomials) {
  EXPECT_EQ(oracle::charpoly_interpolation(mat({{0, 1}, {1, 0}})), (std::vector<Rational>{-1, 0, 1}));
  EXPECT_EQ(oracle::charpoly_interpolation(mat({{2, 0}, {0, 3}})), (std::vector<Rational>{6, -5, 1}));
}

TEST(Feasibility, Examples) {
  EXPECT_TRUE(oracle::feasible_elimination(RationalMatrix::identity(2), {5, -1}));
  EXPECT_FALSE(oracle::feasible_elimination(mat({{1}, {1}}), {1, 2}));
}

TEST(Permanent, Examples) {
  RationalMatrix full(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) full.set(i, j, 1);
  EXPECT_EQ(oracle::support_permanent(full), 6);
  EXPECT_EQ(oracle::support_permanent(mat({{0, 1}, {0, 5}})), 0);
}

TEST(Arborescences, SpecExamples) {
  for (Vertex r = 0; r < 3; ++r) EXPECT_EQ(oracle::brute_arborescences(cycle(3), r), 1);
  WeightedDigraph star(3);
  star.set_arc(0, 1, 1);
  star.set_arc(0, 2, 1);
  EXPECT_EQ(oracle::brute_arborescences(star, 0), 1);
  EXPECT_EQ(oracle::brute_arborescences(star, 1), 0);
  EXPECT_EQ(oracle::brute_arborescences(star, 0, Orientation::toward_root), 0);
  EXPECT_EQ(oracle::brute_arborescences(bidirected_triangle(), 0), 3);
}

TEST(EulerTours, SpecExamples) {
  EXPECT_EQ(oracle::brute_euler_tours(cycle(3)), 1);
  EXPECT_EQ(oracle::brute_euler_tours(cycle(2)), 1);
  EXPECT_EQ(oracle::brute_euler_tours(bidirected_triangle()), 3);
}

TEST(SpanningTrees, Examples) {
  Graph k4(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j);
  EXPECT_EQ(oracle::brute_spanning_trees(k4), 16);
  Graph two(2);
  EXPECT_EQ(oracle::brute_spanning_trees(two), 0);
}

TEST(Oracles, CapsEnforced) {
  EXPECT_THROW(oracle::brute_arborescences(cycle(8), 0), PreconditionError);
  EXPECT_THROW(oracle::brute_euler_tours(cycle(13)), PreconditionError);
}
