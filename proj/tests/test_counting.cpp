#include <gtest/gtest.h>

#include "support.hpp"
#include "twdet/counting.hpp"
#include "twdet/oracle.hpp"

using namespace twdet;
using namespace twdet::testing;

namespace {

WeightedDigraph from_arcs(int n, std::vector<std::pair<int, int>> arcs) {
  WeightedDigraph g(n);
  for (auto [u, v] : arcs) g.set_arc(u, v, 1);
  return g;
}

WeightedDigraph bidirected_triangle() { return from_arcs(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}); }

} // namespace

TEST(Arborescences, DirectedTriangle) {
  auto g = from_arcs(3, {{0, 1}, {1, 2}, {2, 0}});
  for (int r = 0; r < 3; ++r) {
    EXPECT_EQ(count_arborescences(g, r), 1);
    EXPECT_EQ(count_arborescences(g, r, Orientation::toward_root), 1);
  }
}

TEST(Arborescences, OutStarOrientation) {
  auto star = from_arcs(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(count_arborescences(star, 0), 1);
  EXPECT_EQ(count_arborescences(star, 1), 0);
  EXPECT_EQ(count_arborescences(star, 0, Orientation::toward_root), 0);
  EXPECT_EQ(oracle::brute_arborescences(star, 0), 1);
  EXPECT_EQ(oracle::brute_arborescences(star, 1), 0);
}

TEST(Arborescences, BidirectedTriangle) {
  for (int r = 0; r < 3; ++r) {
    EXPECT_EQ(count_arborescences(bidirected_triangle(), r), 3);
    EXPECT_EQ(oracle::brute_arborescences(bidirected_triangle(), r), 3);
  }
}

TEST(Arborescences, RejectsWeightedArcs) {
  WeightedDigraph g(2);
  g.set_arc(0, 1, 2);
  EXPECT_THROW(count_arborescences(g, 0), PreconditionError);
}

TEST(Laplacian, RowSumsAndDiagonal) {
  auto lv = laplacian(from_arcs(3, {{0, 1}, {0, 2}, {1, 2}, {2, 2}}), Orientation::toward_root);
  auto d = lv.laplacian.dense();
  for (std::size_t i = 0; i < 3; ++i) {
    Rational sum = 0;
    for (const auto& x : d[i]) sum += x;
    EXPECT_EQ(sum, 0);
    EXPECT_EQ(d[i][i], Rational(lv.degree[i]));
  }
  EXPECT_EQ(lv.degree[0], 2);
}

TEST(ArborescenceProperty, MatchesBruteForceBothOrientations) {
  Rng rng(21);
  for (int iter = 0; iter < 80; ++iter) {
    auto pk = random_partial_ktree(uniform(rng, 1, 7), 2, 0.9, rng);
    auto g = random_orientation(pk.graph, 0.3, rng);
    Vertex r = uniform(rng, 0, g.size() - 1);
    EXPECT_EQ(count_arborescences(g, r), oracle::brute_arborescences(g, r)) << iter;
    EXPECT_EQ(count_arborescences(g, r, Orientation::toward_root),
              oracle::brute_arborescences(g, r, Orientation::toward_root))
        << iter;
  }
}

TEST(ArborescenceProperty, MatrixTreeOnBidirectedGraphs) {
  Rng rng(22);
  for (int iter = 0; iter < 40; ++iter) {
    auto pk = random_partial_ktree(uniform(rng, 1, 6), 2, 0.8, rng);
    WeightedDigraph g(pk.graph.size());
    for (auto [u, v] : pk.graph.edges()) {
      g.set_arc(u, v, 1);
      g.set_arc(v, u, 1);
    }
    Vertex r = uniform(rng, 0, g.size() - 1);
    EXPECT_EQ(count_arborescences(g, r), oracle::brute_spanning_trees(pk.graph)) << iter;
  }
}

TEST(EulerTours, SmallCycles) {
  EXPECT_EQ(count_euler_tours(from_arcs(3, {{0, 1}, {1, 2}, {2, 0}})).tours, 1);
  EXPECT_EQ(count_euler_tours(from_arcs(2, {{0, 1}, {1, 0}})).tours, 1);
}

TEST(EulerTours, BidirectedTriangleMatchesEnumeration) {
  auto rep = count_euler_tours(bidirected_triangle());
  EXPECT_EQ(rep.tours, oracle::brute_euler_tours(bidirected_triangle()));
  EXPECT_EQ(rep.tours, 3);
  EXPECT_TRUE(rep.root_independent);
  EXPECT_EQ(rep.tours, rep.arborescences * rep.factorial_product);
}

TEST(EulerTours, LoopsAndIsolatedVertices) {
  auto g = from_arcs(4, {{0, 1}, {1, 0}, {1, 1}});
  EXPECT_EQ(count_euler_tours(g).tours, oracle::brute_euler_tours(g));
}

TEST(EulerTours, Errors) {
  EXPECT_THROW(count_euler_tours(from_arcs(3, {{0, 1}, {1, 2}})), PreconditionError);
  EXPECT_THROW(count_euler_tours(from_arcs(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})), PreconditionError);
  EXPECT_THROW(count_euler_tours(WeightedDigraph(3)), PreconditionError);
  try {
    count_euler_tours(from_arcs(3, {{0, 1}, {1, 2}}));
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("vertex 1"), std::string::npos);
  }
}
