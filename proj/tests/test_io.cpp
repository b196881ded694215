#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "twdet/io.hpp"

using namespace twdet;
using namespace twdet::testing;

namespace {

RationalMatrix mm(const std::string& text) {
  std::istringstream in(text);
  return io::read_matrix_market(in);
}

} // namespace

TEST(MatrixMarket, RationalCoordinate) {
  auto m = mm("%%MatrixMarket matrix coordinate rational general\n% comment\n2 2 3\n1 1 1/2\n2 1 -3\n2 2 4/6\n");
  EXPECT_EQ(m, RationalMatrix::from_rows({{Rational(1, 2), 0}, {-3, Rational(2, 3)}}));
}

TEST(MatrixMarket, RealIsExactDecimal) {
  auto m = mm("%%MatrixMarket matrix coordinate real general\n1 2 2\n1 1 0.1\n1 2 -2.5e1\n");
  EXPECT_EQ(m.at(0, 0), Rational(1, 10));
  EXPECT_EQ(m.at(0, 1), -25);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 nan\n"), ParseError);
}

TEST(MatrixMarket, SymmetryAndPattern) {
  auto s = mm("%%MatrixMarket matrix coordinate integer symmetric\n2 2 2\n1 1 5\n2 1 7\n");
  EXPECT_EQ(s, RationalMatrix::from_rows({{5, 7}, {7, 0}}));
  auto k = mm("%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 3\n");
  EXPECT_EQ(k, RationalMatrix::from_rows({{0, -3}, {3, 0}}));
  auto p = mm("%%MatrixMarket matrix coordinate pattern general\n2 3 2\n1 3\n2 1\n");
  EXPECT_EQ(p, RationalMatrix::from_rows({{0, 0, 1}, {1, 0, 0}}));
  auto a = mm("%%MatrixMarket matrix array integer general\n2 2\n1\n2\n3\n4\n");
  EXPECT_EQ(a, RationalMatrix::from_rows({{1, 3}, {2, 4}}));
}

TEST(MatrixMarket, ExplicitZerosDropped) {
  auto m = mm("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 0\n2 2 1\n");
  EXPECT_EQ(m.nonzeros(), 1u);
}

TEST(MatrixMarket, Errors) {
  EXPECT_THROW(mm(""), ParseError);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"), ParseError);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 1\n1 1 2\n"), ParseError);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 1\n"), ParseError);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 1\n"), ParseError);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 1/2\n"), ParseError);
  EXPECT_THROW(mm("%%MatrixMarket matrix coordinate rational general\n1 1 1\n1 1 1/0\n"), ParseError);
  try {
    mm("%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 x 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(MatrixMarketProperty, RoundTrip) {
  Rng rng(31);
  for (int iter = 0; iter < 50; ++iter) {
    std::size_t r = static_cast<std::size_t>(uniform(rng, 0, 5)), c = static_cast<std::size_t>(uniform(rng, 0, 5));
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (uniform(rng, 0, 1)) m.set(i, j, Rational(uniform(rng, -9, 9), uniform(rng, 1, 4)));
    std::ostringstream out;
    io::write_matrix_market(out, m);
    EXPECT_EQ(mm(out.str()), m);
  }
}

TEST(Pace, GraphAndDecompositionRoundTrip) {
  Rng rng(32);
  for (int iter = 0; iter < 30; ++iter) {
    auto pk = random_partial_ktree(uniform(rng, 1, 9), 2, 0.7, rng);
    std::ostringstream g, t;
    io::write_gr(g, pk.graph);
    io::write_td(t, pk.td, pk.graph.size());
    std::istringstream gi(g.str()), ti(t.str());
    auto g2 = io::read_gr(gi);
    auto t2 = io::read_td(ti, "td", g2.size());
    EXPECT_EQ(g2, pk.graph);
    EXPECT_EQ(t2.bags, pk.td.bags);
    EXPECT_EQ(t2.edges, pk.td.edges);
  }
}

TEST(Pace, ParsesCommentsAndRejectsMismatch) {
  std::istringstream g("c hello\np tw 3 2\n1 2\nc mid\n2 3\n");
  EXPECT_EQ(io::read_gr(g).edge_count(), 2u);
  std::istringstream bad("p tw 3 2\n1 2\n");
  EXPECT_THROW(io::read_gr(bad), ParseError);
  std::istringstream td("s td 1 2 3\nb 1 1 2\n");
  EXPECT_THROW(io::read_td(td, "td", 4), ParseError);
  std::istringstream big("s td 1 1 3\nb 1 1 2\n");
  EXPECT_THROW(io::read_td(big), ParseError);
}

TEST(Dgw, RoundTripAndErrors) {
  WeightedDigraph d(3);
  d.set_arc(0, 1, Rational(-2, 3));
  d.set_arc(2, 2, 5);
  std::ostringstream out;
  io::write_dgw(out, d);
  EXPECT_EQ(out.str(), "p dgw 3 2\n1 2 -2/3\n3 3 5\n");
  std::istringstream in(out.str());
  EXPECT_EQ(io::read_dgw(in), d);
  std::istringstream zero("p dgw 2 1\n1 2 0\n");
  EXPECT_THROW(io::read_dgw(zero), ParseError);
  std::istringstream twice("p dgw 2 2\n1 2 1\n1 2 3\n");
  EXPECT_THROW(io::read_dgw(twice), ParseError);
}

TEST(Digest, Fnv1a) {
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(io::fnv1a_hex("a"), "af63dc4c8601ec8c");
}
