#pragma once

// Text formats: Matrix Market (coordinate and array, with a `rational`
// field), PACE .gr/.td, and the weighted digraph variant `p dgw`.
// Indices are 1-based in files and 0-based in memory.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "twdet/core.hpp"
#include "twdet/errors.hpp"
#include "twdet/rational.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet::io {

namespace detail {

/// Splits a stream into whitespace-separated tokens per line, remembering
/// line numbers for error messages.
class LineReader {
public:
  explicit LineReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

  /// Next line that is not blank and does not start with `comment`.
  /// The raw line is kept in `raw()`.
  bool next(std::vector<std::string>& tokens, char comment) {
    while (std::getline(in_, raw_)) {
      ++line_;
      if (!raw_.empty() && raw_.back() == '\r') raw_.pop_back();
      std::istringstream ss(raw_);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty()) continue;
      if (tokens.front()[0] == comment) continue;
      return true;
    }
    return false;
  }

  bool next_raw() {
    if (!std::getline(in_, raw_)) return false;
    ++line_;
    if (!raw_.empty() && raw_.back() == '\r') raw_.pop_back();
    return true;
  }

  const std::string& raw() const { return raw_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(what_ + ":" + std::to_string(line_) + ": " + msg);
  }

  long long count(const std::string& tok, long long lo, long long hi) const {
    long long v = 0;
    std::size_t used = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) fail("expected an integer, got '" + tok + "'");
    if (v < lo || v > hi) fail("value " + tok + " out of range [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    return v;
  }

  Rational rational(const std::string& tok) const {
    try {
      return parse_rational(tok);
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

private:
  std::istream& in_;
  std::string what_;
  std::string raw_;
  long line_ = 0;
};

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrix Market

/// Reads a Matrix Market matrix. Fields: rational (num/den), integer, real
/// (exact decimal), pattern (entries 1). Symmetries: general, symmetric,
/// skew-symmetric. Duplicate coordinates are an error; explicit zeros are
/// dropped.
inline RationalMatrix read_matrix_market(std::istream& in, const std::string& name = "matrix") {
  detail::LineReader r(in, name);
  if (!r.next_raw()) r.fail("empty input");
  std::istringstream hs(r.raw());
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") r.fail("missing %%MatrixMarket banner");
  object = detail::lower(object);
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (object != "matrix") r.fail("unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array") r.fail("unsupported format '" + format + "'");
  if (field != "rational" && field != "integer" && field != "real" && field != "pattern")
    r.fail("unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    r.fail("unsupported symmetry '" + symmetry + "'");
  if (format == "array" && field == "pattern") r.fail("pattern field needs coordinate format");

  std::vector<std::string> tok;
  if (!r.next(tok, '%')) r.fail("missing size line");
  const bool coord = format == "coordinate";
  if (tok.size() != (coord ? 3u : 2u)) r.fail("size line needs " + std::string(coord ? "3" : "2") + " numbers");
  const long long limit = 1LL << 31;
  auto rows = static_cast<std::size_t>(r.count(tok[0], 0, limit));
  auto cols = static_cast<std::size_t>(r.count(tok[1], 0, limit));
  if (symmetry != "general" && rows != cols) r.fail("symmetric storage needs a square matrix");
  RationalMatrix m(rows, cols);

  auto value = [&](const std::string& t) {
    Rational v = r.rational(t);
    if (field == "integer" && !is_integer(v)) r.fail("non-integer entry '" + t + "' in integer matrix");
    if (field == "integer" && t.find_first_of("./eE") != std::string::npos)
      r.fail("entry '" + t + "' is not an integer literal");
    if (field == "rational" && t.find_first_of(".eE") != std::string::npos)
      r.fail("entry '" + t + "' is not of the form num[/den]");
    return v;
  };
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto place = [&](std::size_t i, std::size_t j, const Rational& v) {
    if (!seen.insert({i, j}).second) r.fail("duplicate entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    if (symmetry == "skew-symmetric" && i == j && v != 0) r.fail("nonzero diagonal in skew-symmetric matrix");
    m.set(i, j, v);
    if (i != j && symmetry != "general") {
      if (!seen.insert({j, i}).second)
        r.fail("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") given on both triangles");
      m.set(j, i, symmetry == "symmetric" ? v : Rational(-v));
    }
  };

  if (coord) {
    auto nnz = static_cast<std::size_t>(r.count(tok[2], 0, limit));
    for (std::size_t k = 0; k < nnz; ++k) {
      if (!r.next(tok, '%')) r.fail("expected " + std::to_string(nnz) + " entries, got " + std::to_string(k));
      std::size_t want = field == "pattern" ? 2 : 3;
      if (tok.size() != want) r.fail("entry line needs " + std::to_string(want) + " fields");
      auto i = static_cast<std::size_t>(r.count(tok[0], 1, static_cast<long long>(rows)) - 1);
      auto j = static_cast<std::size_t>(r.count(tok[1], 1, static_cast<long long>(cols)) - 1);
      if (symmetry != "general" && j > i) r.fail("symmetric storage lists the lower triangle only");
      place(i, j, field == "pattern" ? Rational(1) : value(tok[2]));
    }
  } else {
    // column-major; symmetric storage lists the lower triangle (strictly
    // lower for skew-symmetric)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) {
        if (symmetry == "symmetric" && i < j) continue;
        if (symmetry == "skew-symmetric" && i <= j) continue;
        if (!r.next(tok, '%')) r.fail("array data ends early");
        if (tok.size() != 1) r.fail("array line needs 1 field");
        place(i, j, value(tok[0]));
      }
  }
  if (r.next(tok, '%')) r.fail("trailing data after the last entry");
  return m;
}

/// Coordinate general format; field `integer` when every entry is an
/// integer, `rational` otherwise. Entries in row-major order.
inline void write_matrix_market(std::ostream& out, const RationalMatrix& m) {
  bool integral = true;
  for (const auto& [ij, v] : m.entries()) integral = integral && is_integer(v);
  out << "%%MatrixMarket matrix coordinate " << (integral ? "integer" : "rational") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonzeros() << '\n';
  for (const auto& [ij, v] : m.entries()) out << ij.first + 1 << ' ' << ij.second + 1 << ' ' << to_string(v) << '\n';
}

// ---------------------------------------------------------------------------
// PACE graphs and decompositions

inline Graph read_gr(std::istream& in, const std::string& name = "graph") {
  detail::LineReader r(in, name);
  std::vector<std::string> tok;
  if (!r.next(tok, 'c')) r.fail("missing 'p tw' header");
  if (tok.size() != 4 || tok[0] != "p" || tok[1] != "tw") r.fail("expected 'p tw <n> <m>'");
  int n = static_cast<int>(r.count(tok[2], 0, 1 << 30));
  auto m = r.count(tok[3], 0, 1LL << 40);
  Graph g(n);
  for (long long k = 0; k < m; ++k) {
    if (!r.next(tok, 'c')) r.fail("expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    if (tok.size() != 2) r.fail("edge line needs 2 vertices");
    auto u = static_cast<Vertex>(r.count(tok[0], 1, n) - 1);
    auto v = static_cast<Vertex>(r.count(tok[1], 1, n) - 1);
    g.add_edge(u, v);
  }
  if (r.next(tok, 'c')) r.fail("trailing data after the last edge");
  return g;
}

inline void write_gr(std::ostream& out, const Graph& g) {
  auto edges = g.edges();
  out << "p tw " << g.size() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u + 1 << ' ' << v + 1 << '\n';
}

/// PACE .td. When `n` is given the header's vertex count must match it.
inline TreeDecomposition read_td(std::istream& in, const std::string& name = "decomposition", int n = -1) {
  detail::LineReader r(in, name);
  std::vector<std::string> tok;
  if (!r.next(tok, 'c')) r.fail("missing 's td' header");
  if (tok.size() != 5 || tok[0] != "s" || tok[1] != "td") r.fail("expected 's td <bags> <maxbag> <n>'");
  auto bags = static_cast<std::size_t>(r.count(tok[2], 0, 1 << 30));
  auto maxbag = r.count(tok[3], 0, 1 << 30);
  int verts = static_cast<int>(r.count(tok[4], 0, 1 << 30));
  if (n >= 0 && verts != n)
    r.fail("decomposition is for " + std::to_string(verts) + " vertices, graph has " + std::to_string(n));
  TreeDecomposition t;
  t.bags.resize(bags);
  std::vector<char> got(bags, 0);
  for (std::size_t k = 0; k < bags; ++k) {
    if (!r.next(tok, 'c')) r.fail("expected " + std::to_string(bags) + " bag lines");
    if (tok.size() < 2 || tok[0] != "b") r.fail("expected 'b <id> <vertices>'");
    auto id = static_cast<std::size_t>(r.count(tok[1], 1, static_cast<long long>(bags)) - 1);
    if (got[id]) r.fail("bag " + tok[1] + " listed twice");
    got[id] = 1;
    for (std::size_t i = 2; i < tok.size(); ++i) t.bags[id].push_back(static_cast<Vertex>(r.count(tok[i], 1, verts) - 1));
    if (static_cast<long long>(t.bags[id].size()) > maxbag) r.fail("bag " + tok[1] + " exceeds the declared size");
  }
  while (r.next(tok, 'c')) {
    if (tok.size() != 2) r.fail("tree edge line needs 2 bag ids");
    int a = static_cast<int>(r.count(tok[0], 1, static_cast<long long>(bags)) - 1);
    int b = static_cast<int>(r.count(tok[1], 1, static_cast<long long>(bags)) - 1);
    t.edges.emplace_back(a, b);
  }
  t.normalize();
  return t;
}

inline void write_td(std::ostream& out, const TreeDecomposition& t, int n) {
  out << "s td " << t.bags.size() << ' ' << (t.bags.empty() ? 0 : t.width() + 1) << ' ' << n << '\n';
  for (std::size_t i = 0; i < t.bags.size(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : t.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : t.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

// ---------------------------------------------------------------------------
// Weighted digraphs

/// `p dgw <n> <m>` then m lines `u v num[/den]`. Zero weights and repeated
/// arcs are errors.
inline WeightedDigraph read_dgw(std::istream& in, const std::string& name = "digraph") {
  detail::LineReader r(in, name);
  std::vector<std::string> tok;
  if (!r.next(tok, 'c')) r.fail("missing 'p dgw' header");
  if (tok.size() != 4 || tok[0] != "p" || tok[1] != "dgw") r.fail("expected 'p dgw <n> <m>'");
  int n = static_cast<int>(r.count(tok[2], 0, 1 << 30));
  auto m = r.count(tok[3], 0, 1LL << 40);
  WeightedDigraph g(n);
  for (long long k = 0; k < m; ++k) {
    if (!r.next(tok, 'c')) r.fail("expected " + std::to_string(m) + " arcs, got " + std::to_string(k));
    if (tok.size() != 3) r.fail("arc line needs 'u v weight'");
    auto u = static_cast<Vertex>(r.count(tok[0], 1, n) - 1);
    auto v = static_cast<Vertex>(r.count(tok[1], 1, n) - 1);
    if (tok[2].find_first_of(".eE") != std::string::npos) r.fail("weight '" + tok[2] + "' is not of the form num[/den]");
    Rational w = r.rational(tok[2]);
    if (w == 0) r.fail("zero arc weight");
    if (g.has_arc(u, v)) r.fail("repeated arc " + tok[0] + " " + tok[1]);
    g.set_arc(u, v, w);
  }
  if (r.next(tok, 'c')) r.fail("trailing data after the last arc");
  return g;
}

inline void write_dgw(std::ostream& out, const WeightedDigraph& g) {
  out << "p dgw " << g.size() << ' ' << g.arc_count() << '\n';
  for (const auto& [a, w] : g.arcs()) out << a.first + 1 << ' ' << a.second + 1 << ' ' << to_string(w) << '\n';
}

// ---------------------------------------------------------------------------
// Files and digests

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// FNV-1a, 64 bit. Pass a previous result as `h` to chain several inputs.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string fnv1a_hex(std::string_view bytes) { return hex64(fnv1a(bytes)); }

} // namespace twdet::io
