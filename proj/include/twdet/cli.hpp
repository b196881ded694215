#pragma once

// Command-line driver. Every subcommand prints one JSON object on stdout;
// diagnostics go to stderr. Exit codes: 0 ok, 1 usage, 2 parse error,
// 3 invalid decomposition, 4 precondition failure (singular, non-Eulerian,
// over budget, ...), 5 internal error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twdet/ccdp.hpp"
#include "twdet/counting.hpp"
#include "twdet/errors.hpp"
#include "twdet/gadgets.hpp"
#include "twdet/hardness.hpp"
#include "twdet/io.hpp"
#include "twdet/linalg.hpp"
#include "twdet/oracle.hpp"
#include "twdet/treedecomp.hpp"

namespace twdet::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { ok = 0, usage = 1, parse_error = 2, invalid_decomposition = 3, precondition = 4, internal = 5 };

namespace detail {

/// Input files named on the command line, read once and digested in the
/// order they were loaded.
class Inputs {
public:
  std::string load(const std::string& path) {
    std::string text = io::read_file(path);
    digest_ = io::fnv1a(text, digest_);
    return text;
  }

  void mix(const std::string& s) { digest_ = io::fnv1a(s, digest_); }
  std::string digest() const { return io::hex64(digest_); }

private:
  std::uint64_t digest_ = io::fnv1a("");
};

inline RationalMatrix parse_matrix(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return io::read_matrix_market(in, name);
}

inline WeightedDigraph parse_digraph(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return io::read_dgw(in, name);
}

inline Graph parse_graph(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return io::read_gr(in, name);
}

inline TreeDecomposition parse_td(const std::string& text, const std::string& name, int n) {
  std::istringstream in(text);
  return io::read_td(in, name, n);
}

inline Json matrix_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json strings(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline std::string td_text(const TreeDecomposition& t, int n) {
  std::ostringstream s;
  io::write_td(s, t, n);
  return s.str();
}

inline std::string dgw_text(const WeightedDigraph& g) {
  std::ostringstream s;
  io::write_dgw(s, g);
  return s.str();
}

inline std::string mtx_text(const RationalMatrix& m) {
  std::ostringstream s;
  io::write_matrix_market(s, m);
  return s.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write '" + path + "'");
  f << text;
}

/// Undirected graph on rows and columns (columns shifted by the row count):
/// the support of the symmetric embedding of a possibly non-square matrix.
inline Graph row_column_graph(const RationalMatrix& a) {
  Graph g(static_cast<int>(a.rows() + a.cols()));
  for (const auto& [ij, v] : a.entries())
    g.add_edge(static_cast<Vertex>(ij.first), static_cast<Vertex>(a.rows() + ij.second));
  return g;
}

inline std::vector<Rational> parse_vector(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_rational(item));
  return out;
}

} // namespace detail

/// Runs one command line; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact linear algebra on bounded-treewidth supports via cycle-cover counting", "twdet"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  bool timing = false;
  app.add_flag("--timing", timing, "add wall-clock time (ms) to the output");

  // option storage shared by the subcommands
  std::string matrix_path, digraph_path, graph_path, td_path, strategy = "min-fill", orientation = "away",
                                                                  out_prefix, rhs;
  unsigned power = 1;
  int root = 1, n_param = 8, gap = 1;
  std::uint64_t seed = 1;
  bool t_first = false;

  std::function<void(Json&, detail::Inputs&)> action;
  auto sub = [&](const std::string& name, const std::string& help) { return app.add_subcommand(name, help); };
  auto matrix_in = [&](CLI::App* s, bool also_digraph) {
    auto* m = s->add_option("--matrix", matrix_path, "Matrix Market file")->check(CLI::ExistingFile);
    if (also_digraph) {
      auto* d = s->add_option("--digraph", digraph_path, "weighted digraph (p dgw) file")->check(CLI::ExistingFile);
      m->excludes(d);
      d->excludes(m);
    } else {
      m->required();
    }
  };
  auto td_in = [&](CLI::App* s) {
    s->add_option("--td", td_path, "PACE .td decomposition of the input support")->check(CLI::ExistingFile);
  };

  LinalgOptions opt;
  if (const char* b = std::getenv("TWDET_DP_BUDGET")) {
    try {
      std::size_t used = 0;
      opt.dp.budget = std::stod(b, &used);
      if (used != std::string(b).size() || !(opt.dp.budget > 0)) throw std::invalid_argument(b);
    } catch (const std::exception&) {
      err << "error: TWDET_DP_BUDGET must be a positive number, got '" << b << "'\n";
      return usage;
    }
  }

  // loaders; each one digests what it reads
  auto load_matrix = [&](detail::Inputs& in) -> RationalMatrix {
    if (!matrix_path.empty()) return detail::parse_matrix(in.load(matrix_path), matrix_path);
    if (!digraph_path.empty()) return detail::parse_digraph(in.load(digraph_path), digraph_path).adjacency_matrix();
    throw CLI::RequiredError("--matrix or --digraph");
  };
  auto load_digraph = [&](detail::Inputs& in) -> WeightedDigraph {
    if (!digraph_path.empty()) return detail::parse_digraph(in.load(digraph_path), digraph_path);
    if (!matrix_path.empty()) return support_digraph(detail::parse_matrix(in.load(matrix_path), matrix_path));
    throw CLI::RequiredError("--digraph or --matrix");
  };
  auto load_td = [&](detail::Inputs& in, const Graph& g) -> std::optional<TreeDecomposition> {
    if (td_path.empty()) return std::nullopt;
    TreeDecomposition t = detail::parse_td(in.load(td_path), td_path, g.size());
    require_valid(t, g);
    return t;
  };
  auto square_support = [](const RationalMatrix& a) {
    if (!a.square()) throw PreconditionError("matrix must be square");
    return underlying_graph(support_digraph(a));
  };

  // --- linear algebra ---
  auto* det = sub("det", "determinant through the cycle-cover histogram");
  matrix_in(det, true);
  td_in(det);
  det->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      auto t = load_td(in, square_support(a));
      auto r = determinant_report(a, t, opt);
      j["route"] = to_string(r.route);
      j["result"] = to_string(r.value);
      j["width"] = r.width;
    };
  });

  auto* cp = sub("charpoly", "coefficients of det(xI - A), constant term first");
  matrix_in(cp, true);
  td_in(cp);
  cp->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      auto t = load_td(in, square_support(a));
      auto c = char_poly(a, t, opt);
      j["route"] = to_string(c.route);
      j["result"] = detail::strings(c.coefficients);
    };
  });

  auto* rk = sub("rank", "rank through the symmetric embedding");
  matrix_in(rk, true);
  td_in(rk);
  rk->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      load_td(in, detail::row_column_graph(a));
      j["result"] = std::to_string(rank(a, opt));
    };
  });

  auto* inv = sub("inverse", "inverse by cofactors");
  matrix_in(inv, true);
  td_in(inv);
  inv->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      auto t = load_td(in, square_support(a));
      j["result"] = detail::matrix_json(inverse(a, t, opt));
    };
  });

  auto* pw = sub("power", "A^m for a nonnegative integer matrix via the resolvent");
  matrix_in(pw, true);
  td_in(pw);
  pw->add_option("--m", power, "exponent")->required();
  pw->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      load_td(in, square_support(a));
      in.mix("m=" + std::to_string(power));
      try {
        j["result"] = detail::matrix_json(power_resolvent(a, power, std::nullopt, opt));
      } catch (const BudgetExceeded& e) {
        err << "note: " << e.what() << "; using direct multiplication\n";
        j["route"] = "oracle-fallback";
        j["result"] = detail::matrix_json(oracle::power_direct(a, power));
      }
    };
  });

  auto* fs = sub("fsle", "feasibility of A z = b over the rationals");
  matrix_in(fs, true);
  td_in(fs);
  fs->add_option("--rhs", rhs, "right-hand side b, comma separated (e.g. 1,-2,3/4)")->required();
  fs->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      load_td(in, detail::row_column_graph(a));
      in.mix("rhs=" + rhs);
      j["result"] = fsle({a, detail::parse_vector(rhs)}, opt);
    };
  });

  // --- counting ---
  auto* arb = sub("arborescences", "spanning arborescences of a 0/1 digraph");
  matrix_in(arb, true);
  td_in(arb);
  arb->add_option("--root", root, "root vertex (1-based)")->required();
  arb->add_option("--orientation", orientation, "away (out-branchings) or toward (in-branchings)")
      ->check(CLI::IsMember({"away", "toward"}));
  arb->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      WeightedDigraph g = load_digraph(in);
      load_td(in, underlying_graph(g));
      in.mix("root=" + std::to_string(root) + ";" + orientation);
      auto o = orientation == "away" ? Orientation::away_from_root : Orientation::toward_root;
      j["result"] = to_string(count_arborescences(g, root - 1, o, opt));
      j["root"] = root;
      j["orientation"] = orientation == "away" ? "away_from_root" : "toward_root";
    };
  });

  auto* eul = sub("euler-tours", "Euler circuits of a balanced connected 0/1 digraph");
  matrix_in(eul, true);
  td_in(eul);
  eul->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      WeightedDigraph g = load_digraph(in);
      load_td(in, underlying_graph(g));
      auto rep = count_euler_tours(g, opt);
      j["result"] = to_string(rep.tours);
      j["root"] = rep.root + 1;
      j["arborescences"] = to_string(rep.arborescences);
      j["factorial_product"] = to_string(rep.factorial_product);
      Json per = Json::array();
      for (const auto& t : rep.per_root) per.push_back(to_string(t));
      j["per_root"] = per;
      j["root_independent"] = rep.root_independent;
    };
  });

  auto* hist = sub("histogram", "cycle covers counted by cycle count and arcs per value class");
  matrix_in(hist, true);
  td_in(hist);
  hist->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      WeightedDigraph g = load_digraph(in);
      auto t = load_td(in, underlying_graph(g));
      auto classes = classes_by_value(g);
      auto h = cycle_cover_histogram(g, classes, t ? *t : decompose(g), opt.dp);
      j["classes"] = detail::strings(classes.values);
      Json rows = Json::array();
      for (const auto& [key, c] : h.entries) {
        Json row;
        row["cycles"] = key[0];
        row["arcs"] = Json(std::vector<int>(key.begin() + 1, key.end()));
        row["count"] = to_string(c);
        rows.push_back(std::move(row));
      }
      j["result"] = rows;
      j["signed_sum"] = to_string(signed_sum(h, classes));
    };
  });

  // --- decompositions ---
  auto graph_in = [&](CLI::App* s) {
    auto* g = s->add_option("--gr", graph_path, "PACE .gr graph")->check(CLI::ExistingFile);
    auto* m = s->add_option("--matrix", matrix_path, "Matrix Market file (support)")->check(CLI::ExistingFile);
    auto* d = s->add_option("--digraph", digraph_path, "p dgw file (underlying graph)")->check(CLI::ExistingFile);
    g->excludes(m)->excludes(d);
    m->excludes(d);
  };
  auto load_graph = [&](detail::Inputs& in) -> Graph {
    if (!graph_path.empty()) return detail::parse_graph(in.load(graph_path), graph_path);
    return underlying_graph(load_digraph(in));
  };

  auto* dec = sub("decompose", "tree decomposition by min-fill, min-degree or exact search");
  graph_in(dec);
  td_in(dec);
  dec->add_option("--strategy", strategy, "min-fill, min-degree or exact")
      ->check(CLI::IsMember({"min-fill", "min-degree", "exact"}));
  dec->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      Graph g = load_graph(in);
      auto given = load_td(in, g);
      in.mix("strategy=" + strategy);
      TreeDecomposition t = given ? *given : decompose(g, {parse_strategy(strategy)});
      j["result"] = detail::td_text(t, g.size());
      j["width"] = t.width();
      j["strategy"] = given ? "given" : strategy;
    };
  });

  auto* val = sub("validate-td", "check a decomposition against a graph");
  graph_in(val);
  val->add_option("--td", td_path, "PACE .td decomposition")->required()->check(CLI::ExistingFile);
  val->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      Graph g = load_graph(in);
      TreeDecomposition t = detail::parse_td(in.load(td_path), td_path, g.size());
      auto v = validate(t, g);
      j["result"] = v ? "invalid" : "valid";
      if (v) {
        j["clause"] = std::string(1, v->clause);
        j["detail"] = v->detail;
        throw InvalidDecomposition(std::string("clause (") + v->clause + "): " + v->detail);
      }
      j["width"] = t.width();
    };
  });

  // --- generators ---
  auto gen_common = [&](CLI::App* s) {
    s->add_option("--seed", seed, "random seed");
    s->add_option("--out", out_prefix, "also write the instance files to PREFIX.*");
  };

  auto* go = sub("gen-ord", "rewired path instance whose determinant tells whether s precedes t");
  gen_common(go);
  go->add_option("--n", n_param, "path length (>= 6)");
  go->add_flag("--t-first", t_first, "place t before s");
  go->add_option("--gap", gap, "steps from s to t when s comes first (0 = random)");
  go->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      in.mix("gen-ord;" + std::to_string(n_param) + ";" + std::to_string(seed) + ";" + std::to_string(t_first) + ";" +
             std::to_string(gap));
      auto inst = gen_ord_instance(n_param, !t_first, seed, gap);
      std::string dgw = detail::dgw_text(inst.graph), td = detail::td_text(inst.td, inst.n);
      Json truth;
      truth["a"] = inst.a + 1;
      truth["b"] = inst.b + 1;
      truth["s"] = inst.s + 1;
      truth["t"] = inst.t + 1;
      truth["s_precedes_t"] = inst.s_precedes_t;
      Json path = Json::array();
      for (Vertex v : inst.path) path.push_back(v + 1);
      truth["path"] = path;
      j["result"] = truth;
      j["dgw"] = dgw;
      j["td"] = td;
      if (!out_prefix.empty()) {
        detail::write_text(out_prefix + ".dgw", dgw);
        detail::write_text(out_prefix + ".td", td);
      }
    };
  });

  auto* gp = sub("gen-powering", "adjacency matrix of a random directed path with marked s, t");
  gen_common(gp);
  gp->add_option("--n", n_param, "number of vertices (>= 2)");
  gp->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      in.mix("gen-powering;" + std::to_string(n_param) + ";" + std::to_string(seed));
      auto inst = gen_powering_instance(n_param, seed);
      Json truth;
      truth["s"] = inst.s + 1;
      truth["t"] = inst.t + 1;
      truth["reachable"] = inst.reachable;
      j["result"] = truth;
      std::string mtx = detail::mtx_text(inst.adjacency);
      j["mtx"] = mtx;
      if (!out_prefix.empty()) detail::write_text(out_prefix + ".mtx", mtx);
    };
  });

  auto* gi = sub("gen-imm", "layered walk gadget for the m-th power of a 0/1 matrix");
  gen_common(gi);
  gi->add_option("--matrix", matrix_path, "0/1 Matrix Market file (random when omitted)")->check(CLI::ExistingFile);
  gi->add_option("--n", n_param, "size of the random matrix");
  gi->add_option("--m", power, "walk length");
  gi->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a;
      if (!matrix_path.empty()) {
        a = detail::parse_matrix(in.load(matrix_path), matrix_path);
      } else {
        if (n_param < 1) throw PreconditionError("--n must be positive");
        std::mt19937_64 rng(seed);
        std::bernoulli_distribution coin(0.5);
        a = RationalMatrix(static_cast<std::size_t>(n_param), static_cast<std::size_t>(n_param));
        for (std::size_t r = 0; r < a.rows(); ++r)
          for (std::size_t c = 0; c < a.cols(); ++c)
            if (coin(rng)) a.set(r, c, 1);
      }
      in.mix("gen-imm;" + std::to_string(n_param) + ";" + std::to_string(seed) + ";" + std::to_string(power));
      auto w = gen_imm_gadget(a, power);
      RationalMatrix walks = oracle::power_direct(a, power);
      Json truth;
      truth["layers"] = w.layer_count();
      Json src = Json::array(), tgt = Json::array();
      for (int v = 0; v < w.n; ++v) {
        src.push_back(w.source(v) + 1);
        tgt.push_back(w.target(v) + 1);
      }
      truth["sources"] = src;
      truth["targets"] = tgt;
      truth["walk_counts"] = detail::matrix_json(walks);
      j["result"] = truth;
      std::string dgw = detail::dgw_text(w.graph);
      j["dgw"] = dgw;
      j["mtx"] = detail::mtx_text(a);
      if (!out_prefix.empty()) detail::write_text(out_prefix + ".dgw", dgw);
    };
  });

  auto* od = sub("oracle-det", "determinant by fraction-free elimination (reference)");
  matrix_in(od, true);
  td_in(od);
  od->callback([&] {
    action = [&](Json& j, detail::Inputs& in) {
      RationalMatrix a = load_matrix(in);
      load_td(in, square_support(a));
      j["route"] = "oracle";
      j["result"] = to_string(oracle::det_bareiss(a));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  Json j;
  std::string command = app.get_subcommands().front()->get_name();
  j["command"] = command;
  detail::Inputs inputs;
  j["input_digest"] = "";
  auto start = std::chrono::steady_clock::now();
  int code = ok;
  try {
    action(j, inputs);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const InvalidDecomposition& e) {
    err << "invalid decomposition: " << e.what() << '\n';
    code = invalid_decomposition;
    if (!j.contains("result")) return code;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return precondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return internal;
  }
  j["input_digest"] = inputs.digest();
  if (timing)
    j["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out << j.dump() << '\n';
  return code;
}

} // namespace twdet::cli
