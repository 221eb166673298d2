// z3flow command-line tool.
//
// Exit status: 0 on success, 1 when the answer is "no nowhere-zero flow"
// (solve, sparse, oracle), 2 on usage or input errors, 3 on internal errors.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "z3flow/criticality.hpp"
#include "z3flow/io.hpp"
#include "z3flow/solver.hpp"

namespace {

using namespace z3flow;

struct Options {
  std::string file;
  std::string format = "auto";
  bool json = false;
  std::uint64_t seed = 1;
  std::string family;
  std::vector<std::size_t> params;
  std::size_t max_n = 6;
  bool multigraph = false;
};

GraphFormat format_of(const std::string& s) {
  if (s == "edgelist") return GraphFormat::EdgeList;
  if (s == "graph6") return GraphFormat::Graph6;
  return GraphFormat::Auto;
}

MultiGraph load(const Options& o) {
  std::string text;
  if (o.file == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(o.file, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + o.file + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_graph(text, format_of(o.format));
}

void print_flow(const MultiGraph& g, const Flow& f) {
  std::cout << "edge tail head value\n";
  for (std::size_t p = 0; p < g.edge_count(); ++p) {
    const Edge& e = g.edge_at(p);
    std::cout << e.id << ' ' << e.tail << ' ' << e.head << ' ' << f.values()[p] << '\n';
  }
}

int report_outcome(const MultiGraph& g, const SolveOutcome& o, const Options& opt, const SparsityBudget* budget) {
  if (opt.json) {
    json doc = outcome_json(g, o);
    if (budget) doc["budget"] = budget_json(*budget);
    std::cout << doc.dump(2) << '\n';
  } else if (const auto* ff = std::get_if<FlowFound>(&o)) {
    std::cout << "nowhere-zero Z3-flow found (" << to_string(ff->source) << ")\n";
    print_flow(g, ff->flow);
  } else if (const auto* nf = std::get_if<NoFlow>(&o)) {
    std::cout << "no nowhere-zero Z3-flow: " << to_string(nf->reason) << '\n';
  } else {
    const auto& ie = std::get<IrrelevantEdge>(o);
    const Edge& e = g.edge(ie.edge);
    std::cout << "irrelevant edge " << ie.edge << " (" << e.tail << "->" << e.head << "), " << to_string(ie.provenance) << '\n';
  }
  if (budget && !opt.json) {
    std::cout << "budget: n=" << budget->n << " m=" << budget->m << " k=" << budget->three_k << "/3";
    if (budget->independent_branch)
      std::cout << " b=" << budget->b << " bound=" << budget->bound() << " enumerated=" << budget->enumerated;
    std::cout << '\n';
  }
  return std::holds_alternative<NoFlow>(o) ? 1 : 0;
}

int cmd_solve(const Options& o) {
  MultiGraph g = load(o);
  return report_outcome(g, solve_components(g), o, nullptr);
}

int cmd_sparse(const Options& o) {
  MultiGraph g = load(o);
  SparseResult r = solve_sparse(g);
  return report_outcome(g, r.outcome, o, &r.budget);
}

int cmd_oracle(const Options& o) {
  MultiGraph g = load(o);
  auto f = oracle_nz_flow(g);
  if (o.json) {
    std::cout << oracle_json(g, f).dump(2) << '\n';
  } else if (f) {
    std::cout << "nowhere-zero Z3-flow found (oracle)\n";
    print_flow(g, *f);
  } else {
    std::cout << "no nowhere-zero Z3-flow: oracle exhausted\n";
  }
  return f ? 0 : 1;
}

int cmd_critical(const Options& o) {
  MultiGraph g = load(o);
  CriticalityReport r = certify_criticality(g);
  if (o.json) {
    std::cout << criticality_json(g, r).dump(2) << '\n';
    return 0;
  }
  std::cout << "critical: " << (r.is_critical ? "true" : "false") << '\n';
  if (!r.connected) std::cout << "graph is not connected\n";
  if (r.nowhere_zero_flow) {
    std::cout << "evidence: nowhere-zero flow\n";
    print_flow(g, *r.nowhere_zero_flow);
  }
  if (r.failing_edge) std::cout << "evidence: G/e has no nowhere-zero flow for e = " << *r.failing_edge << '\n';
  return 0;
}

int cmd_bounds(const Options& o) {
  MultiGraph g = load(o);
  BoundsReport b = bounds_report(g, certify_criticality(g));
  if (o.json) {
    std::cout << bounds_json(b).dump(2) << '\n';
    return 0;
  }
  auto yn = [](bool x) { return x ? "yes" : "no"; };
  std::cout << "n=" << b.n << " m=" << b.m << " n3=" << b.n3 << (b.excluded ? " (K2/K4: density bounds do not apply)" : "")
            << '\n'
            << "m >= (8n+2)/5: " << yn(b.thm_lb) << '\n'
            << "m >= 5n/3: " << yn(b.thm_best) << '\n'
            << "n+n3-1 = " << b.l_main_value << ", m >= n+n3-1: " << yn(b.l_main_holds)
            << ", equality: " << yn(b.l_main_equality) << '\n'
            << "wheel: " << yn(b.wheel) << (b.odd_wheel ? " (odd)" : "") << '\n'
            << "min degree >= 3: " << yn(b.min_degree_at_least_3) << '\n'
            << "degree-3 vertices induce a forest: " << yn(b.degree3_forest) << '\n';
  return 0;
}

int cmd_irrelevant(const Options& o) {
  MultiGraph g = load(o);
  SparseResult r = solve_sparse(g);
  const auto* ie = std::get_if<IrrelevantEdge>(&r.outcome);
  if (o.json) {
    json doc = {{"n", g.vertex_count()}, {"m", g.edge_count()}};
    doc["irrelevant_edge"] = ie ? json(ie->edge) : json(nullptr);
    if (ie) doc["provenance"] = to_string(ie->provenance);
    std::cout << doc.dump(2) << '\n';
  } else if (ie) {
    std::cout << ie->edge << ' ' << to_string(ie->provenance) << '\n';
  } else {
    std::cout << "none\n";
  }
  return 0;
}

int cmd_gen(const Options& o) {
  MultiGraph g = generate(o.family, o.params, o.seed);
  if (o.format == "graph6")
    std::cout << emit_graph6(g) << '\n';
  else
    std::cout << emit_edgelist(g);
  return 0;
}

int cmd_survey(const Options& o) {
  Census c = survey(o.max_n, !o.multigraph);
  if (o.json) {
    std::cout << census_json(c).dump(2) << '\n';
  } else {
    for (const auto& lv : c.levels) {
      std::cout << "n=" << lv.n << ": " << lv.graphs_examined << " " << lv.universe << ", " << lv.critical.size()
                << " critical up to isomorphism";
      if (lv.min_edges) std::cout << ", min edges " << *lv.min_edges;
      std::cout << '\n';
      for (const auto& e : lv.critical) {
        std::cout << "  m=" << e.edges.size() << " :";
        for (auto [a, b] : e.edges) std::cout << ' ' << a << '-' << b;
        std::cout << '\n';
      }
    }
    std::cout << "all bounds hold: " << (c.all_bounds_hold ? "yes" : "no") << '\n'
              << "all structural checks hold: " << (c.all_lemmas_hold ? "yes" : "no") << '\n';
  }
  return c.all_bounds_hold && c.all_lemmas_hold ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nowhere-zero Z3-flows on multigraphs"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Input format (gen: output format)")
      ->check(CLI::IsMember({"auto", "edgelist", "graph6"}))
      ->capture_default_str();
  app.add_flag("--json", opt.json, "Emit JSON");
  app.add_option("--seed", opt.seed, "Seed for random families")->capture_default_str();

  auto file_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", opt.file, "Graph file, '-' for stdin")->required();
    return sub;
  };
  auto* solve = file_cmd("solve", "Find a nowhere-zero Z3-flow, contracting irrelevant edges as needed");
  auto* sparse = file_cmd("sparse", "One pass of the sparse algorithm: flow, no flow, or an irrelevant edge");
  auto* oracle = file_cmd("oracle", "Exhaustive search of the flow space");
  auto* critical = file_cmd("critical", "Certify Z3-flow-criticality");
  auto* bounds = file_cmd("bounds", "Density and structure checks for a critical graph");
  auto* irrelevant = file_cmd("irrelevant", "Report an irrelevant edge found by one sparse pass, or none");
  auto* gen = app.add_subcommand("gen", "Generate a graph: k2 | k4 | petersen | wheel S | k33e N | kab A B | random N M | random-min3 N M");
  gen->add_option("NAME", opt.family)->required();
  gen->add_option("PARAMS", opt.params);
  auto* surv = app.add_subcommand("survey", "Exhaustive census of small critical graphs");
  surv->add_option("--max-n", opt.max_n, "Largest vertex count")->capture_default_str();
  surv->add_flag("--multigraph", opt.multigraph, "Include multigraphs with up to 3 parallel edges (n <= 3)");
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (sparse->parsed()) return cmd_sparse(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (critical->parsed()) return cmd_critical(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (irrelevant->parsed()) return cmd_irrelevant(opt);
    if (gen->parsed()) return cmd_gen(opt);
    if (surv->parsed()) return cmd_survey(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const OracleTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
