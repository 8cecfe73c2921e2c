#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ifds/baselines.hpp"
#include "ifds/bench.hpp"
#include "ifds/exploded.hpp"
#include "ifds/generators.hpp"
#include "ifds/index_io.hpp"
#include "ifds/queries.hpp"
#include "ifds/query_index.hpp"
#include "ifds/summarizer.hpp"
#include "ifds/thread_pool.hpp"
#include "ifds/tree_index.hpp"

using namespace ifds;

namespace {

double parse_seconds(std::string s) {
  if (!s.empty() && s.back() == 's') s.pop_back();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || used == 0 || v <= 0) throw std::invalid_argument("bad duration \"" + s + "\"");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Local-layout baseline answer re-laid out like the index answers.
SourceAnswer relayout(const QueryIndex& ix, VertexId u, const BitString& local) {
  const Instance& inst = ix.instance();
  const ProcId p = inst.proc_of[u];
  const auto& tree = ix.procedure(p).tree;
  const std::size_t P = inst.fact_count();
  SourceAnswer a(p, inst.procedures[p].first, P, &tree);
  local.for_each_set([&](std::size_t i) { a.bits().set(tree.position(static_cast<std::uint32_t>(i / P)) * P + i % P); });
  return a;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IFDS same-context reachability: preprocessing, queries and benchmarks"};
  app.require_subcommand(1);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "Build a query index for an instance");
  std::string pre_instance, pre_out;
  std::size_t width_cap = 10, bandwidth = 3;
  bool pre_stats = false;
  pre->add_option("--instance", pre_instance, "Instance JSON")->required();
  pre->add_option("--out", pre_out, "Index file to write")->required();
  pre->add_option("--width-cap", width_cap, "Warn when a procedure decomposition is wider")->capture_default_str();
  pre->add_option("--bandwidth", bandwidth, "Bandwidth bound checked on call and return relations")
      ->capture_default_str();
  pre->add_flag("--stats", pre_stats, "Print preprocessing statistics");

  // query
  auto* qry = app.add_subcommand("query", "Answer queries from a query file");
  std::string q_index, q_queries, baseline = "tw";
  std::size_t par = 1;
  qry->add_option("--index", q_index, "Index file")->required();
  qry->add_option("--queries", q_queries, "Query file")->required();
  qry->add_option("--par", par, "Threads per query")->capture_default_str()->check(CLI::PositiveNumber);
  qry->add_option("--baseline", baseline, "Algorithm answering the queries")
      ->check(CLI::IsMember({"tw", "nopp", "cpp", "od"}))
      ->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string kind = "random", g_out;
  std::uint64_t g_seed = 1;
  std::size_t g_n = 100, g_domain = 2, width_bound = 4, proc_size = 60;
  double call_density = 0.05;
  gen->add_option("--kind", kind, "random, reach, poss-uninit, simp-uninit, live, reach-defs or pointer-example")
      ->capture_default_str();
  gen->add_option("--seed", g_seed, "Seed (IFDS_SEED overrides)")->capture_default_str();
  gen->add_option("--n", g_n, "Approximate number of vertices")->capture_default_str();
  gen->add_option("--domain", g_domain, "Number of facts")->capture_default_str();
  gen->add_option("--width-bound", width_bound, "random: largest accepted width, 0 disables")->capture_default_str();
  gen->add_option("--proc-size", proc_size, "Approximate vertices per procedure")->capture_default_str();
  gen->add_option("--call-density", call_density, "Chance that a statement is a call")->capture_default_str();
  gen->add_option("--out", g_out, "Instance file to write")->required();

  // gen-queries
  auto* gq = app.add_subcommand("gen-queries", "Generate random queries for an instance");
  std::string gq_instance, gq_out;
  std::size_t gq_pairs = 10000, gq_sources = 100;
  std::uint64_t gq_seed = 1;
  gq->add_option("--instance", gq_instance, "Instance JSON")->required();
  gq->add_option("--pairs", gq_pairs)->capture_default_str();
  gq->add_option("--sources", gq_sources)->capture_default_str();
  gq->add_option("--seed", gq_seed, "Seed (IFDS_SEED overrides)")->capture_default_str();
  gq->add_option("--out", gq_out, "Query file to write")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Time the index against the baselines");
  std::string b_instance, algos = "tw,cpp,od,nopp", budget = "300s", csv, plot;
  BenchOptions bo;
  bench->add_option("--instance", b_instance, "Instance JSON")->required();
  bench->add_option("--pairs", bo.pairs)->capture_default_str();
  bench->add_option("--sources", bo.sources)->capture_default_str();
  bench->add_option("--algos", algos, "Comma separated subset of tw,nopp,cpp,od")->capture_default_str();
  bench->add_option("--threads", bo.threads)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--budget", budget, "Time budget per baseline, e.g. 300s")->capture_default_str();
  bench->add_option("--nopp-limit", bo.nopp_limit, "Queries of each kind run by nopp")->capture_default_str();
  bench->add_option("--seed", bo.seed, "Query seed (IFDS_SEED overrides)")->capture_default_str();
  bench->add_option("--csv", csv, "CSV file to write (stdout if omitted)");
  bench->add_option("--plot", plot, "gnuplot script to write next to the CSV");

  // decomposition dump
  auto* dec = app.add_subcommand("decomposition", "Print the balanced tree decomposition of a procedure");
  std::string d_instance, d_proc;
  dec->add_option("--instance", d_instance, "Instance JSON")->required();
  dec->add_option("--proc", d_proc, "Procedure name (default: all)");

  // summary dump
  auto* sum = app.add_subcommand("summaries", "Print the summary edges of an instance");
  std::string s_instance;
  sum->add_option("--instance", s_instance, "Instance JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pre) {
      auto inst = std::make_shared<const Instance>(load_instance(pre_instance));
      PreprocessOptions opts;
      opts.width_cap = width_cap;
      opts.bandwidth = bandwidth;
      PreprocessStats st;
      const QueryIndex ix = QueryIndex::build(inst, opts, &st);
      save_index(ix, pre_out);
      for (const auto& w : st.warnings) std::cerr << "warning: " << w << '\n';
      if (pre_stats) {
        std::cout << "vertices " << inst->vertex_count() << "\nfacts " << inst->fact_count() << "\nsummaries "
                  << st.summaries << "\nmax_width " << st.max_width << "\nmax_height " << st.max_height << "\nbags "
                  << st.bags << "\nindex_words " << st.index_words << "\nms_summaries " << st.ms_summaries
                  << "\nms_trees " << st.ms_trees << "\nms_local " << st.ms_local << "\nms_ancestors "
                  << st.ms_ancestors << "\nms_descendants " << st.ms_descendants << "\nms_total " << st.ms_total
                  << '\n';
      }
    } else if (*qry) {
      const QueryIndex ix = load_index(q_index);
      const Instance& inst = ix.instance();
      const auto queries = load_queries(inst, q_queries);
      ThreadPool pool(par);
      std::optional<CppTable> cpp;
      std::unique_ptr<OdCache> od;
      if (baseline == "cpp") cpp.emplace(CppTable::build(inst));
      if (baseline == "od") od = std::make_unique<OdCache>(inst);
      for (const auto& q : queries) {
        if (q.kind == Query::Kind::Pair) {
          bool a = false;
          if (baseline == "tw")
            a = par > 1 ? ix.pair_parallel(q.u, q.d1, q.v, q.d2, pool, par) : ix.pair(q.u, q.d1, q.v, q.d2);
          else if (baseline == "nopp")
            a = nopp_pair(inst, q.u, q.d1, q.v, q.d2);
          else if (baseline == "cpp")
            a = cpp->pair(q.u, q.d1, q.v, q.d2);
          else
            a = od->pair(q.u, q.d1, q.v, q.d2);
          std::cout << (a ? 1 : 0) << '\n';
        } else {
          SourceAnswer a;
          if (baseline == "tw")
            a = par > 1 ? ix.source_parallel(q.u, q.d1, pool, par) : ix.source(q.u, q.d1);
          else if (baseline == "nopp")
            a = relayout(ix, q.u, nopp_source(inst, q.u, q.d1));
          else if (baseline == "cpp")
            a = relayout(ix, q.u, cpp->source(q.u, q.d1));
          else
            a = relayout(ix, q.u, od->source(q.u, q.d1));
          std::cout << format_source_answer(inst, a) << '\n';
        }
      }
    } else if (*gen) {
      const std::uint64_t seed = seed_from_env(g_seed);
      Instance inst;
      if (kind == "pointer-example") {
        inst = gen_analysis(pointer_example(), AnalysisKind::PossUninit);
      } else if (kind == "random") {
        RandomOptions ro;
        ro.seed = seed;
        ro.n = g_n;
        ro.domain = g_domain;
        ro.width_bound = width_bound;
        ro.call_density = call_density;
        ro.proc_size = proc_size;
        inst = gen_random(ro);
      } else {
        inst = gen_random_analysis(parse_analysis_kind(kind), seed, g_n, g_domain, proc_size, call_density);
      }
      save_instance(inst, g_out);
    } else if (*gq) {
      const Instance inst = load_instance(gq_instance);
      std::string text;
      for (const auto& q : generate_queries(inst, gq_pairs, gq_sources, seed_from_env(gq_seed)))
        text += format_query(inst, q) + '\n';
      write_text(gq_out, text);
    } else if (*bench) {
      const Instance inst = load_instance(b_instance);
      bo.instance_id = b_instance;
      bo.algos = split_commas(algos);
      bo.budget_s = parse_seconds(budget);
      bo.seed = seed_from_env(bo.seed);
      const auto records = bench_run(inst, bo);
      if (csv.empty()) {
        write_csv(std::cout, records);
      } else {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot write " + csv);
        write_csv(out, records);
      }
      if (!plot.empty()) write_text(plot, gnuplot_script(csv.empty() ? "bench.csv" : csv, plot + ".png"));
    } else if (*dec) {
      const Instance inst = load_instance(d_instance);
      for (ProcId p = 0; p < inst.procedures.size(); ++p) {
        const auto& proc = inst.procedures[p];
        if (!d_proc.empty() && proc.name != d_proc) continue;
        const auto tree = build_procedure_tree(inst, p);
        std::cout << "procedure " << proc.name << " bags " << tree.bag_count() << " width " << tree.width()
                  << " height " << tree.height() << '\n';
        for (std::uint32_t b = 0; b < tree.bag_count(); ++b) {
          std::cout << "bag " << b << " parent=" << tree.parent(b) << " depth=" << tree.depth(b) << " {";
          bool first = true;
          for (auto v : tree.bag(b)) {
            std::cout << (first ? "" : " ") << inst.vertex_names[proc.first + v];
            first = false;
          }
          std::cout << "}\n";
        }
      }
    } else if (*sum) {
      const Instance inst = load_instance(s_instance);
      const ExplodedGraph eg(inst);
      std::cout << dump_summaries(inst, compute_summaries(inst, eg));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
