// Acceptance checks c1..c9. Each prints one line "cN PASS|FAIL <details>".
// Usage: acceptance [--criterion cN]   (no argument runs all of them)

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "ifds/balance.hpp"
#include "ifds/baselines.hpp"
#include "ifds/exploded.hpp"
#include "ifds/generators.hpp"
#include "ifds/index_io.hpp"
#include "ifds/mini_program.hpp"
#include "ifds/queries.hpp"
#include "ifds/query_index.hpp"
#include "ifds/reach_index.hpp"
#include "ifds/summarizer.hpp"
#include "oracles.hpp"

using namespace ifds;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return xs[xs.size() / 2];
}

std::shared_ptr<const Instance> share(Instance inst) { return std::make_shared<const Instance>(std::move(inst)); }

PreprocessOptions quiet() {
  PreprocessOptions o;
  o.bandwidth = 0;
  return o;
}

// ---- c1 / c9: pointer example ----

struct PointerChecks {
  bool summaries = false;
  std::vector<bool> pairs;
};

PointerChecks pointer_checks(const QueryIndex& ix) {
  const auto& inst = ix.instance();
  const ExplodedGraph eg(inst);
  const auto sums = compute_summaries(inst, eg);
  const auto x = inst.domain.index_of("x"), y = inst.domain.index_of("y");
  PointerChecks c;
  c.summaries = sums.summaries == std::vector<SummaryEdge>{{0, 0, 0}, {0, x, x}};
  const auto v = [&](const char* n) { return inst.vertex(n); };
  c.pairs = {ix.pair(v("v5"), 0, v("v8"), x), ix.pair(v("v5"), 0, v("v8"), y), ix.pair(v("v1"), y, v("v4"), y),
             ix.pair(v("c7"), y, v("v8"), x)};
  return c;
}

bool pointer_ok(const PointerChecks& c) {
  return c.summaries && c.pairs == std::vector<bool>{true, true, false, false};
}

std::string pointer_detail(const PointerChecks& c) {
  std::string s = c.summaries ? "summaries ok, pairs" : "summaries WRONG, pairs";
  for (bool b : c.pairs) s += b ? " 1" : " 0";
  return s;
}

Result c1() {
  const auto t0 = Clock::now();
  const auto ix = QueryIndex::build(share(gen_analysis(pointer_example(), AnalysisKind::PossUninit)), quiet());
  const auto c = pointer_checks(ix);
  const double ms = ms_since(t0);
  return {pointer_ok(c) && ms < 1000.0, pointer_detail(c) + fmt(" (expected 1 1 0 0), %.1f ms (limit 1000)", ms)};
}

Result c9() {
  const auto ix = QueryIndex::build(share(gen_analysis(pointer_example(), AnalysisKind::PossUninit)), quiet());
  const auto bytes = serialize_index(ix);
  const auto back = deserialize_index(bytes);
  const auto before = pointer_checks(ix), after = pointer_checks(back);
  bool same = serialize_index(back) == bytes;
  const auto& inst = ix.instance();
  for (VertexId u = 0; u < inst.vertex_count(); ++u)
    for (FactIndex d = 0; d < inst.fact_count(); ++d) same &= ix.source(u, d) == back.source(u, d);
  const bool ok = pointer_ok(after) && after.pairs == before.pairs && same;
  return {ok, fmt("%zu bytes, ", bytes.size()) + pointer_detail(after) +
                  (same ? ", all source answers identical" : ", answers DIFFER")};
}

// ---- c2 / c3: small random family ----

constexpr std::size_t kSmallCount = 200;
constexpr std::uint64_t kSmallSeed = 2;

Result c2() {
  const auto t0 = Clock::now();
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t k = 0; k < kSmallCount; ++k) {
    const auto inst = fixtures::small_instance(kSmallSeed, k);
    const oracle::CflOracle cfl(inst);
    const auto ix = QueryIndex::build(share(inst), quiet());
    const auto cpp = CppTable::build(inst);
    OdCache od(inst);
    const std::size_t P = inst.fact_count();
    for (VertexId u = 0; u < inst.vertex_count(); ++u) {
      const auto& proc = inst.procedure_of(u);
      for (FactIndex d1 = 0; d1 < P; ++d1)
        for (VertexId v = proc.first; v < proc.first + proc.size; ++v)
          for (FactIndex d2 = 0; d2 < P; ++d2) {
            const bool want = cfl.reach(u, d1, v, d2);
            const bool ok = ix.pair(u, d1, v, d2) == want && nopp_pair(inst, u, d1, v, d2) == want &&
                            cpp.pair(u, d1, v, d2) == want && od.pair(u, d1, v, d2) == want;
            ++checked;
            if (!ok && ++mismatches <= 3)
              std::cerr << "c2 mismatch: instance " << k << " pair " << inst.vertex_names[u] << ' ' << d1 << ' '
                        << inst.vertex_names[v] << ' ' << d2 << '\n';
          }
    }
  }
  const double s = ms_since(t0) / 1000.0;
  return {mismatches == 0 && s < 120.0,
          fmt("%zu instances, %zu pair queries, %zu mismatches, %.1f s (limit 120)", kSmallCount, checked,
              mismatches, s)};
}

Result c3() {
  std::size_t procs = 0, mismatches = 0;
  for (std::size_t k = 0; k < kSmallCount; ++k) {
    fixtures::Prepared pr(fixtures::small_instance(kSmallSeed, k));
    pr.run_local();
    const std::size_t P = pr.inst.fact_count();
    for (ProcId p = 0; p < pr.inst.procedures.size(); ++p) {
      const auto& t = pr.trees[p];
      const auto first = pr.inst.procedures[p].first;
      const auto anc = compute_ancestors(pr.g, t, first, true);
      const auto desc = compute_descendants(pr.g, t, first);
      const bool ok =
          oracle::decode_ancestors(t, P, anc.bag_forward) == oracle::reference_ancestors(t, P, pr.reach[p], false) &&
          oracle::decode_ancestors(t, P, anc.bag_backward) == oracle::reference_ancestors(t, P, pr.reach[p], true) &&
          oracle::decode_descendants(t, P, desc) == oracle::reference_descendants(t, P, pr.reach[p]);
      ++procs;
      if (!ok) {
        ++mismatches;
        std::cerr << "c3 mismatch: instance " << k << " procedure " << p << '\n';
      }
    }
  }
  return {mismatches == 0, fmt("%zu procedures over %zu instances, %zu mismatches", procs, kSmallCount, mismatches)};
}

// ---- c4 ----

Result c4() {
  std::size_t sources = 0, mismatches = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    const auto ix = QueryIndex::build(share(fixtures::small_instance(4, k, {200, 3, 40, 0.1})), quiet());
    const auto& inst = ix.instance();
    const std::size_t P = inst.fact_count();
    for (VertexId u = 0; u < inst.vertex_count(); ++u)
      for (FactIndex d1 = 0; d1 < P; ++d1) {
        const auto ans = ix.source(u, d1);
        const auto& proc = inst.procedure_of(u);
        std::size_t hits = 0;
        bool ok = true;
        for (VertexId v = proc.first; v < proc.first + proc.size; ++v)
          for (FactIndex d2 = 0; d2 < P; ++d2) {
            const bool p = ix.pair(u, d1, v, d2);
            hits += p;
            ok &= p == ans.test(v, d2);
          }
        ok &= hits == ans.count();
        ++sources;
        mismatches += !ok;
      }
  }
  return {mismatches == 0, fmt("50 instances, %zu source queries, %zu mismatches", sources, mismatches)};
}

// ---- c5 ----

Result c5() {
  const auto cyc = fixtures::cycle_example();
  const auto cyc_width = decompose(flow_graph(cyc, 0)).width();
  std::size_t trees = 0, height_bad = 0, width_bad = 0, cut_checked = 0, cut_bad = 0, invalid = 0;
  auto check = [&](const Instance& inst) {
    for (ProcId p = 0; p < inst.procedures.size(); ++p) {
      const auto g = flow_graph(inst, p);
      const auto raw = decompose(g);
      const auto bal = balance_binarize(raw);
      ++trees;
      const double bound = 4.0 * std::log2(static_cast<double>(bal.size()));
      if (static_cast<double>(bal.height()) > bound + 1e-9) ++height_bad;
      if (bal.width() > 4 * raw.width() + 3) ++width_bad;
      if (!validate_decomposition(g, bal).empty()) ++invalid;
      const auto rep = verify_cut_property(g, bal, 50, p + 1);
      cut_checked += rep.checked;
      cut_bad += rep.failures;
    }
  };
  for (std::size_t k = 0; k < kSmallCount; ++k) check(fixtures::small_instance(kSmallSeed, k));
  for (std::size_t k = 0; k < 50; ++k) check(fixtures::small_instance(4, k, {200, 3, 40, 0.1}));
  for (std::uint64_t s = 1; s <= 10; ++s) {
    RandomOptions o;
    o.seed = s;
    o.n = 5000;
    o.domain = 2;
    o.proc_size = 1000;
    check(gen_random(o));
  }
  const bool ok = cyc_width <= 2 && height_bad == 0 && width_bad == 0 && cut_bad == 0 && invalid == 0;
  return {ok, fmt("seven-vertex width %zu (limit 2); %zu trees: %zu over height bound, %zu over width bound, "
                  "%zu invalid; cut property %zu/%zu edges ok",
                  cyc_width, trees, height_bad, width_bad, invalid, cut_checked - cut_bad, cut_checked)};
}

// ---- c6 / c7: scaling family ----

RandomOptions family(std::size_t n) {
  RandomOptions o;
  o.seed = 6;
  o.n = n;
  o.domain = 4;
  o.width_bound = 4;
  o.proc_size = 2000;
  o.call_density = 0.05;
  return o;
}

struct FamilyPoint {
  std::size_t n = 0;
  double pre_ms = 0;
  double pair_median_us = 0;
  double pair_mean_us = 0;
};

FamilyPoint measure(std::size_t n, std::size_t runs, std::size_t pairs) {
  const auto inst = share(gen_random(family(n)));
  FamilyPoint pt;
  pt.n = inst->vertex_count();
  std::vector<double> pre;
  std::optional<QueryIndex> ix;
  for (std::size_t r = 0; r < runs; ++r) {
    PreprocessStats st;
    ix = QueryIndex::build(inst, quiet(), &st);
    pre.push_back(st.ms_total);
  }
  pt.pre_ms = median(pre);
  const auto qs = generate_queries(*inst, pairs, 0, 7);
  std::vector<double> us;
  std::size_t yes = 0;
  for (const auto& q : qs) {
    const auto t = Clock::now();
    yes += ix->pair(q.u, q.d1, q.v, q.d2);
    us.push_back(std::chrono::duration<double, std::micro>(Clock::now() - t).count());
  }
  pt.pair_median_us = median(us);
  pt.pair_mean_us = std::accumulate(us.begin(), us.end(), 0.0) / static_cast<double>(us.size());
  std::cerr << fmt("c6 n=%zu preprocess median %.1f ms, pair median %.3f us (%zu true)\n", pt.n, pt.pre_ms,
                   pt.pair_median_us, yes);
  return pt;
}

Result c6() {
  std::vector<FamilyPoint> pts;
  for (std::size_t n : {20000, 40000, 80000}) pts.push_back(measure(n, 3, 10000));
  const double r1 = pts[1].pre_ms / pts[0].pre_ms, r2 = pts[2].pre_ms / pts[1].pre_ms;
  double lo = pts[0].pair_median_us, hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.pair_median_us);
    hi = std::max(hi, p.pair_median_us);
  }
  const double spread = hi / lo;
  const bool ok = r1 >= 1.5 && r1 <= 3.0 && r2 >= 1.5 && r2 <= 3.0 && spread < 3.0;
  return {ok, fmt("preprocess %.0f / %.0f / %.0f ms, doubling ratios %.2f and %.2f (range [1.5, 3.0]); "
                  "median pair latency spread %.2fx (limit 3)",
                  pts[0].pre_ms, pts[1].pre_ms, pts[2].pre_ms, r1, r2, spread)};
}

Result c7() {
  const auto inst = share(gen_random(family(80000)));
  PreprocessStats st;
  const auto t0 = Clock::now();
  const auto ix = QueryIndex::build(inst, quiet(), &st);
  const double tw_pre = ms_since(t0);

  const auto qs = generate_queries(*inst, 10000, 0, 7);
  std::vector<char> ref(qs.size());
  auto t = Clock::now();
  for (std::size_t i = 0; i < qs.size(); ++i) ref[i] = ix.pair(qs[i].u, qs[i].d1, qs[i].v, qs[i].d2);
  const double tw_us = std::chrono::duration<double, std::micro>(Clock::now() - t).count() / qs.size();

  constexpr std::size_t kNopp = 5;
  bool agree = true;
  t = Clock::now();
  for (std::size_t i = 0; i < kNopp; ++i)
    agree &= nopp_pair(*inst, qs[i].u, qs[i].d1, qs[i].v, qs[i].d2) == static_cast<bool>(ref[i]);
  const double nopp_us = std::chrono::duration<double, std::micro>(Clock::now() - t).count() / kNopp;

  CppOptions co;
  co.time_budget_s = 300.0;
  bool timeout = false;
  double cpp_ms = 0;
  t = Clock::now();
  try {
    const auto cpp = CppTable::build(*inst, co);
    cpp_ms = ms_since(t);
    for (std::size_t i = 0; i < qs.size(); ++i)
      agree &= cpp.pair(qs[i].u, qs[i].d1, qs[i].v, qs[i].d2) == static_cast<bool>(ref[i]);
  } catch (const BudgetExceeded& e) {
    timeout = true;
    cpp_ms = ms_since(t);
    std::cerr << "c7 cpp: " << e.what() << '\n';
  }
  const double nopp_ratio = nopp_us / tw_us;
  const double cpp_ratio = cpp_ms / tw_pre;
  const bool ok = agree && nopp_ratio >= 100.0 && (timeout || cpp_ratio >= 5.0);
  return {ok, fmt("n=%zu: tw preprocess %.0f ms, tw pair mean %.3f us; NOPP pair mean %.0f us (%.0fx, need 100x); "
                  "CPP build %.0f ms%s (%.1fx, need 5x)%s",
                  inst->vertex_count(), tw_pre, tw_us, nopp_us, nopp_ratio, cpp_ms, timeout ? " TIMEOUT" : "",
                  cpp_ratio, agree ? "" : "; answers DIFFER")};
}

// ---- c8 ----

Result c8() {
  RandomOptions o = family(50000);
  o.seed = 8;
  o.domain = 8;
  const auto inst = share(gen_random(o));
  const auto ix = QueryIndex::build(inst, quiet());
  const auto qs = generate_queries(*inst, 0, 100, 9);
  constexpr std::size_t kThreads = 12;
  ThreadPool pool(kThreads);

  std::vector<SourceAnswer> one, batch(qs.size()), inner;
  auto t = Clock::now();
  for (const auto& q : qs) one.push_back(ix.source(q.u, q.d1));
  const double seq_ms = ms_since(t);

  // the batch split over the workers, one query at a time per worker
  t = Clock::now();
  pool.run(kThreads, [&](std::size_t w) {
    for (std::size_t i = w; i < qs.size(); i += kThreads) batch[i] = ix.source(qs[i].u, qs[i].d1);
  });
  const double batch_ms = ms_since(t);

  // each query split over the workers
  t = Clock::now();
  for (const auto& q : qs) inner.push_back(ix.source_parallel(q.u, q.d1, pool, kThreads));
  const double inner_ms = ms_since(t);

  const bool same = one == batch && one == inner;
  const double speedup = seq_ms / batch_ms;
  return {same && speedup >= 6.0,
          fmt("n=%zu |D|=8, 100 sources on %u hardware threads: 1 thread %.1f ms, 12 threads %.1f ms, "
              "speedup %.2fx (need 6x); per-query parallel variant %.1f ms (%.2fx); answers %s",
              inst->vertex_count(), std::thread::hardware_concurrency(), seq_ms, batch_ms, speedup, inner_ms,
              seq_ms / inner_ms, same ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string which;
  app.add_option("--criterion", which, "c1..c9; all when omitted");
  CLI11_PARSE(app, argc, argv);

  const std::map<std::string, std::function<Result()>> all{{"c1", c1}, {"c2", c2}, {"c3", c3},
                                                           {"c4", c4}, {"c5", c5}, {"c6", c6},
                                                           {"c7", c7}, {"c8", c8}, {"c9", c9}};
  if (!which.empty() && !all.count(which)) {
    std::cerr << "unknown criterion " << which << '\n';
    return 2;
  }
  int failed = 0;
  for (const auto& [name, fn] : all) {
    if (!which.empty() && name != which) continue;
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    std::cout << name << (r.pass ? " PASS " : " FAIL ") << r.detail << std::endl;
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
