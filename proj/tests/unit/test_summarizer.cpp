#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "ifds/exploded.hpp"
#include "ifds/summarizer.hpp"
#include "oracles.hpp"

using namespace ifds;

namespace {

struct Built {
  Instance inst;
  ExplodedGraph eg;
  SummarySet sums;
  GHat g;
  explicit Built(Instance i) : inst(std::move(i)), eg(inst), sums(compute_summaries(inst, eg)), g(inst, sums) {}
};

std::vector<char> to_chars(const BitString& b) {
  std::vector<char> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = b.test(i);
  return out;
}

}  // namespace

TEST_CASE("pointer example summaries") {
  const Built b(fixtures::pointer_example());
  const auto x = b.inst.domain.index_of("x");
  CHECK(b.sums.summaries == std::vector<SummaryEdge>{{0, 0, 0}, {0, x, x}});
  CHECK(dump_summaries(b.inst, b.sums) == "summary c7 0 r7 0\nsummary c7 x r7 x\n");
  const auto y = b.inst.domain.index_of("y");
  CHECK(b.g.has_edge(b.inst.vertex("c7"), y, b.inst.vertex("r7"), y));
  CHECK(b.g.has_edge(b.inst.vertex("c7"), x, b.inst.vertex("r7"), x));
  CHECK_FALSE(b.g.has_edge(b.inst.vertex("c7"), x, b.inst.vertex("v1"), x));
}

TEST_CASE("reachability in GHat on the pointer example") {
  const Built b(fixtures::pointer_example());
  const auto& inst = b.inst;
  const auto x = inst.domain.index_of("x"), y = inst.domain.index_of("y");
  const auto r = reachable_in_ghat(inst, b.g, inst.vertex("v5"), 0);
  const auto P = inst.fact_count();
  const auto v8 = inst.local_index(inst.vertex("v8"));
  CHECK(r.test(v8 * P + x));
  CHECK(r.test(v8 * P + y));
  CHECK(r.count() == 14);
  const auto at_exit = reachable_in_ghat(inst, b.g, inst.vertex("v9"), y);
  CHECK(at_exit.count() == 1);
  CHECK(at_exit.test(inst.local_index(inst.vertex("v9")) * P + y));
}

TEST_CASE("no call sites: GHat is the exploded graph") {
  const Built b(fixtures::cycle_example());
  CHECK(b.sums.summaries.empty());
  CHECK(b.g.edge_count() == b.eg.edge_count());
}

TEST_CASE("GHat reachability equals CFL reachability on random instances") {
  for (std::size_t k = 0; k < 100; ++k) {
    CAPTURE(k);
    const Built b(fixtures::small_instance(11, k));
    const auto& inst = b.inst;
    const oracle::CflOracle cfl(inst);
    const std::size_t P = inst.fact_count();
    for (VertexId u = 0; u < inst.vertex_count(); ++u)
      for (FactIndex d = 0; d < P; ++d) CHECK(to_chars(reachable_in_ghat(inst, b.g, u, d)) == cfl.source(u, d));

    // summaries: matched call and return around a balanced path in the callee
    std::set<SummaryEdge> want;
    for (std::uint32_t c = 0; c < inst.calls.size(); ++c) {
      const auto& cs = inst.calls[c];
      const auto& callee = inst.procedures[cs.callee];
      for (auto [d3, ds] : inst.relations[cs.call_to_start].pairs())
        for (auto [de, d4] : inst.relations[cs.exit_to_return].pairs())
          if (cfl.reach(callee.start, ds, callee.exit, de)) want.insert({c, d3, d4});
    }
    CHECK(std::set<SummaryEdge>(b.sums.summaries.begin(), b.sums.summaries.end()) == want);
    CHECK(b.sums.summaries.size() <= inst.calls.size() * P * P);

    // shortcut edges are exactly the same-context facts reachable from the start
    for (VertexId v = 0; v < inst.vertex_count(); ++v) {
      const auto s = inst.procedures[inst.proc_of[v]].start;
      if (v == s) continue;
      for (FactIndex d1 = 0; d1 < P; ++d1)
        for (FactIndex d2 = 0; d2 < P; ++d2) CHECK(b.sums.is_shortcut(v, d1, d2) == cfl.reach(s, d1, v, d2));
    }
  }
}

TEST_CASE("pairing loop is bounded by the squared bandwidth") {
  for (std::size_t k = 0; k < 60; ++k) {
    const Built b(fixtures::small_instance(12, k));
    const auto bw = max_bandwidth(b.inst);
    CHECK(validate_bandwidth(b.inst, bw).empty());
    CHECK(b.sums.stats.max_pairing_trips <= bw * bw);
  }
}

TEST_CASE("reachable_in_ghat equals the closure of GHat") {
  for (std::size_t k = 0; k < 40; ++k) {
    const Built b(fixtures::small_instance(13, k));
    const auto& inst = b.inst;
    const std::size_t P = inst.fact_count();
    for (ProcId p = 0; p < inst.procedures.size(); ++p) {
      const auto reach = oracle::closure(oracle::ghat_adjacency(inst, b.g, p));
      const auto& proc = inst.procedures[p];
      for (VertexId u = proc.first; u < proc.first + proc.size; ++u)
        for (FactIndex d = 0; d < P; ++d)
          CHECK(to_chars(reachable_in_ghat(inst, b.g, u, d)) == reach[(u - proc.first) * P + d]);
    }
  }
}

TEST_CASE("self-recursive procedure terminates") {
  const char* text = R"({"domain": ["a"], "procedures": [
    {"name": "p", "start": "s", "exit": "e", "vertices": ["s", "c", "r", "e"],
     "edges": [{"from": "s", "to": "c"}, {"from": "c", "to": "r"}, {"from": "r", "to": "e"}, {"from": "s", "to": "e"}]}],
    "calls": [{"call": "c", "returnSite": "r", "callee": "p"}],
    "flow": [{"from": "s", "to": "c", "rel": [["0", "0"], ["0", "a"]]},
             {"from": "c", "to": "r", "rel": [["0", "0"], ["a", "a"]]},
             {"from": "r", "to": "e", "rel": [["0", "0"], ["a", "a"]]},
             {"from": "s", "to": "e", "rel": [["0", "0"]]},
             {"from": "c", "to": "s", "rel": [["0", "0"], ["a", "a"]]},
             {"from": "e", "to": "r", "rel": [["0", "0"], ["a", "a"]]}]})";
  const Built b(parse_instance(text));
  const oracle::CflOracle cfl(b.inst);
  const auto a = b.inst.domain.index_of("a");
  CHECK(b.sums.summaries == std::vector<SummaryEdge>{{0, 0, 0}, {0, 0, a}});
  CHECK(cfl.reach(b.inst.vertex("s"), 0, b.inst.vertex("e"), a));
}
