#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ifds/instance.hpp"
#include "oracles.hpp"

using namespace ifds;

namespace {

std::vector<VertexId> path_of(const Instance& inst, std::initializer_list<const char*> names) {
  std::vector<VertexId> out;
  for (auto n : names) out.push_back(inst.vertex(n));
  return out;
}

const char* kSingleton = R"({"domain": [], "procedures": [{"name": "p", "start": "a", "exit": "a",
  "vertices": ["a"], "edges": []}], "calls": [], "flow": []})";

}  // namespace

TEST_CASE("pointer example parses into two procedures") {
  const auto inst = fixtures::pointer_example();
  CHECK(inst.procedures.size() == 2);
  CHECK(inst.vertex_count() == 10);
  CHECK(inst.calls.size() == 1);
  const auto c2s = inst.find_edge(inst.vertex("c7"), inst.vertex("v1"));
  const auto e2r = inst.find_edge(inst.vertex("v4"), inst.vertex("r7"));
  REQUIRE(c2s);
  REQUIRE(e2r);
  CHECK(inst.edges[*c2s].kind == EdgeKind::CallToStart);
  CHECK(inst.edges[*e2r].kind == EdgeKind::ExitToReturn);
  CHECK(inst.edges[*inst.find_edge(inst.vertex("c7"), inst.vertex("r7"))].kind == EdgeKind::CallToReturn);
}

TEST_CASE("singleton procedure is accepted") {
  const auto inst = parse_instance(kSingleton);
  CHECK(inst.vertex_count() == 1);
  CHECK(inst.procedures[0].start == inst.procedures[0].exit);
}

TEST_CASE("malformed instances are rejected") {
  CHECK_THROWS_AS(parse_instance(R"({"domain": [], "procedures": [{"name": "f", "start": "a",
    "vertices": ["a"], "edges": []}], "calls": [], "flow": []})"),
                  InstanceError);
  CHECK_THROWS_AS(parse_instance("{not json"), InstanceError);
  // dangling vertex
  CHECK_THROWS_AS(parse_instance(R"({"domain": [], "procedures": [{"name": "f", "start": "a", "exit": "a",
    "vertices": ["a"], "edges": [{"from": "a", "to": "b"}]}], "calls": [], "flow": []})"),
                  InstanceError);
  // missing relation
  CHECK_THROWS_AS(parse_instance(R"({"domain": [], "procedures": [{"name": "f", "start": "a", "exit": "b",
    "vertices": ["a", "b"], "edges": [{"from": "a", "to": "b"}]}], "calls": [], "flow": []})"),
                  InstanceError);
  // call to an unknown procedure
  CHECK_THROWS_AS(parse_instance(R"({"domain": [], "procedures": [{"name": "f", "start": "a", "exit": "b",
    "vertices": ["a", "b"], "edges": [{"from": "a", "to": "b"}]}],
    "calls": [{"call": "a", "returnSite": "b", "callee": "g"}], "flow": []})"),
                  InstanceError);
  // fact outside the domain
  CHECK_THROWS_AS(parse_instance(R"({"domain": ["x"], "procedures": [{"name": "f", "start": "a", "exit": "b",
    "vertices": ["a", "b"], "edges": [{"from": "a", "to": "b"}]}], "calls": [],
    "flow": [{"from": "a", "to": "b", "rel": [["0", "0"], ["z", "z"]]}]})"),
                  InstanceError);
}

TEST_CASE("bandwidth reports") {
  const auto inst = fixtures::pointer_example();
  CHECK(validate_bandwidth(inst, 3).empty());
  CHECK(max_bandwidth(inst) == 1);
  CHECK(validate_bandwidth(FlowRelation::identity(5), 1).empty());
  const auto fan = FlowRelation::from_pairs(5, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const auto v = validate_bandwidth(fan, 3);
  REQUIRE(v.size() == 1);
  CHECK(v[0].fact == 0);
  CHECK(v[0].side == BandwidthViolation::Side::Source);
  CHECK(v[0].degree == 5);
}

TEST_CASE("valid path grammar on the pointer example") {
  const auto inst = fixtures::pointer_example();
  const auto full = path_of(inst, {"v5", "v6", "c7", "v1", "v2", "v3", "v4", "r7", "v8"});
  CHECK(is_same_context_valid(inst, full));
  CHECK(is_interprocedurally_valid(inst, full));
  CHECK(is_same_context_valid(inst, std::vector<VertexId>{}));
  CHECK(is_same_context_valid(inst, path_of(inst, {"v5"})));
  const auto open = path_of(inst, {"c7", "v1", "v2"});
  CHECK_FALSE(is_same_context_valid(inst, open));
  CHECK(is_interprocedurally_valid(inst, open));
  CHECK_FALSE(is_interprocedurally_valid(inst, path_of(inst, {"v3", "v4", "r7"})));
  CHECK_THROWS_AS(is_same_context_valid(inst, path_of(inst, {"v5", "v8"})), InstanceError);
}

TEST_CASE("round trip through JSON") {
  for (std::size_t k = 0; k < 30; ++k) {
    const auto inst = fixtures::small_instance(5, k);
    const auto again = parse_instance(to_json(inst));
    CHECK(again == inst);
    CHECK(to_json(again) == to_json(inst));
  }
  const auto p = fixtures::pointer_example();
  CHECK(parse_instance(to_json(p, 2)) == p);
}

TEST_CASE("two interprocedural edges per call site") {
  for (std::size_t k = 0; k < 30; ++k) {
    const auto inst = fixtures::small_instance(6, k);
    std::size_t inter = 0;
    for (const auto& e : inst.edges) inter += is_interprocedural(e.kind);
    CHECK(inter == 2 * inst.calls.size());
  }
}

TEST_CASE("grammar agrees with a stack simulation on random walks") {
  std::mt19937_64 rng(23);
  std::size_t checked = 0, same_true = 0;
  for (std::size_t k = 0; checked < 1000; ++k) {
    const auto inst = fixtures::small_instance(7, k, {30, 1, 6, 0.35});
    std::vector<std::vector<VertexId>> succ(inst.vertex_count());
    for (const auto& e : inst.edges) succ[e.from].push_back(e.to);
    for (int w = 0; w < 50; ++w) {
      std::vector<VertexId> path{static_cast<VertexId>(rng() % inst.vertex_count())};
      const std::size_t len = rng() % 25;
      while (path.size() <= len && !succ[path.back()].empty())
        path.push_back(succ[path.back()][rng() % succ[path.back()].size()]);
      const bool sc = is_same_context_valid(inst, path);
      CHECK(sc == oracle::stack_valid(inst, path, true));
      CHECK(is_interprocedurally_valid(inst, path) == oracle::stack_valid(inst, path, false));
      same_true += sc;
      ++checked;
    }
  }
  CHECK(same_true > 0);
  CHECK(same_true < checked);
}
