#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "ifds/balance.hpp"
#include "ifds/lca.hpp"
#include "ifds/tree_decomposition.hpp"
#include "ifds/tree_index.hpp"

using namespace ifds;

namespace {

double log_bound(std::size_t bags) { return 4.0 * std::log2(static_cast<double>(std::max<std::size_t>(2, bags))); }

UndirectedGraph graph_of(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  UndirectedGraph g;
  g.adj.resize(n);
  for (auto [a, b] : edges) g.add_edge(a, b);
  g.finalize();
  return g;
}

std::vector<std::uint32_t> subtree_vertices(const TreeDecomposition& td, std::uint32_t root, bool inside) {
  const auto ch = td.children();
  std::vector<char> in(td.size(), 0);
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const auto b = stack.back();
    stack.pop_back();
    in[b] = 1;
    for (auto c : ch[b]) stack.push_back(c);
  }
  std::set<std::uint32_t> out;
  for (std::uint32_t b = 0; b < td.size(); ++b)
    if (static_cast<bool>(in[b]) == inside) out.insert(td.bags[b].begin(), td.bags[b].end());
  return {out.begin(), out.end()};
}

// Flood fill from the inside of edge {b, parent(b)} with the separator removed.
bool separates(const UndirectedGraph& g, const TreeDecomposition& td, std::uint32_t b) {
  const auto p = static_cast<std::uint32_t>(td.parent[b]);
  std::set<std::uint32_t> sep;
  for (auto v : td.bags[b])
    if (std::find(td.bags[p].begin(), td.bags[p].end(), v) != td.bags[p].end()) sep.insert(v);
  std::vector<char> seen(g.size(), 0);
  std::vector<std::uint32_t> stack;
  for (auto v : subtree_vertices(td, b, true))
    if (!sep.count(v)) {
      seen[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : g.adj[v])
      if (!seen[w] && !sep.count(w)) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  for (auto v : subtree_vertices(td, b, false))
    if (!sep.count(v) && seen[v]) return false;
  return true;
}

std::uint32_t naive_lca(const std::vector<std::int32_t>& parent, std::uint32_t a, std::uint32_t b) {
  std::set<std::uint32_t> up;
  for (std::int32_t x = static_cast<std::int32_t>(a); x >= 0; x = parent[x]) up.insert(static_cast<std::uint32_t>(x));
  for (std::int32_t x = static_cast<std::int32_t>(b); x >= 0; x = parent[x])
    if (up.count(static_cast<std::uint32_t>(x))) return static_cast<std::uint32_t>(x);
  return ~0u;
}

void check_tree_invariants(const ProcedureTree& t) {
  for (std::uint32_t b = 0; b < t.bag_count(); ++b) {
    if (b > 0) CHECK(t.parent(b) >= 0);
    if (t.parent(b) >= 0) {
      const auto p = static_cast<std::uint32_t>(t.parent(b));
      CHECK(p < b);
      CHECK(t.depth(b) == t.depth(p) + 1);
      CHECK(t.delta(b) == t.delta(p) + t.bag(b).size());
    } else {
      CHECK(t.delta(b) == t.bag(b).size());
    }
    for (auto v : t.bag(b)) {
      CHECK(t.depth(t.root_bag(v)) <= t.depth(b));
      CHECK(t.is_ancestor(t.root_bag(v), b));
    }
  }
  for (std::uint32_t v = 0; v < t.vertex_count(); ++v) {
    const auto rb = t.root_bag(v);
    CHECK(t.slot(rb, v) != kNone);
    CHECK(t.vertex_at(t.position(v)) == v);
    // vertices rooted in the subtree of rb occupy [beta, beta + alpha)
    for (std::uint32_t w = 0; w < t.vertex_count(); ++w) {
      const bool below = t.is_ancestor(rb, t.root_bag(w));
      const bool in_range = t.position(w) >= t.beta(v) && t.position(w) < t.beta(v) + t.alpha(v);
      CHECK(below == in_range);
    }
  }
}

}  // namespace

TEST_CASE("heuristic width on the seven-vertex graph") {
  const auto inst = fixtures::cycle_example();
  const auto g = flow_graph(inst, 0);
  const auto td = decompose(g);
  CHECK(validate_decomposition(g, td).empty());
  CHECK(td.width() <= 2);
}

TEST_CASE("single vertex and cycles") {
  const auto one = decompose(graph_of(1, {}));
  CHECK(one.size() == 1);
  CHECK(one.width() == 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ring;
  for (std::uint32_t i = 0; i < 10; ++i) ring.emplace_back(i, (i + 1) % 10);
  const auto g = graph_of(10, ring);
  const auto td = decompose(g);
  CHECK(validate_decomposition(g, td).empty());
  CHECK(td.width() <= 2);
  const auto md = decompose(g, EliminationHeuristic::MinDegree);
  CHECK(validate_decomposition(g, md).empty());
  CHECK(md.width() <= 2);
}

TEST_CASE("validator rejects broken decompositions") {
  const auto g = flow_graph(fixtures::cycle_example(), 0);
  auto td = fixtures::cycle_tree().as_decomposition();
  CHECK(validate_decomposition(g, td).empty());
  auto missing_edge = td;
  missing_edge.bags[3] = {1, 5};  // v7 lost
  CHECK_FALSE(validate_decomposition(g, missing_edge).empty());
  auto disconnected = td;
  disconnected.bags[2].push_back(0);  // v1 in b1 and b3 but not b2
  CHECK_FALSE(validate_decomposition(g, disconnected).empty());
}

TEST_CASE("balancing a long path decomposition") {
  const std::uint32_t n = 1026;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::vector<std::uint32_t>> bags;
  std::vector<std::int32_t> parent;
  for (std::uint32_t i = 0; i + 2 < n; ++i) {
    edges.emplace_back(i, i + 1);
    edges.emplace_back(i, i + 2);
    bags.push_back({i, i + 1, i + 2});
    parent.push_back(static_cast<std::int32_t>(i) - 1);
  }
  const auto g = graph_of(n, edges);
  const auto path = from_bags(bags, parent);
  REQUIRE(path.size() == 1024);
  CHECK(validate_decomposition(g, path).empty());
  BalanceReport rep;
  const auto bal = balance_binarize(path, {}, &rep);
  CHECK(validate_decomposition(g, bal).empty());
  CHECK(bal.height() <= 40);
  CHECK(bal.width() <= 11);
  CHECK(rep.rebuilt);
  for (const auto& ch : bal.children()) CHECK(ch.size() <= 2);
}

TEST_CASE("balancing small trees") {
  const auto g = flow_graph(fixtures::cycle_example(), 0);
  const auto td = fixtures::cycle_tree().as_decomposition();
  const auto bal = balance_binarize(td);
  CHECK(validate_decomposition(g, bal).empty());
  CHECK(bal.width() <= 4 * 2 + 3);
  const auto single = from_bags({{0, 1, 2}}, {-1});
  const auto same = balance_binarize(single);
  CHECK(same.size() == 1);
  CHECK(same.bags[0] == single.bags[0]);
}

TEST_CASE("binarize keeps validity and bounds children") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    // star-shaped decomposition of a star graph
    const std::uint32_t leaves = 2 + rng() % 20;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> bags{{0}};
    std::vector<std::int32_t> parent{-1};
    for (std::uint32_t i = 1; i <= leaves; ++i) {
      edges.emplace_back(0, i);
      bags.push_back({0, i});
      parent.push_back(0);
    }
    const auto g = graph_of(leaves + 1, edges);
    const auto bin = binarize(from_bags(bags, parent));
    CHECK(validate_decomposition(g, bin).empty());
    for (const auto& ch : bin.children()) CHECK(ch.size() <= 2);
  }
}

TEST_CASE("lca on the seven-vertex tree") {
  const auto t = fixtures::cycle_tree();
  CHECK(t.lca(2, 3) == 1);
  CHECK(t.lca(3, 2) == 1);
  for (std::uint32_t b = 0; b < 4; ++b) CHECK(t.lca(b, b) == b);
  CHECK(t.lca(0, 3) == 0);
}

TEST_CASE("lca equals the naive walk on random trees") {
  std::mt19937_64 rng(5);
  std::vector<std::int32_t> parent{-1};
  for (std::uint32_t b = 1; b < 500; ++b) parent.push_back(static_cast<std::int32_t>(rng() % b));
  const LcaIndex idx(parent);
  for (int q = 0; q < 1000; ++q) {
    const auto a = static_cast<std::uint32_t>(rng() % 500), b = static_cast<std::uint32_t>(rng() % 500);
    CHECK(idx.lca(a, b) == naive_lca(parent, a, b));
  }
  const auto again = LcaIndex::from_tables(idx.tables());
  for (int q = 0; q < 200; ++q) {
    const auto a = static_cast<std::uint32_t>(rng() % 500), b = static_cast<std::uint32_t>(rng() % 500);
    CHECK(again.lca(a, b) == idx.lca(a, b));
  }
}

TEST_CASE("cut property on the seven-vertex tree") {
  const auto g = flow_graph(fixtures::cycle_example(), 0);
  const auto td = fixtures::cycle_tree().as_decomposition();
  // edge {b2, b4}: separator {v2}
  std::vector<std::uint32_t> sep;
  for (auto v : td.bags[3])
    if (std::find(td.bags[1].begin(), td.bags[1].end(), v) != td.bags[1].end()) sep.push_back(v);
  CHECK(sep == std::vector<std::uint32_t>{1});
  CHECK(separates(g, td, 3));
  const auto rep = verify_cut_property(g, td);
  CHECK(rep.checked == 3);
  CHECK(rep.failures == 0);
}

TEST_CASE("root bags of the seven-vertex tree") {
  const auto t = fixtures::cycle_tree();
  check_tree_invariants(t);
  CHECK(t.root_bag(1) == 0);  // v2 first appears in b1
  CHECK(t.root_bag(2) == 1);
  CHECK(t.root_bag(3) == 2);
  CHECK(t.root_bag(5) == 3);
  CHECK(t.delta(3) == 9);
}

TEST_CASE("procedure trees of random instances") {
  for (std::size_t k = 0; k < 50; ++k) {
    CAPTURE(k);
    const auto inst = fixtures::small_instance(17, k, {200, 2, 60, 0.05});
    for (ProcId p = 0; p < inst.procedures.size(); ++p) {
      const auto g = flow_graph(inst, p);
      TreeStats st;
      const auto t = build_procedure_tree(inst, p, {}, &st);
      const auto td = t.as_decomposition();
      CHECK(validate_decomposition(g, td).empty());
      CHECK(t.width() <= 4 * st.raw_width + 3);
      CHECK(static_cast<double>(t.height()) <= log_bound(t.bag_count()));
      check_tree_invariants(t);
      const auto rep = verify_cut_property(g, td, 50, k);
      CHECK(rep.failures == 0);
      std::mt19937_64 rng(k);
      for (int s = 0; s < 20 && t.bag_count() > 1; ++s) {
        const auto b = static_cast<std::uint32_t>(1 + rng() % (t.bag_count() - 1));
        CHECK(separates(g, td, b));
      }
    }
  }
}

TEST_CASE("rebuilding from pre-order tables") {
  const auto inst = fixtures::small_instance(19, 3, {120, 2, 120, 0.0});
  const auto t = build_procedure_tree(inst, 0);
  std::vector<std::vector<std::uint32_t>> bags;
  std::vector<std::int32_t> parent;
  for (std::uint32_t b = 0; b < t.bag_count(); ++b) {
    bags.emplace_back(t.bag(b).begin(), t.bag(b).end());
    parent.push_back(t.parent(b));
  }
  const auto again = ProcedureTree::from_preorder(bags, parent, t.vertex_count(), t.lca_index().tables());
  for (std::uint32_t v = 0; v < t.vertex_count(); ++v) {
    CHECK(again.root_bag(v) == t.root_bag(v));
    CHECK(again.position(v) == t.position(v));
  }
  if (bags.size() > 1) {
    auto bad = parent;
    bad[0] = 1;
    bad[1] = -1;
    CHECK_THROWS(ProcedureTree::from_preorder(bags, bad, t.vertex_count(), t.lca_index().tables()));
  }
}
