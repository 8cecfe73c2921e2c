#include "ifds/exploded.hpp"

namespace ifds {

ExplodedGraph::ExplodedGraph(const Instance& inst) : facts_(inst.fact_count()) {
  const std::size_t nx = inst.vertex_count() * facts_;
  offsets_.assign(nx + 1, 0);
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    const auto& rel = inst.relations[e];
    for (FactIndex a = 0; a < facts_; ++a) offsets_[id(inst.edges[e].from, a) + 1] += rel.out_degree(a);
  }
  for (std::size_t x = 0; x < nx; ++x) offsets_[x + 1] += offsets_[x];
  targets_.resize(offsets_[nx]);
  edge_of_.resize(offsets_[nx]);
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    const Edge& edge = inst.edges[e];
    const auto& rel = inst.relations[e];
    for (FactIndex a = 0; a < facts_; ++a) {
      const auto row = rel.row(a);
      for (FactIndex b = 0; b < facts_; ++b) {
        if (!bits::test(row, b)) continue;
        const auto pos = cursor[id(edge.from, a)]++;
        targets_[pos] = id(edge.to, b);
        edge_of_[pos] = e;
      }
    }
  }
}

}  // namespace ifds
