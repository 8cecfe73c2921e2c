#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ifds/instance.hpp"

namespace ifds {

/// Exploded vertex id of (v, d) is v * |D*| + d.
using XVertex = std::uint32_t;

/// Exploded supergraph in CSR form. Successor lists follow edge id order and,
/// within one edge, target fact order.
class ExplodedGraph {
 public:
  ExplodedGraph() = default;
  explicit ExplodedGraph(const Instance& inst);

  std::size_t fact_count() const { return facts_; }
  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  XVertex id(VertexId v, FactIndex d) const { return static_cast<XVertex>(v * facts_ + d); }
  VertexId vertex_of(XVertex x) const { return static_cast<VertexId>(x / facts_); }
  FactIndex fact_of(XVertex x) const { return static_cast<FactIndex>(x % facts_); }

  std::span<const XVertex> successors(XVertex x) const {
    return {targets_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  /// Supergraph edge of each successor, parallel to successors(x).
  std::span<const EdgeId> successor_edges(XVertex x) const {
    return {edge_of_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }

 private:
  std::size_t facts_ = 1;
  std::vector<std::uint64_t> offsets_;
  std::vector<XVertex> targets_;
  std::vector<EdgeId> edge_of_;
};

}  // namespace ifds
