#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifds/instance.hpp"

namespace ifds {

/// Simple undirected graph over dense vertex ids 0..n-1 (sorted adjacency,
/// no loops, no parallel edges).
struct UndirectedGraph {
  std::vector<std::vector<std::uint32_t>> adj;

  UndirectedGraph() = default;
  explicit UndirectedGraph(std::size_t n) : adj(n) {}

  std::size_t size() const { return adj.size(); }
  void add_edge(std::uint32_t a, std::uint32_t b);
  /// Sorts and deduplicates the adjacency lists; call after add_edge.
  void finalize();
  bool adjacent(std::uint32_t a, std::uint32_t b) const;
};

/// Undirected view of the flow graph of one procedure over local indices.
UndirectedGraph flow_graph(const Instance& inst, ProcId p);

/// Rooted tree of bags. Bag contents are local vertex ids; parent of the root
/// is -1.
struct TreeDecomposition {
  std::vector<std::vector<std::uint32_t>> bags;
  std::vector<std::int32_t> parent;
  std::uint32_t root = 0;

  std::size_t size() const { return bags.size(); }
  /// Largest bag size minus one.
  std::size_t width() const;
  /// Depth of the deepest bag, the root having depth 0.
  std::size_t height() const;
  std::vector<std::vector<std::uint32_t>> children() const;
  std::vector<std::uint32_t> depths() const;
};

enum class EliminationHeuristic { MinFill, MinDegree };

/// Tree decomposition from a greedy elimination ordering. Bags that are
/// contained in a neighbouring bag are merged away.
TreeDecomposition decompose(const UndirectedGraph& g,
                            EliminationHeuristic heuristic = EliminationHeuristic::MinFill);

/// Builds a decomposition directly from bags and parent links (tests, tools).
TreeDecomposition from_bags(std::vector<std::vector<std::uint32_t>> bags, std::vector<std::int32_t> parent);

/// Checks vertex coverage, edge coverage and connectivity of every vertex's
/// bags, plus that the parent links form one tree. Returns an empty string if
/// everything holds, otherwise a description of the first problem.
std::string validate_decomposition(const UndirectedGraph& g, const TreeDecomposition& td);

struct CutReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

/// For up to `samples` tree edges {b, parent(b)} (all of them if samples is 0)
/// checks that V(b) & V(parent) separates the vertices seen only below b from
/// the vertices seen only outside that subtree.
CutReport verify_cut_property(const UndirectedGraph& g, const TreeDecomposition& td, std::size_t samples = 0,
                              std::uint64_t seed = 1);

}  // namespace ifds
