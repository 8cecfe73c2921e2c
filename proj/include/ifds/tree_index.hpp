#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ifds/lca.hpp"
#include "ifds/tree_decomposition.hpp"

namespace ifds {

/// Final per-procedure tree: bags renumbered in pre-order (first child before
/// second), root bags, depths, ancestor size sums and the vertex positions
/// used by the descendant strings. Vertices are positioned by the pre-order
/// rank of their root bag, ties broken by local vertex id, so the vertices
/// rooted in any subtree occupy one contiguous range of positions.
class ProcedureTree {
 public:
  ProcedureTree() = default;
  /// td must be binary (at most two children per bag).
  ProcedureTree(const TreeDecomposition& td, std::size_t vertex_count);
  /// Rebuilds from pre-ordered bags and parents plus stored LCA tables.
  static ProcedureTree from_preorder(std::vector<std::vector<std::uint32_t>> bags,
                                     std::vector<std::int32_t> parent, std::size_t vertex_count,
                                     LcaIndex::Tables lca);

  std::size_t bag_count() const { return parent_.size(); }
  std::size_t vertex_count() const { return root_bag_.size(); }

  std::span<const std::uint32_t> bag(std::uint32_t b) const {
    return {bag_vertices_.data() + bag_offsets_[b], bag_offsets_[b + 1] - bag_offsets_[b]};
  }
  std::int32_t parent(std::uint32_t b) const { return parent_[b]; }
  /// k-th child (k = 0 or 1) or kNone.
  std::uint32_t child(std::uint32_t b, int k) const { return children_[2 * b + k]; }
  std::uint32_t depth(std::uint32_t b) const { return depth_[b]; }
  /// Sum of |V(a)| over the ancestors a of b, b included.
  std::uint32_t delta(std::uint32_t b) const { return delta_[b]; }
  /// One past the last bag of the subtree of b (pre-order numbering).
  std::uint32_t subtree_end(std::uint32_t b) const { return subtree_end_[b]; }
  bool is_ancestor(std::uint32_t a, std::uint32_t b) const { return a <= b && b < subtree_end_[a]; }
  std::uint32_t ancestor_at_depth(std::uint32_t b, std::uint32_t depth) const;

  std::uint32_t root_bag(std::uint32_t v) const { return root_bag_[v]; }
  std::uint32_t position(std::uint32_t v) const { return position_[v]; }
  std::uint32_t vertex_at(std::uint32_t pos) const { return order_[pos]; }
  const std::vector<std::uint32_t>& order() const { return order_; }
  /// First position of the vertices rooted in bags >= b; valid for b up to bag_count().
  std::uint32_t pos_begin(std::uint32_t b) const { return pos_begin_[b]; }
  /// Number of vertices rooted in the subtree of rootbag(v).
  std::uint32_t alpha(std::uint32_t v) const {
    const auto rb = root_bag_[v];
    return pos_begin_[subtree_end_[rb]] - pos_begin_[rb];
  }
  std::uint32_t beta(std::uint32_t v) const { return pos_begin_[root_bag_[v]]; }

  /// Index of v in bag b, or kNone.
  std::uint32_t slot(std::uint32_t b, std::uint32_t v) const;

  std::uint32_t lca(std::uint32_t a, std::uint32_t b) const { return lca_.lca(a, b); }
  const LcaIndex& lca_index() const { return lca_; }

  std::size_t width() const;
  std::size_t height() const;
  TreeDecomposition as_decomposition() const;

 private:
  void derive(std::size_t vertex_count);

  std::vector<std::uint32_t> bag_offsets_{0};
  std::vector<std::uint32_t> bag_vertices_;
  std::vector<std::int32_t> parent_;
  std::vector<std::uint32_t> children_;
  std::vector<std::uint32_t> depth_, delta_, subtree_end_;
  std::vector<std::uint32_t> root_bag_, position_, order_, pos_begin_;
  LcaIndex lca_;
};

struct TreeOptions {
  EliminationHeuristic heuristic = EliminationHeuristic::MinFill;
  /// Procedures larger than this use min-degree elimination instead.
  std::size_t min_fill_limit = 20000;
  double skip_factor = 2.0;
  bool force_rebuild = false;
};

struct TreeStats {
  std::size_t raw_width = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t bags = 0;
  bool rebuilt = false;
};

/// Decompose, balance and binarize the flow graph of one procedure.
ProcedureTree build_procedure_tree(const Instance& inst, ProcId p, const TreeOptions& opts = {},
                                   TreeStats* stats = nullptr);

}  // namespace ifds
