#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ifds/bits.hpp"
#include "ifds/summarizer.hpp"
#include "ifds/tree_index.hpp"

namespace ifds {

/// One packed bit string per (local vertex, fact), each starting on a word
/// boundary. Strings of one vertex share a length.
class PackedStrings {
 public:
  PackedStrings() = default;
  /// bits_per_vertex[v] is the length of each of the `facts` strings of v.
  PackedStrings(const std::vector<std::uint32_t>& bits_per_vertex, std::size_t facts);

  std::size_t vertex_count() const { return bits_.size(); }
  std::size_t fact_count() const { return facts_; }
  std::uint32_t length(std::uint32_t v) const { return bits_[v]; }
  const std::vector<std::uint32_t>& lengths() const { return bits_; }
  /// Reassembles strings from their lengths and pool (index file reader).
  static PackedStrings from_parts(const std::vector<std::uint32_t>& bits_per_vertex, std::size_t facts,
                                  std::vector<Word> pool);

  std::span<Word> get(std::uint32_t v, FactIndex d) {
    return {pool_.data() + offset_[v] + static_cast<std::size_t>(d) * stride_[v], stride_[v]};
  }
  std::span<const Word> get(std::uint32_t v, FactIndex d) const {
    return {pool_.data() + offset_[v] + static_cast<std::size_t>(d) * stride_[v], stride_[v]};
  }

  std::size_t word_count() const { return pool_.size(); }
  const std::vector<Word>& pool() const { return pool_; }
  std::vector<Word>& pool() { return pool_; }

  bool operator==(const PackedStrings&) const = default;

 private:
  std::size_t facts_ = 1;
  std::vector<std::uint32_t> bits_;
  std::vector<std::uint32_t> stride_;
  std::vector<std::uint64_t> offset_;
  std::vector<Word> pool_;
};

/// Local reachability of bag b read from GHat: an (m*|D*|) x (m*|D*|) matrix,
/// row/column slot * |D*| + d, reflexive pairs included.
BitMatrix bag_closure(const GHat& g, const ProcedureTree& tree, VertexId first, std::uint32_t b);

struct LocalStats {
  std::uint64_t bag_passes = 0;
  std::uint64_t added_blocks = 0;  // vertex pairs that received new edges
};

/// Local reachability by leaf peeling over the tree of procedure p: each bag
/// gets an all-pairs pass in post-order, then again in reverse order on the
/// way back (the root only once). New edges are written into g, after which
/// every co-bagged pair of exploded vertices is joined by an edge iff it is
/// reachable.
LocalStats compute_local(GHat& g, const ProcedureTree& tree, VertexId first);

/// Ancestor reachability. For local vertex u with root bag b_u, the string
/// forward.get(u, d1) has delta(b_u) * |D*| bits; the segment of ancestor a
/// starts at bit (delta(b_u) - delta(a)) * |D*| and holds bit slot * |D*| + d2
/// for (bag(a)[slot], d2) reachable from (u, d1). backward is the same for
/// vertices reaching (u, d1).
struct AncestorSets {
  PackedStrings forward;
  PackedStrings backward;
  /// With keep_all: per bag, strings indexed by slot instead of vertex.
  std::vector<PackedStrings> bag_forward;
  std::vector<PackedStrings> bag_backward;
};

AncestorSets compute_ancestors(const GHat& g, const ProcedureTree& tree, VertexId first, bool keep_all = false);

/// Descendant reachability. The string of (u, d1) has alpha(u) * |D*| bits;
/// bit (position(v) - beta(u)) * |D*| + d2 is set for (v, d2) reachable from
/// (u, d1) along vertices rooted below rootbag(u).
PackedStrings compute_descendants(const GHat& g, const ProcedureTree& tree, VertexId first);

}  // namespace ifds
