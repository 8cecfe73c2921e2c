#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ifds/bits.hpp"
#include "ifds/exploded.hpp"
#include "ifds/instance.hpp"

namespace ifds {

/// Summary edge ((c, d3), (r, d4)) of a call site (c, r).
struct SummaryEdge {
  std::uint32_t call_site = 0;
  FactIndex d3 = 0;
  FactIndex d4 = 0;

  bool operator==(const SummaryEdge&) const = default;
  auto operator<=>(const SummaryEdge&) const = default;
};

struct SummaryStats {
  std::uint64_t iterations = 0;       // edges taken from the worklist
  std::uint64_t edges_added = 0;      // final size of the edge set of H
  std::uint64_t shortcuts = 0;
  std::uint64_t max_pairing_trips = 0;  // largest (d3,d4) loop of one pairing step
};

struct SummarySet {
  std::vector<SummaryEdge> summaries;  // sorted, no duplicates
  SummaryStats stats;
  std::size_t facts = 1;
  std::vector<Word> shortcut_bits;  // bit (v * |D*| + d1) * |D*| + d2

  /// ((s_p, d1), (v, d2)) is a shortcut edge, p being the procedure of v.
  bool is_shortcut(VertexId v, FactIndex d1, FactIndex d2) const {
    return bits::test(shortcut_bits, (static_cast<std::size_t>(v) * facts + d1) * facts + d2);
  }
};

/// Worklist computation of summary and shortcut edges.
SummarySet compute_summaries(const Instance& inst, const ExplodedGraph& eg);

/// Text dump, one `summary c d3 r d4` line per summary edge.
std::string dump_summaries(const Instance& inst, const SummarySet& s);

/// Exploded graph with summaries added and interprocedural edges removed.
/// Edges are grouped in blocks: the block of a vertex pair (u, v) holds the
/// |D*| x |D*| fact relation, bit d1 * |D*| + d2. Edges can be added later
/// (local reachability edges); nothing is ever removed.
class GHat {
 public:
  GHat() = default;
  GHat(const Instance& inst, const SummarySet& summaries);

  std::size_t fact_count() const { return facts_; }
  std::size_t vertex_count() const { return neighbors_.size(); }
  std::size_t block_words() const { return block_words_; }
  std::size_t block_count() const { return keys_used_; }

  const Word* block(VertexId u, VertexId v) const;
  bool has_edge(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const;
  /// ORs a block of bits into (u, v); returns true if any bit was new.
  bool add_block(VertexId u, VertexId v, const Word* bits);
  void add_edge(VertexId u, FactIndex d1, VertexId v, FactIndex d2);

  std::span<const VertexId> neighbors(VertexId u) const { return neighbors_[u]; }
  std::size_t edge_count() const;

 private:
  std::uint32_t find_slot(std::uint64_t key) const;
  std::uint32_t insert(VertexId u, VertexId v);
  void grow();

  std::size_t facts_ = 1;
  std::size_t block_words_ = 1;
  std::vector<std::uint64_t> keys_;   // open addressing, kEmpty marks free slots
  std::vector<std::uint32_t> slots_;  // block index per key slot
  std::size_t keys_used_ = 0;
  std::vector<Word> pool_;
  std::vector<std::vector<VertexId>> neighbors_;
};

/// Forward reachable set of (u, d) inside GHat, as a bit string over the
/// exploded vertices of u's procedure (bit local(v) * |D*| + d).
BitString reachable_in_ghat(const Instance& inst, const GHat& g, VertexId u, FactIndex d);

}  // namespace ifds
