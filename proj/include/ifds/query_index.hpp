#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifds/bits.hpp"
#include "ifds/instance.hpp"
#include "ifds/reach_index.hpp"
#include "ifds/summarizer.hpp"
#include "ifds/thread_pool.hpp"
#include "ifds/tree_index.hpp"

namespace ifds {

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PreprocessOptions {
  std::size_t width_cap = 10;
  /// Bandwidth checked on interprocedural relations; 0 skips the check.
  std::size_t bandwidth = 3;
  TreeOptions tree;
};

struct PreprocessStats {
  SummaryStats summary;
  std::size_t summaries = 0;
  std::size_t max_width = 0;
  std::size_t max_height = 0;
  std::size_t bags = 0;
  std::size_t local_blocks = 0;  // vertex pairs that gained edges in the local pass
  std::size_t index_words = 0;
  double ms_summaries = 0, ms_trees = 0, ms_local = 0, ms_ancestors = 0, ms_descendants = 0, ms_total = 0;
  std::vector<std::string> warnings;
};

/// Everything one procedure needs at query time.
struct ProcedureIndex {
  ProcedureTree tree;
  PackedStrings anc_forward;
  PackedStrings anc_backward;
  PackedStrings desc;
};

/// Answer of a single-source query over the procedure of the source. Bits are
/// laid out by tree position: bit position(v) * |D*| + d (see legend()).
class SourceAnswer {
 public:
  SourceAnswer() = default;
  SourceAnswer(ProcId proc, VertexId first, std::size_t facts, const ProcedureTree* tree)
      : proc_(proc), first_(first), facts_(facts), tree_(tree), bits_(tree->vertex_count() * facts) {}

  ProcId procedure() const { return proc_; }
  std::size_t fact_count() const { return facts_; }
  const BitString& bits() const { return bits_; }
  BitString& bits() { return bits_; }

  bool test(VertexId v, FactIndex d) const;
  /// Global vertex ids in bit order.
  std::vector<VertexId> legend() const;
  /// Same answer laid out by local vertex index: bit local(v) * |D*| + d.
  BitString to_local() const;
  std::size_t count() const { return bits_.count(); }

  bool operator==(const SourceAnswer& o) const { return proc_ == o.proc_ && bits_ == o.bits_; }

 private:
  ProcId proc_ = 0;
  VertexId first_ = 0;
  std::size_t facts_ = 1;
  const ProcedureTree* tree_ = nullptr;
  BitString bits_;
};

class QueryIndex {
 public:
  QueryIndex() = default;
  QueryIndex(std::shared_ptr<const Instance> inst, std::vector<ProcedureIndex> procs)
      : inst_(std::move(inst)), procs_(std::move(procs)) {}

  /// Full preprocessing: summaries, trees, local, ancestor and descendant
  /// reachability.
  static QueryIndex build(std::shared_ptr<const Instance> inst, const PreprocessOptions& opts = {},
                          PreprocessStats* stats = nullptr);

  const Instance& instance() const { return *inst_; }
  std::shared_ptr<const Instance> instance_ptr() const { return inst_; }
  const ProcedureIndex& procedure(ProcId p) const { return procs_[p]; }
  std::size_t procedure_count() const { return procs_.size(); }

  bool pair(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const;
  SourceAnswer source(VertexId u, FactIndex d1) const;

  /// Parallel variants with k workers from pool; results equal the
  /// sequential ones.
  bool pair_parallel(VertexId u, FactIndex d1, VertexId v, FactIndex d2, ThreadPool& pool, std::size_t k) const;
  SourceAnswer source_parallel(VertexId u, FactIndex d1, ThreadPool& pool, std::size_t k) const;

  std::size_t word_count() const;

 private:
  void check(VertexId v, FactIndex d) const;

  std::shared_ptr<const Instance> inst_;
  std::vector<ProcedureIndex> procs_;
};

}  // namespace ifds
