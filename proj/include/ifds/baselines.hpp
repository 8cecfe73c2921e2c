#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ifds/bits.hpp"
#include "ifds/instance.hpp"
#include "ifds/summarizer.hpp"

namespace ifds {

/// Source answers of the baselines use the local layout: bit
/// local(v) * |D*| + d over the procedure of the source.

/// No preprocessing: every query recomputes summaries and runs one search.
bool nopp_pair(const Instance& inst, VertexId u, FactIndex d1, VertexId v, FactIndex d2);
BitString nopp_source(const Instance& inst, VertexId u, FactIndex d1);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CppOptions {
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
  double time_budget_s = 300.0;
};

/// Complete preprocessing: summaries plus the full reachability table of
/// every procedure, one search per exploded vertex.
class CppTable {
 public:
  /// Throws BudgetExceeded when the table would not fit in the memory budget
  /// or the build runs past the time budget.
  static CppTable build(const Instance& inst, const CppOptions& opts = {});

  bool pair(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const;
  BitString source(VertexId u, FactIndex d1) const;
  std::size_t byte_size() const { return rows_.size() * sizeof(Word); }

 private:
  const Instance* inst_ = nullptr;
  std::size_t facts_ = 1;
  std::vector<std::uint64_t> row_offset_;  // per exploded vertex, word offset of its row
  std::vector<std::uint32_t> row_words_;   // per procedure
  std::vector<Word> rows_;
};

struct OdStats {
  std::uint64_t searches = 0;  // reachability searches actually run
  std::uint64_t hits = 0;      // queries answered from the cache
  bool summaries_ready = false;
};

/// On-demand evaluation that remembers the reachable set of every source it
/// has searched from. Summaries are computed on first use. Never evicts.
class OdCache {
 public:
  explicit OdCache(const Instance& inst) : inst_(&inst) {}

  bool pair(VertexId u, FactIndex d1, VertexId v, FactIndex d2);
  BitString source(VertexId u, FactIndex d1);
  const OdStats& stats() const { return stats_; }

 private:
  const BitString& reach(VertexId u, FactIndex d1);

  const Instance* inst_;
  std::unique_ptr<GHat> ghat_;
  std::unordered_map<std::uint64_t, BitString> cache_;
  OdStats stats_;
};

}  // namespace ifds
