#include "ifds/baselines.hpp"

#include <chrono>
#include <string>

#include "ifds/exploded.hpp"

namespace ifds {

namespace {

GHat fresh_ghat(const Instance& inst) {
  const ExplodedGraph eg(inst);
  return GHat(inst, compute_summaries(inst, eg));
}

void check_ids(const Instance& inst, VertexId v, FactIndex d) {
  if (v >= inst.vertex_count() || d >= inst.fact_count())
    throw InstanceError("query names an unknown vertex or fact");
}

}  // namespace

bool nopp_pair(const Instance& inst, VertexId u, FactIndex d1, VertexId v, FactIndex d2) {
  check_ids(inst, u, d1);
  check_ids(inst, v, d2);
  if (inst.proc_of[u] != inst.proc_of[v]) return false;
  const auto reach = nopp_source(inst, u, d1);
  return reach.test(inst.local_index(v) * inst.fact_count() + d2);
}

BitString nopp_source(const Instance& inst, VertexId u, FactIndex d1) {
  check_ids(inst, u, d1);
  return reachable_in_ghat(inst, fresh_ghat(inst), u, d1);
}

CppTable CppTable::build(const Instance& inst, const CppOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t P = inst.fact_count();
  CppTable t;
  t.inst_ = &inst;
  t.facts_ = P;
  std::uint64_t total = 0;
  t.row_offset_.resize(inst.vertex_count() * P);
  for (const auto& proc : inst.procedures) {
    const std::size_t xs = static_cast<std::size_t>(proc.size) * P;
    const auto words = static_cast<std::uint32_t>(words_for(xs));
    t.row_words_.push_back(words);
    for (std::size_t i = 0; i < xs; ++i) {
      t.row_offset_[proc.first * P + i] = total;
      total += words;
    }
  }
  if (total * sizeof(Word) > opts.memory_budget_bytes)
    throw BudgetExceeded("complete table needs " + std::to_string(total * sizeof(Word)) + " bytes, budget is " +
                         std::to_string(opts.memory_budget_bytes));
  t.rows_.assign(total, 0);

  const GHat g = fresh_ghat(inst);
  for (ProcId p = 0; p < inst.procedures.size(); ++p) {
    const auto& proc = inst.procedures[p];
    for (VertexId v = proc.first; v < proc.first + proc.size; ++v) {
      for (FactIndex d = 0; d < P; ++d) {
        const BitString row = reachable_in_ghat(inst, g, v, d);
        std::ranges::copy(row.words(), t.rows_.begin() + static_cast<std::ptrdiff_t>(t.row_offset_[v * P + d]));
      }
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (s > opts.time_budget_s)
        throw BudgetExceeded("complete preprocessing exceeded the time budget of " +
                             std::to_string(opts.time_budget_s) + " s");
    }
  }
  return t;
}

bool CppTable::pair(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const {
  check_ids(*inst_, u, d1);
  check_ids(*inst_, v, d2);
  if (inst_->proc_of[u] != inst_->proc_of[v]) return false;
  const std::span<const Word> row(rows_.data() + row_offset_[u * facts_ + d1], row_words_[inst_->proc_of[u]]);
  return bits::test(row, inst_->local_index(v) * facts_ + d2);
}

BitString CppTable::source(VertexId u, FactIndex d1) const {
  check_ids(*inst_, u, d1);
  const auto& proc = inst_->procedure_of(u);
  BitString out(static_cast<std::size_t>(proc.size) * facts_);
  const auto* row = rows_.data() + row_offset_[u * facts_ + d1];
  std::copy(row, row + row_words_[inst_->proc_of[u]], out.words().begin());
  return out;
}

const BitString& OdCache::reach(VertexId u, FactIndex d1) {
  check_ids(*inst_, u, d1);
  const std::uint64_t key = static_cast<std::uint64_t>(u) * inst_->fact_count() + d1;
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++stats_.hits;
    return it->second;
  }
  if (!ghat_) {
    ghat_ = std::make_unique<GHat>(fresh_ghat(*inst_));
    stats_.summaries_ready = true;
  }
  ++stats_.searches;
  return cache_.emplace(key, reachable_in_ghat(*inst_, *ghat_, u, d1)).first->second;
}

bool OdCache::pair(VertexId u, FactIndex d1, VertexId v, FactIndex d2) {
  check_ids(*inst_, v, d2);
  check_ids(*inst_, u, d1);
  if (inst_->proc_of[u] != inst_->proc_of[v]) return false;
  return reach(u, d1).test(inst_->local_index(v) * inst_->fact_count() + d2);
}

BitString OdCache::source(VertexId u, FactIndex d1) { return reach(u, d1); }

}  // namespace ifds
