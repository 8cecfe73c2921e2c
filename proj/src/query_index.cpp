#include "ifds/query_index.hpp"

#include <atomic>
#include <chrono>

#include "ifds/exploded.hpp"

namespace ifds {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

// Calls fn(k) for every set bit k of s[begin, end).
template <typename F>
void for_each_set(std::span<const Word> s, std::size_t begin, std::size_t end, F&& fn) {
  for (std::size_t off = begin; off < end; off += kWordBits) {
    Word x = bits::load(s, off) & bits::low_mask(end - off);
    while (x) {
      fn(off + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
}

// One "OR a slice of a descendant string into the answer" step.
struct SliceTask {
  std::span<const Word> src;
  std::size_t src_offset;
  std::size_t dst_offset;
  std::size_t len;
};

// Sets the answer bits of ancestor-reachable vertices and collects the
// descendant slices still to be ORed in.
std::vector<SliceTask> plan_source(const ProcedureIndex& pi, std::size_t P, std::uint32_t lu, FactIndex d1,
                                   std::span<Word> answer) {
  const auto& tree = pi.tree;
  const auto bu = tree.root_bag(lu);
  const auto fu = pi.anc_forward.get(lu, d1);
  std::vector<std::uint32_t> path;
  for (auto b = bu;; b = static_cast<std::uint32_t>(tree.parent(b))) {
    path.push_back(b);
    if (tree.parent(b) < 0) break;
  }
  std::vector<SliceTask> tasks;
  // Shallow to deep; the answer only grows, so any order would do.
  for (std::size_t i = path.size(); i-- > 0;) {
    const auto a = path[i];
    std::uint32_t lo = 0, hi = 0;
    if (a == bu) {
      lo = tree.pos_begin(bu);
      hi = tree.pos_begin(tree.subtree_end(bu));
    } else {
      const auto on_path = path[i - 1];
      const auto c0 = tree.child(a, 0), c1 = tree.child(a, 1);
      const auto other = c0 == on_path ? c1 : c0;
      if (other != kNone) {
        lo = tree.pos_begin(other);
        hi = tree.pos_begin(tree.subtree_end(other));
      }
    }
    const auto vs = tree.bag(a);
    const std::size_t seg = static_cast<std::size_t>(tree.delta(bu) - tree.delta(a)) * P;
    for_each_set(fu, seg, seg + vs.size() * P, [&](std::size_t k) {
      const auto w = vs[(k - seg) / P];
      const auto d2 = static_cast<FactIndex>((k - seg) % P);
      bits::set(answer, tree.position(w) * P + d2);
      if (hi > lo)
        tasks.push_back({pi.desc.get(w, d2), static_cast<std::size_t>(lo - tree.beta(w)) * P, lo * P, (hi - lo) * P});
    });
  }
  tasks.push_back({pi.desc.get(lu, d1), 0, static_cast<std::size_t>(tree.beta(lu)) * P,
                   static_cast<std::size_t>(tree.alpha(lu)) * P});
  return tasks;
}

}  // namespace

bool SourceAnswer::test(VertexId v, FactIndex d) const {
  if (v < first_ || v - first_ >= tree_->vertex_count() || d >= facts_) return false;
  return bits_.test(tree_->position(v - first_) * facts_ + d);
}

std::vector<VertexId> SourceAnswer::legend() const {
  std::vector<VertexId> out;
  out.reserve(tree_->vertex_count());
  for (auto v : tree_->order()) out.push_back(first_ + v);
  return out;
}

BitString SourceAnswer::to_local() const {
  BitString out(bits_.size());
  bits_.for_each_set([&](std::size_t k) {
    const auto v = tree_->vertex_at(static_cast<std::uint32_t>(k / facts_));
    out.set(v * facts_ + k % facts_);
  });
  return out;
}

QueryIndex QueryIndex::build(std::shared_ptr<const Instance> inst, const PreprocessOptions& opts,
                             PreprocessStats* stats) {
  PreprocessStats st;
  const auto t_all = Clock::now();
  const Instance& in = *inst;

  auto t = Clock::now();
  const ExplodedGraph eg(in);
  const SummarySet summaries = compute_summaries(in, eg);
  GHat g(in, summaries);
  st.ms_summaries = ms_since(t);
  st.summary = summaries.stats;
  st.summaries = summaries.summaries.size();

  if (opts.bandwidth > 0) {
    const auto violations = validate_bandwidth(in, opts.bandwidth);
    if (!violations.empty())
      st.warnings.push_back(std::to_string(violations.size()) + " interprocedural relation nodes exceed bandwidth " +
                            std::to_string(opts.bandwidth) + " (max degree " + std::to_string(max_bandwidth(in)) +
                            "); complexity bounds do not apply");
  }

  std::vector<ProcedureIndex> procs(in.procedures.size());
  t = Clock::now();
  for (ProcId p = 0; p < procs.size(); ++p) {
    TreeStats ts;
    procs[p].tree = build_procedure_tree(in, p, opts.tree, &ts);
    st.max_width = std::max(st.max_width, ts.width);
    st.max_height = std::max(st.max_height, ts.height);
    st.bags += ts.bags;
    if (ts.raw_width > opts.width_cap)
      st.warnings.push_back("procedure " + in.procedures[p].name + ": decomposition width " +
                            std::to_string(ts.raw_width) + " exceeds cap " + std::to_string(opts.width_cap));
  }
  st.ms_trees = ms_since(t);

  t = Clock::now();
  for (ProcId p = 0; p < procs.size(); ++p)
    st.local_blocks += compute_local(g, procs[p].tree, in.procedures[p].first).added_blocks;
  st.ms_local = ms_since(t);

  t = Clock::now();
  for (ProcId p = 0; p < procs.size(); ++p) {
    auto anc = compute_ancestors(g, procs[p].tree, in.procedures[p].first);
    procs[p].anc_forward = std::move(anc.forward);
    procs[p].anc_backward = std::move(anc.backward);
  }
  st.ms_ancestors = ms_since(t);

  t = Clock::now();
  for (ProcId p = 0; p < procs.size(); ++p) procs[p].desc = compute_descendants(g, procs[p].tree, in.procedures[p].first);
  st.ms_descendants = ms_since(t);

  QueryIndex ix(std::move(inst), std::move(procs));
  st.index_words = ix.word_count();
  st.ms_total = ms_since(t_all);
  if (stats) *stats = std::move(st);
  return ix;
}

void QueryIndex::check(VertexId v, FactIndex d) const {
  if (v >= inst_->vertex_count()) throw QueryError("unknown vertex id " + std::to_string(v));
  if (d >= inst_->fact_count()) throw QueryError("unknown fact index " + std::to_string(d));
}

bool QueryIndex::pair(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const {
  check(u, d1);
  check(v, d2);
  const ProcId p = inst_->proc_of[u];
  if (inst_->proc_of[v] != p) return false;
  const auto& pi = procs_[p];
  const auto& tree = pi.tree;
  const std::size_t P = inst_->fact_count();
  const auto lu = inst_->local_index(u), lv = inst_->local_index(v);
  const auto bu = tree.root_bag(lu), bv = tree.root_bag(lv);
  const auto b = tree.lca(bu, bv);
  return bits::intersects(pi.anc_forward.get(lu, d1), (tree.delta(bu) - tree.delta(b)) * P,
                          pi.anc_backward.get(lv, d2), (tree.delta(bv) - tree.delta(b)) * P, tree.bag(b).size() * P);
}

bool QueryIndex::pair_parallel(VertexId u, FactIndex d1, VertexId v, FactIndex d2, ThreadPool& pool,
                               std::size_t k) const {
  check(u, d1);
  check(v, d2);
  const ProcId p = inst_->proc_of[u];
  if (inst_->proc_of[v] != p) return false;
  const auto& pi = procs_[p];
  const auto& tree = pi.tree;
  const std::size_t P = inst_->fact_count();
  const auto lu = inst_->local_index(u), lv = inst_->local_index(v);
  const auto bu = tree.root_bag(lu), bv = tree.root_bag(lv);
  const auto b = tree.lca(bu, bv);
  const auto fu = pi.anc_forward.get(lu, d1);
  const auto fv = pi.anc_backward.get(lv, d2);
  const std::size_t ou = (tree.delta(bu) - tree.delta(b)) * P;
  const std::size_t ov = (tree.delta(bv) - tree.delta(b)) * P;
  const std::size_t len = tree.bag(b).size() * P;
  const std::size_t words = words_for(len);
  k = std::max<std::size_t>(1, std::min(k, words));
  std::atomic<bool> found{false};
  pool.run(k, [&](std::size_t w) {
    const std::size_t lo = words * w / k * kWordBits;
    const std::size_t hi = std::min(len, words * (w + 1) / k * kWordBits);
    if (lo >= hi || found.load(std::memory_order_relaxed)) return;
    if (bits::intersects(fu, ou + lo, fv, ov + lo, hi - lo)) found.store(true, std::memory_order_relaxed);
  });
  return found.load();
}

SourceAnswer QueryIndex::source(VertexId u, FactIndex d1) const {
  check(u, d1);
  const ProcId p = inst_->proc_of[u];
  const auto& pi = procs_[p];
  const std::size_t P = inst_->fact_count();
  SourceAnswer ans(p, inst_->procedures[p].first, P, &pi.tree);
  const auto a = ans.bits().words();
  for (const auto& t : plan_source(pi, P, inst_->local_index(u), d1, a))
    bits::or_shifted(a, t.dst_offset, t.src, t.src_offset, t.len);
  return ans;
}

SourceAnswer QueryIndex::source_parallel(VertexId u, FactIndex d1, ThreadPool& pool, std::size_t k) const {
  check(u, d1);
  const ProcId p = inst_->proc_of[u];
  const auto& pi = procs_[p];
  const std::size_t P = inst_->fact_count();
  SourceAnswer ans(p, inst_->procedures[p].first, P, &pi.tree);
  const auto a = ans.bits().words();
  const auto tasks = plan_source(pi, P, inst_->local_index(u), d1, a);
  // Balance by total length: worker w takes the tasks whose running length
  // prefix falls into its share.
  std::size_t total = 0;
  for (const auto& t : tasks) total += t.len + 1;
  k = std::max<std::size_t>(1, std::min(k, tasks.size()));
  pool.run(k, [&](std::size_t w) {
    const std::size_t lo = total * w / k, hi = total * (w + 1) / k;
    std::size_t prefix = 0;
    for (const auto& t : tasks) {
      const std::size_t start = prefix;
      prefix += t.len + 1;
      if (start < lo || start >= hi) continue;
      bits::or_shifted_atomic(a, t.dst_offset, t.src, t.src_offset, t.len);
    }
  });
  return ans;
}

std::size_t QueryIndex::word_count() const {
  std::size_t w = 0;
  for (const auto& p : procs_) w += p.anc_forward.word_count() + p.anc_backward.word_count() + p.desc.word_count();
  return w;
}

}  // namespace ifds
