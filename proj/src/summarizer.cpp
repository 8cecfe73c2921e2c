#include "ifds/summarizer.hpp"

#include <algorithm>
#include <sstream>

namespace ifds {

namespace {

struct WorkItem {
  VertexId u, v;
  EdgeId e;  // supergraph edge; unused when u is the start of its procedure
  FactIndex d1, d2;
};

class Worklist {
 public:
  Worklist(const Instance& inst, SummarySet& out)
      : inst_(inst), out_(out), p_(inst.fact_count()), n_(inst.vertex_count()) {
    const std::size_t pp = p_ * p_;
    start_of_.resize(n_);
    for (VertexId v = 0; v < n_; ++v) start_of_[v] = inst.procedure_of(v).start;
    vert_eq_.assign(words_for(n_ * pp), 0);
    vert_e_.assign(words_for(n_ * pp), 0);
    edge_eq_.assign(words_for(inst.edges.size() * pp), 0);
    edge_e_.assign(words_for(inst.edges.size() * pp), 0);
    site_s_.assign(words_for(inst.calls.size() * pp), 0);
    out_e_.resize(n_ * p_);
  }

  void run() {
    // Q <- E-bar; interprocedural edges would be dropped on removal anyway.
    for (EdgeId e = 0; e < inst_.edges.size(); ++e) {
      const Edge& edge = inst_.edges[e];
      if (is_interprocedural(edge.kind)) continue;
      for (auto [a, b] : inst_.relations[e].pairs()) push_if_new(edge.from, a, edge.to, b, e);
    }
    // A procedure whose start is its exit has 0-length paths from s_p to e_p,
    // which never show up as an edge of H.
    for (ProcId p = 0; p < inst_.procedures.size(); ++p) {
      const auto& proc = inst_.procedures[p];
      if (proc.start != proc.exit) continue;
      for (FactIndex d = 0; d < p_; ++d) pair_calls(p, d, d);
    }

    while (head_ < queue_.size()) {
      const WorkItem it = queue_[head_++];
      ++out_.stats.iterations;
      const VertexId s = start_of_[it.u];
      bits::set(s == it.u ? std::span<Word>(vert_e_) : std::span<Word>(edge_e_),
                s == it.u ? vert_index(it.v, it.d1, it.d2) : edge_index(it.e, it.d1, it.d2));
      out_e_[x(it.u, it.d1)].push_back(x(it.v, it.d2));
      ++out_.stats.edges_added;

      for (FactIndex d3 = 0; d3 < p_; ++d3) {
        const bool from_start = (it.u == s && d3 == it.d1) || bits::test(vert_e_, vert_index(it.u, d3, it.d1));
        if (from_start) push_shortcut(s, it.v, d3, it.d2);
      }
      if (it.u == s) {
        const auto& succ = out_e_[x(it.v, it.d2)];
        for (std::size_t i = 0; i < succ.size(); ++i) {
          const XVertex w = succ[i];
          push_shortcut(s, static_cast<VertexId>(w / p_), it.d1, static_cast<FactIndex>(w % p_));
        }
        const ProcId p = inst_.proc_of[it.u];
        if (it.v == inst_.procedures[p].exit) pair_calls(p, it.d1, it.d2);
      }
    }

    const std::size_t pp = p_ * p_;
    for (std::uint32_t site = 0; site < inst_.calls.size(); ++site)
      for (std::size_t k = 0; k < pp; ++k)
        if (bits::test(site_s_, site * pp + k))
          out_.summaries.push_back({site, static_cast<FactIndex>(k / p_), static_cast<FactIndex>(k % p_)});
    out_.stats.shortcuts = bits::count(vert_e_);
    out_.facts = p_;
    out_.shortcut_bits = std::move(vert_e_);
  }

 private:
  XVertex x(VertexId v, FactIndex d) const { return static_cast<XVertex>(v * p_ + d); }
  std::size_t vert_index(VertexId v, FactIndex d1, FactIndex d2) const {
    return (static_cast<std::size_t>(v) * p_ + d1) * p_ + d2;
  }
  std::size_t edge_index(EdgeId e, FactIndex d1, FactIndex d2) const {
    return (static_cast<std::size_t>(e) * p_ + d1) * p_ + d2;
  }

  // Membership in E' u Q. Edges leaving the start of a procedure are keyed by
  // (target, d1, d2) so that shortcut edges and ordinary edges share a slot.
  bool push_if_new(VertexId u, FactIndex d1, VertexId v, FactIndex d2, EdgeId e) {
    const bool from_start = start_of_[u] == u;
    auto& table = from_start ? vert_eq_ : edge_eq_;
    const std::size_t idx = from_start ? vert_index(v, d1, d2) : edge_index(e, d1, d2);
    if (bits::test(table, idx)) return false;
    bits::set(table, idx);
    queue_.push_back({u, v, e, d1, d2});
    return true;
  }

  void push_shortcut(VertexId s, VertexId v, FactIndex d1, FactIndex d2) {
    const std::size_t idx = vert_index(v, d1, d2);
    if (bits::test(vert_eq_, idx)) return;
    bits::set(vert_eq_, idx);
    queue_.push_back({s, v, kNone, d1, d2});
  }

  void pair_calls(ProcId p, FactIndex d1, FactIndex d2) {
    const std::size_t pp = p_ * p_;
    for (std::uint32_t site : inst_.procedures[p].callers) {
      const CallSite& cs = inst_.calls[site];
      const FlowRelation& in = inst_.relations[cs.call_to_start];
      const auto out_row = inst_.relations[cs.exit_to_return].row(d2);
      std::uint64_t trips = 0;
      for (FactIndex d3 = 0; d3 < p_; ++d3) {
        if (!in.contains(d3, d1)) continue;
        for (FactIndex d4 = 0; d4 < p_; ++d4) {
          if (!bits::test(out_row, d4)) continue;
          ++trips;
          bits::set(site_s_, site * pp + d3 * p_ + d4);
          push_if_new(cs.call, d3, cs.return_site, d4, cs.call_to_return);
        }
      }
      out_.stats.max_pairing_trips = std::max(out_.stats.max_pairing_trips, trips);
    }
  }

  const Instance& inst_;
  SummarySet& out_;
  std::size_t p_;
  std::size_t n_;
  std::vector<VertexId> start_of_;
  std::vector<Word> vert_eq_, vert_e_, edge_eq_, edge_e_, site_s_;
  std::vector<std::vector<XVertex>> out_e_;
  std::vector<WorkItem> queue_;
  std::size_t head_ = 0;
};

constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

std::uint64_t pair_key(VertexId u, VertexId v) { return (static_cast<std::uint64_t>(u) << 32) | v; }

}  // namespace

SummarySet compute_summaries(const Instance& inst, const ExplodedGraph& eg) {
  if (eg.vertex_count() != inst.vertex_count() * inst.fact_count())
    throw InstanceError("exploded graph does not belong to this instance");
  SummarySet out;
  Worklist(inst, out).run();
  return out;
}

std::string dump_summaries(const Instance& inst, const SummarySet& s) {
  std::ostringstream os;
  for (const auto& e : s.summaries) {
    const auto& cs = inst.calls[e.call_site];
    os << "summary " << inst.vertex_names[cs.call] << ' ' << inst.domain.name(e.d3) << ' '
       << inst.vertex_names[cs.return_site] << ' ' << inst.domain.name(e.d4) << '\n';
  }
  return os.str();
}

GHat::GHat(const Instance& inst, const SummarySet& summaries)
    : facts_(inst.fact_count()), block_words_(words_for(facts_ * facts_)) {
  neighbors_.resize(inst.vertex_count());
  std::size_t cap = 16;
  while (cap < inst.edges.size() * 2) cap <<= 1;
  keys_.assign(cap, kEmpty);
  slots_.assign(cap, 0);
  std::vector<Word> blk(block_words_);
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    const Edge& edge = inst.edges[e];
    if (is_interprocedural(edge.kind)) continue;
    std::fill(blk.begin(), blk.end(), Word{0});
    for (auto [a, b] : inst.relations[e].pairs()) bits::set(blk, a * facts_ + b);
    add_block(edge.from, edge.to, blk.data());
  }
  for (const auto& s : summaries.summaries) {
    const auto& cs = inst.calls[s.call_site];
    add_edge(cs.call, s.d3, cs.return_site, s.d4);
  }
}

std::uint32_t GHat::find_slot(std::uint64_t key) const {
  const std::size_t mask = keys_.size() - 1;
  std::size_t i = (key * 0x9E3779B97F4A7C15ull) >> 20 & mask;
  while (keys_[i] != kEmpty && keys_[i] != key) i = (i + 1) & mask;
  return static_cast<std::uint32_t>(i);
}

void GHat::grow() {
  std::vector<std::uint64_t> old_keys(keys_.size() * 2, kEmpty);
  std::vector<std::uint32_t> old_slots(slots_.size() * 2, 0);
  old_keys.swap(keys_);
  old_slots.swap(slots_);
  for (std::size_t i = 0; i < old_keys.size(); ++i) {
    if (old_keys[i] == kEmpty) continue;
    const auto j = find_slot(old_keys[i]);
    keys_[j] = old_keys[i];
    slots_[j] = old_slots[i];
  }
}

std::uint32_t GHat::insert(VertexId u, VertexId v) {
  const std::uint64_t key = pair_key(u, v);
  auto i = find_slot(key);
  if (keys_[i] == key) return slots_[i];
  if ((keys_used_ + 1) * 4 > keys_.size() * 3) {
    grow();
    i = find_slot(key);
  }
  keys_[i] = key;
  slots_[i] = static_cast<std::uint32_t>(keys_used_++);
  pool_.resize(pool_.size() + block_words_, 0);
  neighbors_[u].push_back(v);
  return slots_[i];
}

const Word* GHat::block(VertexId u, VertexId v) const {
  if (keys_.empty()) return nullptr;
  const std::uint64_t key = pair_key(u, v);
  const auto i = find_slot(key);
  if (keys_[i] != key) return nullptr;
  return pool_.data() + static_cast<std::size_t>(slots_[i]) * block_words_;
}

bool GHat::has_edge(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const {
  const Word* b = block(u, v);
  return b && bits::test(std::span<const Word>(b, block_words_), d1 * facts_ + d2);
}

bool GHat::add_block(VertexId u, VertexId v, const Word* src) {
  bool any = false;
  for (std::size_t w = 0; w < block_words_; ++w) any |= src[w] != 0;
  if (!any) return false;
  const auto slot = insert(u, v);
  Word* dst = pool_.data() + static_cast<std::size_t>(slot) * block_words_;
  bool changed = false;
  for (std::size_t w = 0; w < block_words_; ++w) {
    changed |= (src[w] & ~dst[w]) != 0;
    dst[w] |= src[w];
  }
  return changed;
}

void GHat::add_edge(VertexId u, FactIndex d1, VertexId v, FactIndex d2) {
  const auto slot = insert(u, v);
  bits::set(std::span<Word>(pool_.data() + static_cast<std::size_t>(slot) * block_words_, block_words_),
            d1 * facts_ + d2);
}

std::size_t GHat::edge_count() const { return bits::count(pool_); }

BitString reachable_in_ghat(const Instance& inst, const GHat& g, VertexId u, FactIndex d) {
  const std::size_t p = inst.fact_count();
  const Procedure& proc = inst.procedure_of(u);
  BitString seen(static_cast<std::size_t>(proc.size) * p);
  std::vector<std::uint32_t> stack;
  const auto local = [&](VertexId v, FactIndex f) { return (v - proc.first) * p + f; };
  seen.set(local(u, d));
  stack.push_back(static_cast<std::uint32_t>(local(u, d)));
  const std::size_t bw = g.block_words();
  while (!stack.empty()) {
    const std::uint32_t cur = stack.back();
    stack.pop_back();
    const VertexId v = proc.first + static_cast<VertexId>(cur / p);
    const std::size_t dv = cur % p;
    for (VertexId w : g.neighbors(v)) {
      const std::span<const Word> blk(g.block(v, w), bw);
      for (std::size_t d2 = 0; d2 < p; ++d2) {
        if (!bits::test(blk, dv * p + d2)) continue;
        const std::size_t idx = local(w, static_cast<FactIndex>(d2));
        if (seen.test(idx)) continue;
        seen.set(idx);
        stack.push_back(static_cast<std::uint32_t>(idx));
      }
    }
  }
  return seen;
}

}  // namespace ifds
