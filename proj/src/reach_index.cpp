#include "ifds/reach_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace ifds {

PackedStrings::PackedStrings(const std::vector<std::uint32_t>& bits_per_vertex, std::size_t facts)
    : facts_(facts), bits_(bits_per_vertex), stride_(bits_per_vertex.size()), offset_(bits_per_vertex.size()) {
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < bits_.size(); ++v) {
    stride_[v] = static_cast<std::uint32_t>(words_for(bits_[v]));
    offset_[v] = total;
    total += static_cast<std::uint64_t>(stride_[v]) * facts;
  }
  pool_.assign(total, 0);
}

PackedStrings PackedStrings::from_parts(const std::vector<std::uint32_t>& bits_per_vertex, std::size_t facts,
                                        std::vector<Word> pool) {
  PackedStrings out(bits_per_vertex, facts);
  if (pool.size() != out.pool_.size()) throw std::invalid_argument("packed string pool has the wrong size");
  out.pool_ = std::move(pool);
  return out;
}

BitMatrix bag_closure(const GHat& g, const ProcedureTree& tree, VertexId first, std::uint32_t b) {
  const auto vs = tree.bag(b);
  const std::size_t P = g.fact_count();
  const std::size_t m = vs.size();
  BitMatrix c(m * P, m * P);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Word* blk = g.block(first + vs[i], first + vs[j]);
      if (!blk) continue;
      const std::span<const Word> src(blk, g.block_words());
      for (std::size_t d1 = 0; d1 < P; ++d1) bits::or_shifted(c.row(i * P + d1), j * P, src, d1 * P, P);
    }
  }
  c.close_reflexive_transitive();
  return c;
}

namespace {

// Writes the closure of bag b back into g, skipping reflexive bits.
std::uint64_t write_back(GHat& g, const ProcedureTree& tree, VertexId first, std::uint32_t b, const BitMatrix& c) {
  const auto vs = tree.bag(b);
  const std::size_t P = g.fact_count();
  const std::size_t m = vs.size();
  std::vector<Word> blk(g.block_words());
  std::uint64_t added = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::fill(blk.begin(), blk.end(), Word{0});
      for (std::size_t d1 = 0; d1 < P; ++d1) bits::or_shifted(blk, d1 * P, c.row(i * P + d1), j * P, P);
      if (i == j)
        for (std::size_t d = 0; d < P; ++d) blk[(d * P + d) / kWordBits] &= ~(Word{1} << ((d * P + d) % kWordBits));
      if (!bits::any(blk, 0, P * P)) continue;
      if (g.add_block(first + vs[i], first + vs[j], blk.data())) ++added;
    }
  }
  return added;
}

}  // namespace

LocalStats compute_local(GHat& g, const ProcedureTree& tree, VertexId first) {
  LocalStats st;
  const auto nb = static_cast<std::uint32_t>(tree.bag_count());
  // Post-order: a bag is a leaf of what is left of the tree when we reach it.
  std::vector<std::uint32_t> post;
  post.reserve(nb);
  std::vector<std::pair<std::uint32_t, bool>> stack{{0, false}};
  while (!stack.empty()) {
    auto [b, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      post.push_back(b);
      continue;
    }
    stack.emplace_back(b, true);
    for (int k = 1; k >= 0; --k)
      if (tree.child(b, k) != kNone) stack.emplace_back(tree.child(b, k), false);
  }
  auto pass = [&](std::uint32_t b) {
    st.added_blocks += write_back(g, tree, first, b, bag_closure(g, tree, first, b));
    ++st.bag_passes;
  };
  for (auto b : post) pass(b);
  for (std::size_t i = post.size(); i-- > 0;)
    if (post[i] != 0) pass(post[i]);
  return st;
}

AncestorSets compute_ancestors(const GHat& g, const ProcedureTree& tree, VertexId first, bool keep_all) {
  const std::size_t P = g.fact_count();
  const auto nb = static_cast<std::uint32_t>(tree.bag_count());
  const auto n = tree.vertex_count();
  std::vector<std::uint32_t> lens(n);
  for (std::uint32_t v = 0; v < n; ++v) lens[v] = static_cast<std::uint32_t>(tree.delta(tree.root_bag(v)) * P);
  AncestorSets out{PackedStrings(lens, P), PackedStrings(lens, P), {}, {}};

  // Strings of every bag, indexed by slot; parents precede children in
  // pre-order so one forward sweep suffices.
  std::vector<PackedStrings> fw(nb), bw(nb);
  for (std::uint32_t b = 0; b < nb; ++b) {
    const auto vs = tree.bag(b);
    const std::size_t m = vs.size();
    const std::size_t own = m * P;
    std::vector<std::uint32_t> blen(m, static_cast<std::uint32_t>(tree.delta(b) * P));
    fw[b] = PackedStrings(blen, P);
    bw[b] = PackedStrings(blen, P);
    if (tree.parent(b) >= 0) {
      const auto p = static_cast<std::uint32_t>(tree.parent(b));
      const std::size_t plen = tree.delta(p) * P;
      for (std::uint32_t i = 0; i < m; ++i) {
        const auto k = tree.slot(p, vs[i]);
        if (k == kNone) continue;
        for (FactIndex d = 0; d < P; ++d) {
          bits::or_shifted(fw[b].get(i, d), own, fw[p].get(k, d), 0, plen);
          bits::or_shifted(bw[b].get(i, d), own, bw[p].get(k, d), 0, plen);
        }
      }
    }
    const BitMatrix c = bag_closure(g, tree, first, b);
    const std::size_t len = tree.delta(b) * P;
    for (std::size_t r = 0; r < own; ++r) {
      const auto i = static_cast<std::uint32_t>(r / P);
      const auto d1 = static_cast<FactIndex>(r % P);
      const auto row = c.row(r);
      for (std::size_t w = 0; w < row.size(); ++w) {
        for (Word x = row[w]; x; x &= x - 1) {
          const std::size_t col = w * kWordBits + static_cast<std::size_t>(std::countr_zero(x));
          const auto j = static_cast<std::uint32_t>(col / P);
          const auto d2 = static_cast<FactIndex>(col % P);
          bits::set(fw[b].get(i, d1), col);
          bits::set(bw[b].get(j, d2), r);
          if (col == r) continue;
          bits::or_shifted(fw[b].get(i, d1), 0, fw[b].get(j, d2), 0, len);
          bits::or_shifted(bw[b].get(j, d2), 0, bw[b].get(i, d1), 0, len);
        }
      }
    }
    for (std::uint32_t i = 0; i < m; ++i) {
      if (tree.root_bag(vs[i]) != b) continue;
      for (FactIndex d = 0; d < P; ++d) {
        std::ranges::copy(fw[b].get(i, d), out.forward.get(vs[i], d).begin());
        std::ranges::copy(bw[b].get(i, d), out.backward.get(vs[i], d).begin());
      }
    }
    // A bag's strings are dead once both children have copied from them.
    if (!keep_all && b > 0) {
      const auto p = static_cast<std::uint32_t>(tree.parent(b));
      const auto last = tree.child(p, 1) != kNone ? tree.child(p, 1) : tree.child(p, 0);
      if (last == b) {
        fw[p] = PackedStrings();
        bw[p] = PackedStrings();
      }
    }
  }
  if (keep_all) {
    out.bag_forward = std::move(fw);
    out.bag_backward = std::move(bw);
  }
  return out;
}

PackedStrings compute_descendants(const GHat& g, const ProcedureTree& tree, VertexId first) {
  const std::size_t P = g.fact_count();
  const auto nb = static_cast<std::uint32_t>(tree.bag_count());
  const auto n = tree.vertex_count();
  std::vector<std::uint32_t> lens(n);
  for (std::uint32_t v = 0; v < n; ++v) lens[v] = static_cast<std::uint32_t>(tree.alpha(v) * P);
  PackedStrings out(lens, P);
  for (std::uint32_t v = 0; v < n; ++v)
    for (FactIndex d = 0; d < P; ++d) bits::set(out.get(v, d), (tree.position(v) - tree.beta(v)) * P + d);

  for (std::uint32_t b = nb; b-- > 0;) {
    const auto vs = tree.bag(b);
    const std::size_t m = vs.size();
    bool rooted_here = false;
    for (auto v : vs) rooted_here |= tree.root_bag(v) == b;
    if (!rooted_here) continue;
    const BitMatrix c = bag_closure(g, tree, first, b);
    for (std::uint32_t j = 0; j < m; ++j) {
      const auto v = vs[j];
      if (tree.root_bag(v) != b) continue;
      const std::size_t vlen = static_cast<std::size_t>(tree.alpha(v)) * P;
      for (std::uint32_t i = 0; i < m; ++i) {
        const auto u = vs[i];
        const std::size_t shift = static_cast<std::size_t>(tree.beta(v) - tree.beta(u)) * P;
        for (FactIndex d1 = 0; d1 < P; ++d1) {
          for (FactIndex d2 = 0; d2 < P; ++d2) {
            if (i == j && d1 == d2) continue;
            if (!c.test(i * P + d1, j * P + d2)) continue;
            bits::or_shifted(out.get(u, d1), shift, out.get(v, d2), 0, vlen);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace ifds
