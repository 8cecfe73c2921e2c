#include "ifds/lca.hpp"

#include <bit>
#include <string>

namespace ifds {

LcaIndex::LcaIndex(const std::vector<std::int32_t>& parent) {
  const std::size_t n = parent.size();
  if (n == 0) return;
  std::vector<std::vector<std::uint32_t>> ch(n);
  std::uint32_t root = 0;
  std::size_t roots = 0;
  for (std::uint32_t b = 0; b < n; ++b) {
    if (parent[b] < 0) {
      root = b;
      ++roots;
    } else {
      ch[parent[b]].push_back(b);
    }
  }
  if (roots != 1) throw LcaError("tree must have exactly one root");

  t_.first.assign(n, 0);
  t_.euler.reserve(2 * n - 1);
  t_.depth.reserve(2 * n - 1);
  // (node, next child index, depth)
  struct Frame {
    std::uint32_t node, next, depth;
  };
  std::vector<Frame> stack{{root, 0, 0}};
  t_.first[root] = 0;
  t_.euler.push_back(root);
  t_.depth.push_back(0);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < ch[f.node].size()) {
      const std::uint32_t c = ch[f.node][f.next++];
      const std::uint32_t d = f.depth + 1;
      t_.first[c] = static_cast<std::uint32_t>(t_.euler.size());
      t_.euler.push_back(c);
      t_.depth.push_back(d);
      stack.push_back({c, 0, d});
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        t_.euler.push_back(stack.back().node);
        t_.depth.push_back(stack.back().depth);
      }
    }
  }
  if (t_.euler.size() != 2 * n - 1) throw LcaError("parent links do not form a tree");

  const std::size_t m = t_.euler.size();
  const std::size_t levels = std::bit_width(m);
  t_.sparse.resize(levels * m);
  for (std::uint32_t i = 0; i < m; ++i) t_.sparse[i] = i;
  for (std::size_t k = 1; k < levels; ++k) {
    const std::size_t half = std::size_t{1} << (k - 1);
    const std::uint32_t* prev = t_.sparse.data() + (k - 1) * m;
    std::uint32_t* cur = t_.sparse.data() + k * m;
    for (std::size_t i = 0; i + (std::size_t{1} << k) <= m; ++i) cur[i] = better(prev[i], prev[i + half]);
  }
}

LcaIndex LcaIndex::from_tables(Tables t) {
  const std::size_t m = t.euler.size();
  if (t.depth.size() != m || (m != 0 && t.first.size() * 2 - 1 != m) ||
      t.sparse.size() != std::bit_width(m) * m)
    throw LcaError("inconsistent LCA tables");
  for (auto f : t.first)
    if (f >= m) throw LcaError("inconsistent LCA tables");
  for (auto e : t.euler)
    if (e >= t.first.size()) throw LcaError("inconsistent LCA tables");
  for (auto s : t.sparse)
    if (s >= m) throw LcaError("inconsistent LCA tables");
  LcaIndex out;
  out.t_ = std::move(t);
  return out;
}

std::uint32_t LcaIndex::lca(std::uint32_t a, std::uint32_t b) const {
  if (a >= size() || b >= size())
    throw LcaError("bag " + std::to_string(a >= size() ? a : b) + " is not in this tree");
  std::uint32_t l = t_.first[a], r = t_.first[b];
  if (l > r) std::swap(l, r);
  const std::size_t k = std::bit_width(static_cast<std::size_t>(r - l + 1)) - 1;
  const std::size_t m = t_.euler.size();
  const std::uint32_t* row = t_.sparse.data() + k * m;
  return t_.euler[better(row[l], row[r + 1 - (std::size_t{1} << k)])];
}

}  // namespace ifds
