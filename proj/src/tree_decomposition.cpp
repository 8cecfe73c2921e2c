#include "ifds/tree_decomposition.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace ifds {

void UndirectedGraph::add_edge(std::uint32_t a, std::uint32_t b) {
  if (a == b) return;
  adj[a].push_back(b);
  adj[b].push_back(a);
}

void UndirectedGraph::finalize() {
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
}

bool UndirectedGraph::adjacent(std::uint32_t a, std::uint32_t b) const {
  return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

UndirectedGraph flow_graph(const Instance& inst, ProcId p) {
  const Procedure& proc = inst.procedures[p];
  UndirectedGraph g(proc.size);
  for (EdgeId e : proc.edges) g.add_edge(inst.edges[e].from - proc.first, inst.edges[e].to - proc.first);
  g.finalize();
  return g;
}

std::size_t TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.size());
  return w == 0 ? 0 : w - 1;
}

std::vector<std::vector<std::uint32_t>> TreeDecomposition::children() const {
  std::vector<std::vector<std::uint32_t>> ch(bags.size());
  for (std::uint32_t b = 0; b < bags.size(); ++b)
    if (parent[b] >= 0) ch[parent[b]].push_back(b);
  return ch;
}

std::vector<std::uint32_t> TreeDecomposition::depths() const {
  std::vector<std::uint32_t> depth(bags.size(), 0);
  if (bags.empty()) return depth;
  const auto ch = children();
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const auto b = stack.back();
    stack.pop_back();
    for (auto c : ch[b]) {
      depth[c] = depth[b] + 1;
      stack.push_back(c);
    }
  }
  return depth;
}

std::size_t TreeDecomposition::height() const {
  const auto d = depths();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

namespace {

// Removes bags contained in a neighbouring bag and renumbers the rest.
TreeDecomposition contract(TreeDecomposition td) {
  const std::size_t nb = td.size();
  for (auto& b : td.bags) std::sort(b.begin(), b.end());
  std::vector<char> alive(nb, 1);
  auto ch_lists = td.children();
  std::vector<std::set<std::uint32_t>> ch(nb);
  for (std::uint32_t b = 0; b < nb; ++b) ch[b].insert(ch_lists[b].begin(), ch_lists[b].end());
  auto subset = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::vector<std::uint32_t> work(nb);
  for (std::uint32_t b = 0; b < nb; ++b) work[b] = b;
  while (!work.empty()) {
    const auto b = work.back();
    work.pop_back();
    if (!alive[b] || td.parent[b] < 0) continue;
    const auto p = static_cast<std::uint32_t>(td.parent[b]);
    const bool down = subset(td.bags[b], td.bags[p]);
    const bool up = !down && subset(td.bags[p], td.bags[b]);
    if (!down && !up) continue;
    if (up) td.bags[p] = td.bags[b];
    alive[b] = 0;
    ch[p].erase(b);
    for (auto c : ch[b]) {
      td.parent[c] = static_cast<std::int32_t>(p);
      ch[p].insert(c);
      work.push_back(c);
    }
    ch[b].clear();
    work.push_back(p);
    for (auto c : ch[p]) work.push_back(c);
  }
  std::vector<std::int32_t> remap(nb, -1);
  TreeDecomposition out;
  for (std::uint32_t b = 0; b < nb; ++b) {
    if (!alive[b]) continue;
    remap[b] = static_cast<std::int32_t>(out.bags.size());
    out.bags.push_back(std::move(td.bags[b]));
  }
  out.parent.resize(out.bags.size());
  for (std::uint32_t b = 0; b < nb; ++b) {
    if (!alive[b]) continue;
    out.parent[remap[b]] = td.parent[b] < 0 ? -1 : remap[td.parent[b]];
  }
  out.root = static_cast<std::uint32_t>(remap[td.root]);
  return out;
}

}  // namespace

TreeDecomposition decompose(const UndirectedGraph& g, EliminationHeuristic heuristic) {
  const std::size_t n = g.size();
  TreeDecomposition td;
  if (n == 0) return td;

  std::vector<std::vector<std::uint32_t>> adj = g.adj;
  std::vector<char> gone(n, 0);
  auto fill_of = [&](std::uint32_t v) {
    if (heuristic == EliminationHeuristic::MinDegree) return std::size_t{0};
    const auto& nb = adj[v];
    std::size_t missing = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!std::binary_search(adj[nb[i]].begin(), adj[nb[i]].end(), nb[j])) ++missing;
    return missing;
  };
  using Key = std::tuple<std::size_t, std::size_t, std::uint32_t>;
  std::set<Key> queue;
  std::vector<Key> key(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    key[v] = {fill_of(v), adj[v].size(), v};
    queue.insert(key[v]);
  }
  auto refresh = [&](std::uint32_t v) {
    queue.erase(key[v]);
    key[v] = {fill_of(v), adj[v].size(), v};
    queue.insert(key[v]);
  };

  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> position(n);
  std::vector<std::vector<std::uint32_t>> higher(n);
  order.reserve(n);
  while (!queue.empty()) {
    const std::uint32_t v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    position[v] = static_cast<std::uint32_t>(order.size());
    order.push_back(v);
    gone[v] = 1;
    const auto nb = adj[v];
    higher[v] = nb;
    for (auto a : nb) {
      auto& la = adj[a];
      la.erase(std::lower_bound(la.begin(), la.end(), v));
      for (auto b : nb) {
        if (b == a) continue;
        auto it = std::lower_bound(la.begin(), la.end(), b);
        if (it == la.end() || *it != b) la.insert(it, b);
      }
    }
    adj[v].clear();
    if (heuristic == EliminationHeuristic::MinDegree) {
      for (auto a : nb) refresh(a);
    } else {
      std::vector<std::uint32_t> touched(nb.begin(), nb.end());
      for (auto a : nb) touched.insert(touched.end(), adj[a].begin(), adj[a].end());
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (auto a : touched) refresh(a);
    }
  }

  td.bags.resize(n);
  td.parent.assign(n, -1);
  std::int32_t last_root = -1;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto v = order[i];
    auto& bag = td.bags[i];
    bag.push_back(v);
    bag.insert(bag.end(), higher[v].begin(), higher[v].end());
    std::uint32_t first = kNone;
    for (auto a : higher[v]) first = std::min(first, position[a]);
    if (first != kNone) td.parent[i] = static_cast<std::int32_t>(first);
  }
  // Eliminations ending a connected component leave roots; hang all of them
  // below the last one.
  last_root = static_cast<std::int32_t>(n - 1);
  for (std::uint32_t i = 0; i + 1 < n; ++i)
    if (td.parent[i] < 0) td.parent[i] = last_root;
  td.root = static_cast<std::uint32_t>(last_root);
  return contract(std::move(td));
}

TreeDecomposition from_bags(std::vector<std::vector<std::uint32_t>> bags, std::vector<std::int32_t> parent) {
  if (bags.size() != parent.size()) throw std::invalid_argument("bags and parent links differ in length");
  TreeDecomposition td;
  td.bags = std::move(bags);
  td.parent = std::move(parent);
  std::size_t roots = 0;
  for (std::uint32_t b = 0; b < td.parent.size(); ++b) {
    if (td.parent[b] < 0) {
      td.root = b;
      ++roots;
    } else if (static_cast<std::size_t>(td.parent[b]) >= td.bags.size()) {
      throw std::invalid_argument("parent link out of range");
    }
  }
  if (!td.bags.empty() && roots != 1) throw std::invalid_argument("decomposition must have exactly one root");
  return td;
}

std::string validate_decomposition(const UndirectedGraph& g, const TreeDecomposition& td) {
  const std::size_t n = g.size();
  const std::size_t nb = td.size();
  if (n == 0) return nb == 0 ? "" : "bags given for an empty graph";
  if (nb == 0) return "no bags";
  if (td.parent.size() != nb) return "parent array has the wrong size";

  // One tree: every bag reaches the root, no cycles.
  const auto ch = td.children();
  std::vector<char> seen(nb, 0);
  std::vector<std::uint32_t> stack{td.root};
  if (td.parent[td.root] != -1) return "root has a parent";
  std::size_t reached = 0;
  while (!stack.empty()) {
    const auto b = stack.back();
    stack.pop_back();
    if (seen[b]) return "parent links contain a cycle";
    seen[b] = 1;
    ++reached;
    for (auto c : ch[b]) stack.push_back(c);
  }
  if (reached != nb) return "parent links do not form a single tree";

  std::vector<std::vector<std::uint32_t>> where(n);
  for (std::uint32_t b = 0; b < nb; ++b) {
    auto sorted = td.bags[b];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return "bag " + std::to_string(b) + " lists a vertex twice";
    for (auto v : td.bags[b]) {
      if (v >= n) return "bag " + std::to_string(b) + " mentions unknown vertex " + std::to_string(v);
      where[v].push_back(b);
    }
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (where[v].empty()) return "vertex " + std::to_string(v) + " is in no bag";

  // Connectivity: the bags of v form a subtree iff exactly one of them has a
  // parent that does not contain v.
  std::vector<std::vector<std::uint32_t>> sorted_bags(nb);
  for (std::uint32_t b = 0; b < nb; ++b) {
    sorted_bags[b] = td.bags[b];
    std::sort(sorted_bags[b].begin(), sorted_bags[b].end());
  }
  auto in_bag = [&](std::uint32_t b, std::uint32_t v) {
    return std::binary_search(sorted_bags[b].begin(), sorted_bags[b].end(), v);
  };
  for (std::uint32_t v = 0; v < n; ++v) {
    std::size_t tops = 0;
    for (auto b : where[v])
      if (td.parent[b] < 0 || !in_bag(static_cast<std::uint32_t>(td.parent[b]), v)) ++tops;
    if (tops != 1) return "bags of vertex " + std::to_string(v) + " are not connected";
  }

  for (std::uint32_t a = 0; a < n; ++a) {
    for (auto b : g.adj[a]) {
      if (b < a) continue;
      bool covered = false;
      for (auto bag : where[a])
        if (in_bag(bag, b)) {
          covered = true;
          break;
        }
      if (!covered) return "edge " + std::to_string(a) + "-" + std::to_string(b) + " is in no bag";
    }
  }
  return "";
}

CutReport verify_cut_property(const UndirectedGraph& g, const TreeDecomposition& td, std::size_t samples,
                              std::uint64_t seed) {
  CutReport report;
  const std::size_t nb = td.size();
  std::vector<std::uint32_t> edges;
  for (std::uint32_t b = 0; b < nb; ++b)
    if (td.parent[b] >= 0) edges.push_back(b);
  if (samples != 0 && samples < edges.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(edges.begin(), edges.end(), rng);
    edges.resize(samples);
  }
  const auto ch = td.children();
  const std::size_t n = g.size();
  for (auto b : edges) {
    const auto p = static_cast<std::uint32_t>(td.parent[b]);
    std::vector<char> below(n, 0), above(n, 0), sep(n, 0);
    std::vector<char> in_sub(nb, 0);
    std::vector<std::uint32_t> stack{b};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      in_sub[x] = 1;
      for (auto c : ch[x]) stack.push_back(c);
    }
    for (std::uint32_t x = 0; x < nb; ++x)
      for (auto v : td.bags[x]) (in_sub[x] ? below : above)[v] = 1;
    for (auto v : td.bags[b])
      if (std::find(td.bags[p].begin(), td.bags[p].end(), v) != td.bags[p].end()) sep[v] = 1;

    // Flood fill from the strictly-below side avoiding the separator.
    std::vector<char> mark(n, 0);
    std::vector<std::uint32_t> q;
    for (std::uint32_t v = 0; v < n; ++v)
      if (below[v] && !sep[v]) {
        mark[v] = 1;
        q.push_back(v);
      }
    bool ok = true;
    while (!q.empty() && ok) {
      const auto v = q.back();
      q.pop_back();
      if (above[v] && !sep[v]) ok = false;
      for (auto w : g.adj[v])
        if (!mark[w] && !sep[w]) {
          mark[w] = 1;
          q.push_back(w);
        }
    }
    ++report.checked;
    if (!ok) {
      ++report.failures;
      report.messages.push_back("separator of bags " + std::to_string(b) + " and " + std::to_string(p) +
                                " does not cut the graph");
    }
  }
  return report;
}

}  // namespace ifds
