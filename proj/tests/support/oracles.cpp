#include "oracles.hpp"

#include <deque>
#include <stdexcept>

namespace ifds::oracle {

Reach closure(const Adjacency& adj) {
  const std::size_t n = adj.size();
  Reach r(n, std::vector<char>(n, 0));
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    auto& row = r[s];
    row[s] = 1;
    stack.assign(1, static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      for (auto y : adj[x])
        if (!row[y]) {
          row[y] = 1;
          stack.push_back(y);
        }
    }
  }
  return r;
}

CflOracle::CflOracle(const Instance& inst) : inst_(&inst) {
  const std::size_t P = inst.fact_count();
  const std::size_t np = inst.procedures.size();
  std::vector<Adjacency> adj(np);
  std::vector<std::vector<std::vector<char>>> has(np);
  auto add = [&](ProcId p, std::size_t x, std::size_t y) {
    if (has[p][x][y]) return false;
    has[p][x][y] = 1;
    adj[p][x].push_back(static_cast<std::uint32_t>(y));
    return true;
  };
  for (ProcId p = 0; p < np; ++p) {
    const std::size_t m = inst.procedures[p].size * P;
    adj[p].assign(m, {});
    has[p].assign(m, std::vector<char>(m, 0));
  }
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    const auto& ed = inst.edges[e];
    if (is_interprocedural(ed.kind)) continue;
    const ProcId p = inst.proc_of[ed.from];
    for (auto [a, b] : inst.relations[e].pairs())
      add(p, inst.local_index(ed.from) * P + a, inst.local_index(ed.to) * P + b);
  }
  reach_.resize(np);
  for (bool changed = true; changed;) {
    changed = false;
    for (ProcId p = 0; p < np; ++p) reach_[p] = closure(adj[p]);
    for (const auto& cs : inst.calls) {
      const auto& callee = inst.procedures[cs.callee];
      const auto& in = reach_[cs.callee];
      const auto s = inst.local_index(callee.start), x = inst.local_index(callee.exit);
      const auto c = inst.local_index(cs.call), r = inst.local_index(cs.return_site);
      for (auto [dc, ds] : inst.relations[cs.call_to_start].pairs())
        for (auto [de, dr] : inst.relations[cs.exit_to_return].pairs())
          if (in[s * P + ds][x * P + de]) changed |= add(cs.caller, c * P + dc, r * P + dr);
    }
  }
}

bool CflOracle::reach(VertexId u, FactIndex d1, VertexId v, FactIndex d2) const {
  const ProcId p = inst_->proc_of[u];
  if (inst_->proc_of[v] != p) return false;
  const std::size_t P = inst_->fact_count();
  return reach_[p][inst_->local_index(u) * P + d1][inst_->local_index(v) * P + d2];
}

std::vector<char> CflOracle::source(VertexId u, FactIndex d1) const {
  const std::size_t P = inst_->fact_count();
  return reach_[inst_->proc_of[u]][inst_->local_index(u) * P + d1];
}

bool stack_valid(const Instance& inst, std::span<const VertexId> path, bool same_context) {
  std::vector<std::uint32_t> stack;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto e = inst.find_edge(path[i], path[i + 1]);
    if (!e) throw std::invalid_argument("not a path");
    const auto& ed = inst.edges[*e];
    if (ed.kind == EdgeKind::CallToStart) {
      stack.push_back(ed.call_site);
    } else if (ed.kind == EdgeKind::ExitToReturn) {
      if (stack.empty() || stack.back() != ed.call_site) return false;
      stack.pop_back();
    }
  }
  return !same_context || stack.empty();
}

Adjacency ghat_adjacency(const Instance& inst, const GHat& g, ProcId p) {
  const std::size_t P = inst.fact_count();
  const auto& proc = inst.procedures[p];
  Adjacency adj(proc.size * P);
  for (VertexId u = proc.first; u < proc.first + proc.size; ++u)
    for (auto v : g.neighbors(u))
      for (FactIndex a = 0; a < P; ++a)
        for (FactIndex b = 0; b < P; ++b)
          if (g.has_edge(u, a, v, b))
            adj[(u - proc.first) * P + a].push_back(static_cast<std::uint32_t>((v - proc.first) * P + b));
  return adj;
}

Adjacency augmented(const Adjacency& adj, const Reach& reach, const ProcedureTree& tree, std::size_t facts) {
  Adjacency out = adj;
  std::vector<std::set<std::uint32_t>> seen(adj.size());
  for (std::size_t x = 0; x < adj.size(); ++x) seen[x].insert(adj[x].begin(), adj[x].end());
  for (std::uint32_t b = 0; b < tree.bag_count(); ++b)
    for (auto u : tree.bag(b))
      for (auto v : tree.bag(b))
        for (std::uint32_t a = 0; a < facts; ++a)
          for (std::uint32_t c = 0; c < facts; ++c) {
            const std::uint32_t x = u * facts + a, y = v * facts + c;
            if (reach[x][y] && seen[x].insert(y).second) out[x].push_back(y);
          }
  return out;
}

std::set<std::pair<std::uint32_t, std::uint32_t>> filtered_bfs(const Adjacency& adj, const ProcedureTree& tree,
                                                               std::size_t facts, std::uint32_t u, std::uint32_t d1) {
  const auto top = tree.root_bag(u);
  auto allowed = [&](std::uint32_t x) {
    const auto rb = tree.root_bag(static_cast<std::uint32_t>(x / facts));
    return top <= rb && rb < tree.subtree_end(top);
  };
  std::vector<char> seen(adj.size(), 0);
  std::deque<std::uint32_t> q{static_cast<std::uint32_t>(u * facts + d1)};
  seen[q.front()] = 1;
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  while (!q.empty()) {
    const auto x = q.front();
    q.pop_front();
    out.emplace(static_cast<std::uint32_t>(x / facts), static_cast<std::uint32_t>(x % facts));
    for (auto y : adj[x])
      if (!seen[y] && allowed(y)) {
        seen[y] = 1;
        q.push_back(y);
      }
  }
  return out;
}

AncSets reference_ancestors(const ProcedureTree& tree, std::size_t facts, const Reach& reach, bool backward) {
  const std::uint32_t nb = static_cast<std::uint32_t>(tree.bag_count());
  AncSets F(nb);
  auto local = [&](std::uint32_t u, std::uint32_t a, std::uint32_t v, std::uint32_t c) {
    return backward ? reach[v * facts + c][u * facts + a] != 0 : reach[u * facts + a][v * facts + c] != 0;
  };
  // bags are numbered in pre-order, so parents come first
  for (std::uint32_t b = 0; b < nb; ++b) {
    const auto bag = tree.bag(b);
    const auto depth = tree.depth(b);
    F[b].assign(bag.size(), std::vector<std::set<AncItem>>(facts));
    if (tree.parent(b) >= 0) {
      const auto p = static_cast<std::uint32_t>(tree.parent(b));
      for (std::uint32_t s = 0; s < bag.size(); ++s) {
        const auto ps = tree.slot(p, bag[s]);
        if (ps == kNone) continue;
        for (std::uint32_t d = 0; d < facts; ++d) F[b][s][d] = F[p][ps][d];
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::uint32_t s = 0; s < bag.size(); ++s)
        for (std::uint32_t t = 0; t < bag.size(); ++t)
          for (std::uint32_t a = 0; a < facts; ++a)
            for (std::uint32_t c = 0; c < facts; ++c) {
              if (!local(bag[s], a, bag[t], c)) continue;
              auto& mine = F[b][s][a];
              changed |= mine.insert({depth, bag[t], c}).second;
              for (const auto& item : F[b][t][c])
                if (std::get<0>(item) < depth) changed |= mine.insert(item).second;
            }
    }
  }
  return F;
}

DescSets reference_descendants(const ProcedureTree& tree, std::size_t facts, const Reach& reach) {
  const std::size_t n = tree.vertex_count();
  DescSets F(n * facts);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t d = 0; d < facts; ++d) F[u * facts + d].insert({u, d});
  for (std::uint32_t b = static_cast<std::uint32_t>(tree.bag_count()); b-- > 0;) {
    const auto bag = tree.bag(b);
    for (bool changed = true; changed;) {
      changed = false;
      for (auto u : bag)
        for (auto v : bag) {
          if (tree.root_bag(v) != b) continue;
          for (std::uint32_t a = 0; a < facts; ++a)
            for (std::uint32_t c = 0; c < facts; ++c) {
              if (!reach[u * facts + a][v * facts + c]) continue;
              for (const auto& item : F[v * facts + c]) changed |= F[u * facts + a].insert(item).second;
            }
        }
    }
  }
  return F;
}

AncSets decode_ancestors(const ProcedureTree& tree, std::size_t facts, const std::vector<PackedStrings>& per_bag) {
  const std::uint32_t nb = static_cast<std::uint32_t>(tree.bag_count());
  AncSets F(nb);
  for (std::uint32_t b = 0; b < nb; ++b) {
    const auto bag = tree.bag(b);
    F[b].assign(bag.size(), std::vector<std::set<AncItem>>(facts));
    for (std::uint32_t s = 0; s < bag.size(); ++s)
      for (std::uint32_t d = 0; d < facts; ++d) {
        const auto str = per_bag[b].get(s, d);
        for (std::int32_t a = static_cast<std::int32_t>(b); a >= 0; a = tree.parent(static_cast<std::uint32_t>(a))) {
          const auto au = static_cast<std::uint32_t>(a);
          const std::size_t off = (tree.delta(b) - tree.delta(au)) * facts;
          const auto abag = tree.bag(au);
          for (std::uint32_t t = 0; t < abag.size(); ++t)
            for (std::uint32_t c = 0; c < facts; ++c)
              if (bits::test(str, off + t * facts + c)) F[b][s][d].insert({tree.depth(au), abag[t], c});
        }
      }
  }
  return F;
}

DescSets decode_descendants(const ProcedureTree& tree, std::size_t facts, const PackedStrings& desc) {
  const std::size_t n = tree.vertex_count();
  DescSets F(n * facts);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t d = 0; d < facts; ++d) {
      const auto str = desc.get(u, d);
      for (std::size_t i = 0; i < std::size_t{tree.alpha(u)} * facts; ++i)
        if (bits::test(str, i))
          F[u * facts + d].insert({tree.vertex_at(static_cast<std::uint32_t>(tree.beta(u) + i / facts)),
                                   static_cast<std::uint32_t>(i % facts)});
    }
  return F;
}

}  // namespace ifds::oracle
