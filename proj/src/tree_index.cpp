#include "ifds/tree_index.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ifds/balance.hpp"

namespace ifds {

ProcedureTree::ProcedureTree(const TreeDecomposition& td, std::size_t vertex_count) {
  if (td.size() == 0) throw std::invalid_argument("empty tree decomposition");
  const auto ch = td.children();
  std::vector<std::uint32_t> order;
  order.reserve(td.size());
  std::vector<std::uint32_t> stack{td.root};
  while (!stack.empty()) {
    const auto b = stack.back();
    stack.pop_back();
    if (ch[b].size() > 2) throw std::invalid_argument("tree decomposition is not binary");
    order.push_back(b);
    for (auto it = ch[b].rbegin(); it != ch[b].rend(); ++it) stack.push_back(*it);
  }
  if (order.size() != td.size()) throw std::invalid_argument("tree decomposition is not connected");
  std::vector<std::uint32_t> renum(td.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) renum[order[i]] = i;

  parent_.resize(order.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    const auto& bag = td.bags[order[i]];
    bag_vertices_.insert(bag_vertices_.end(), bag.begin(), bag.end());
    bag_offsets_.push_back(static_cast<std::uint32_t>(bag_vertices_.size()));
    const auto p = td.parent[order[i]];
    parent_[i] = p < 0 ? -1 : static_cast<std::int32_t>(renum[p]);
  }
  derive(vertex_count);
  lca_ = LcaIndex(parent_);
}

ProcedureTree ProcedureTree::from_preorder(std::vector<std::vector<std::uint32_t>> bags,
                                           std::vector<std::int32_t> parent, std::size_t vertex_count,
                                           LcaIndex::Tables lca) {
  if (bags.empty() || bags.size() != parent.size()) throw std::invalid_argument("malformed bag table");
  if (parent[0] != -1) throw std::invalid_argument("bag 0 must be the root");
  // Pre-order numbering means every parent precedes its children and each
  // new bag hangs off the current root-to-leaf chain.
  std::vector<std::uint32_t> chain{0};
  for (std::uint32_t b = 1; b < bags.size(); ++b) {
    const auto p = parent[b];
    if (p < 0 || static_cast<std::uint32_t>(p) >= b) throw std::invalid_argument("bags are not in pre-order");
    while (!chain.empty() && chain.back() != static_cast<std::uint32_t>(p)) chain.pop_back();
    if (chain.empty()) throw std::invalid_argument("bags are not in pre-order");
    chain.push_back(b);
  }
  ProcedureTree t;
  for (auto& bag : bags) {
    t.bag_vertices_.insert(t.bag_vertices_.end(), bag.begin(), bag.end());
    t.bag_offsets_.push_back(static_cast<std::uint32_t>(t.bag_vertices_.size()));
  }
  t.parent_ = std::move(parent);
  t.derive(vertex_count);
  t.lca_ = LcaIndex::from_tables(std::move(lca));
  if (t.lca_.size() != t.bag_count()) throw std::invalid_argument("LCA tables do not match the bag table");
  return t;
}

void ProcedureTree::derive(std::size_t vertex_count) {
  const std::size_t nb = parent_.size();
  children_.assign(2 * nb, kNone);
  depth_.assign(nb, 0);
  delta_.assign(nb, 0);
  subtree_end_.resize(nb);
  for (std::uint32_t b = 0; b < nb; ++b) {
    const auto size = bag_offsets_[b + 1] - bag_offsets_[b];
    subtree_end_[b] = b + 1;
    if (parent_[b] < 0) {
      delta_[b] = size;
      continue;
    }
    const auto p = static_cast<std::uint32_t>(parent_[b]);
    if (children_[2 * p] == kNone) {
      children_[2 * p] = b;
    } else if (children_[2 * p + 1] == kNone) {
      children_[2 * p + 1] = b;
    } else {
      throw std::invalid_argument("bag " + std::to_string(p) + " has more than two children");
    }
    depth_[b] = depth_[p] + 1;
    delta_[b] = delta_[p] + size;
  }
  for (std::uint32_t b = static_cast<std::uint32_t>(nb); b-- > 1;) {
    const auto p = static_cast<std::uint32_t>(parent_[b]);
    subtree_end_[p] = std::max(subtree_end_[p], subtree_end_[b]);
  }

  root_bag_.assign(vertex_count, kNone);
  for (std::uint32_t b = 0; b < nb; ++b) {
    for (auto v : bag(b)) {
      if (v >= vertex_count) throw std::invalid_argument("bag " + std::to_string(b) + " names an unknown vertex");
      if (root_bag_[v] == kNone) root_bag_[v] = b;
    }
  }
  pos_begin_.assign(nb + 1, 0);
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    if (root_bag_[v] == kNone) throw std::invalid_argument("vertex " + std::to_string(v) + " is in no bag");
    ++pos_begin_[root_bag_[v] + 1];
  }
  for (std::size_t b = 0; b < nb; ++b) pos_begin_[b + 1] += pos_begin_[b];
  position_.resize(vertex_count);
  order_.resize(vertex_count);
  std::vector<std::uint32_t> next(pos_begin_.begin(), pos_begin_.end() - 1);
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    const auto p = next[root_bag_[v]]++;
    position_[v] = p;
    order_[p] = v;
  }
}

std::uint32_t ProcedureTree::ancestor_at_depth(std::uint32_t b, std::uint32_t depth) const {
  while (depth_[b] > depth) b = static_cast<std::uint32_t>(parent_[b]);
  return b;
}

std::uint32_t ProcedureTree::slot(std::uint32_t b, std::uint32_t v) const {
  const auto vs = bag(b);
  for (std::uint32_t i = 0; i < vs.size(); ++i)
    if (vs[i] == v) return i;
  return kNone;
}

std::size_t ProcedureTree::width() const {
  std::size_t w = 0;
  for (std::size_t b = 0; b < bag_count(); ++b) w = std::max<std::size_t>(w, bag_offsets_[b + 1] - bag_offsets_[b]);
  return w == 0 ? 0 : w - 1;
}

std::size_t ProcedureTree::height() const {
  std::uint32_t h = 0;
  for (auto d : depth_) h = std::max(h, d);
  return h;
}

TreeDecomposition ProcedureTree::as_decomposition() const {
  TreeDecomposition td;
  td.root = 0;
  td.parent = parent_;
  for (std::uint32_t b = 0; b < bag_count(); ++b) {
    const auto vs = bag(b);
    td.bags.emplace_back(vs.begin(), vs.end());
  }
  return td;
}

ProcedureTree build_procedure_tree(const Instance& inst, ProcId p, const TreeOptions& opts, TreeStats* stats) {
  const auto g = flow_graph(inst, p);
  const auto heuristic = g.size() > opts.min_fill_limit ? EliminationHeuristic::MinDegree : opts.heuristic;
  const auto raw = decompose(g, heuristic);
  BalanceOptions bopts;
  bopts.skip_factor = opts.skip_factor;
  bopts.force_rebuild = opts.force_rebuild;
  BalanceReport rep;
  const auto balanced = balance_binarize(raw, bopts, &rep);
  ProcedureTree tree(balanced, g.size());
  if (stats) {
    stats->raw_width = rep.input_width;
    stats->width = rep.output_width;
    stats->height = rep.output_height;
    stats->bags = rep.output_bags;
    stats->rebuilt = rep.rebuilt;
  }
  return tree;
}

}  // namespace ifds
