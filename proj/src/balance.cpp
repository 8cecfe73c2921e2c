#include "ifds/balance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ifds {

namespace {

std::vector<std::uint32_t> subtree_sizes(const TreeDecomposition& td,
                                         const std::vector<std::vector<std::uint32_t>>& ch) {
  std::vector<std::uint32_t> order;
  order.reserve(td.size());
  std::vector<std::uint32_t> stack{td.root};
  while (!stack.empty()) {
    const auto b = stack.back();
    stack.pop_back();
    order.push_back(b);
    for (auto c : ch[b]) stack.push_back(c);
  }
  std::vector<std::uint32_t> size(td.size(), 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (td.parent[*it] >= 0) size[td.parent[*it]] += size[*it];
  return size;
}

}  // namespace

TreeDecomposition binarize(const TreeDecomposition& td) {
  TreeDecomposition out;
  if (td.size() == 0) return out;
  auto ch = td.children();
  const auto size = subtree_sizes(td, ch);
  for (auto& l : ch)
    std::stable_sort(l.begin(), l.end(), [&](auto a, auto b) { return size[a] > size[b]; });

  auto add = [&](std::vector<std::uint32_t> bag, std::int32_t parent) {
    out.bags.push_back(std::move(bag));
    out.parent.push_back(parent);
    return static_cast<std::int32_t>(out.bags.size() - 1);
  };
  out.root = 0;
  // (old bag, new parent id)
  std::vector<std::pair<std::uint32_t, std::int32_t>> stack{{td.root, -1}};
  while (!stack.empty()) {
    const auto [b, par] = stack.back();
    stack.pop_back();
    std::int32_t holder = add(td.bags[b], par);
    const auto& kids = ch[b];
    std::size_t i = 0;
    while (kids.size() - i > 2) {
      stack.emplace_back(kids[i++], holder);
      holder = add(td.bags[b], holder);
    }
    for (; i < kids.size(); ++i) stack.emplace_back(kids[i], holder);
  }
  return out;
}

namespace {

class Rebuilder {
 public:
  explicit Rebuilder(const TreeDecomposition& td) : td_(td), adj_(td.size()), removed_(td.size(), 0),
                                                    stamp_(td.size(), 0), parent_(td.size()), depth_(td.size()), local_(td.size()) {
    for (std::uint32_t b = 0; b < td.size(); ++b) {
      if (td.parent[b] < 0) continue;
      adj_[b].push_back(static_cast<std::uint32_t>(td.parent[b]));
      adj_[td.parent[b]].push_back(b);
    }
    sorted_.resize(td.size());
    for (std::uint32_t b = 0; b < td.size(); ++b) {
      sorted_[b] = td.bags[b];
      std::sort(sorted_[b].begin(), sorted_[b].end());
    }
  }

  TreeDecomposition run() {
    std::vector<std::pair<std::uint32_t, std::int32_t>> work{{td_.root, -1}};
    while (!work.empty()) {
      const auto [member, par] = work.back();
      work.pop_back();
      collect(member);
      if (attach_.size() > 3) throw std::logic_error("balancing produced a component with >3 attachments");

      std::vector<std::uint32_t> boundary;
      for (auto [in, out] : attach_) {
        std::set_intersection(sorted_[in].begin(), sorted_[in].end(), sorted_[out].begin(), sorted_[out].end(),
                              std::back_inserter(boundary));
      }
      const std::uint32_t c = attach_.size() == 3 ? median() : centroid();

      std::vector<std::uint32_t> bag = sorted_[c];
      bag.insert(bag.end(), boundary.begin(), boundary.end());
      std::sort(bag.begin(), bag.end());
      bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
      out_.bags.push_back(std::move(bag));
      out_.parent.push_back(par);
      const auto id = static_cast<std::int32_t>(out_.bags.size() - 1);
      if (par < 0) out_.root = static_cast<std::uint32_t>(id);
      removed_[c] = 1;
      for (auto nb : adj_[c])
        if (!removed_[nb]) work.emplace_back(nb, id);
    }
    return out_;
  }

 private:
  // DFS over the component of `root` in the tree minus removed bags; fills
  // comp_ (DFS order), parent_, depth_ and attach_.
  void walk(std::uint32_t root, bool record_attachments) {
    ++tick_;
    comp_.clear();
    if (record_attachments) attach_.clear();
    std::vector<std::uint32_t> stack{root};
    stamp_[root] = tick_;
    parent_[root] = kNone;
    depth_[root] = 0;
    while (!stack.empty()) {
      const auto b = stack.back();
      stack.pop_back();
      comp_.push_back(b);
      for (auto nb : adj_[b]) {
        if (removed_[nb]) {
          if (record_attachments) attach_.emplace_back(b, nb);
          continue;
        }
        if (stamp_[nb] == tick_) continue;
        stamp_[nb] = tick_;
        parent_[nb] = b;
        depth_[nb] = depth_[b] + 1;
        stack.push_back(nb);
      }
    }
  }

  void collect(std::uint32_t member) { walk(member, true); }

  std::uint32_t centroid() {
    const auto total = static_cast<std::uint32_t>(comp_.size());
    std::vector<std::uint32_t> size(comp_.size(), 1);
    // comp_ is in DFS order, so children come after their parents.
    std::vector<std::uint32_t> index_of_parent(comp_.size(), kNone);
    for (std::uint32_t i = 0; i < comp_.size(); ++i) local_[comp_[i]] = i;
    for (std::uint32_t i = 1; i < comp_.size(); ++i) index_of_parent[i] = local_[parent_[comp_[i]]];
    std::vector<std::uint32_t> largest(comp_.size(), 0);
    for (std::uint32_t i = static_cast<std::uint32_t>(comp_.size()); i-- > 1;) {
      size[index_of_parent[i]] += size[i];
      largest[index_of_parent[i]] = std::max(largest[index_of_parent[i]], size[i]);
    }
    std::uint32_t best = comp_[0];
    std::uint32_t best_part = total + 1;
    for (std::uint32_t i = 0; i < comp_.size(); ++i) {
      const std::uint32_t part = std::max(largest[i], total - size[i]);
      if (part < best_part) {
        best_part = part;
        best = comp_[i];
      }
    }
    return best;
  }

  // Bag on all three pairwise paths between the attachment points.
  std::uint32_t median() {
    const std::uint32_t x1 = attach_[0].first, x2 = attach_[1].first, x3 = attach_[2].first;
    walk(x1, false);
    std::uint32_t a = x2, b = x3;
    while (depth_[a] > depth_[b]) a = parent_[a];
    while (depth_[b] > depth_[a]) b = parent_[b];
    while (a != b) {
      a = parent_[a];
      b = parent_[b];
    }
    return a;
  }

  const TreeDecomposition& td_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::vector<std::uint32_t>> sorted_;
  std::vector<char> removed_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t tick_ = 0;
  std::vector<std::uint32_t> parent_, depth_;
  std::vector<std::uint32_t> local_;
  std::vector<std::uint32_t> comp_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> attach_;
  TreeDecomposition out_;
};

}  // namespace

TreeDecomposition balance_binarize(const TreeDecomposition& td, const BalanceOptions& opts, BalanceReport* report) {
  TreeDecomposition bin = binarize(td);
  BalanceReport rep;
  rep.input_width = td.width();
  rep.input_height = bin.height();
  TreeDecomposition result;
  const double bound = opts.skip_factor * std::log2(std::max<std::size_t>(2, bin.size()));
  if (!opts.force_rebuild && static_cast<double>(rep.input_height) <= bound) {
    result = std::move(bin);
  } else {
    TreeDecomposition rebuilt = binarize(Rebuilder(bin).run());
    if (!opts.force_rebuild && rebuilt.height() >= rep.input_height) {
      result = std::move(bin);
    } else {
      result = std::move(rebuilt);
      rep.rebuilt = true;
    }
  }
  rep.output_width = result.width();
  rep.output_height = result.height();
  rep.output_bags = result.size();
  if (report) *report = rep;
  return result;
}

}  // namespace ifds
