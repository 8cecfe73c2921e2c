#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ifds {

class LcaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowest common ancestors by Euler tour plus a sparse table of range minima:
/// linear-size tables per level, constant-time queries.
class LcaIndex {
 public:
  LcaIndex() = default;
  /// parent[b] < 0 marks the root.
  explicit LcaIndex(const std::vector<std::int32_t>& parent);

  std::size_t size() const { return t_.first.size(); }
  std::uint32_t lca(std::uint32_t a, std::uint32_t b) const;

  // Raw tables, used by the index file writer and reader.
  struct Tables {
    std::vector<std::uint32_t> euler;   // tour of nodes, 2n-1 entries
    std::vector<std::uint32_t> depth;   // depth of each tour entry
    std::vector<std::uint32_t> first;   // first tour position of each node
    std::vector<std::uint32_t> sparse;  // level-major argmin table over the tour
  };
  const Tables& tables() const { return t_; }
  static LcaIndex from_tables(Tables t);

 private:
  std::uint32_t better(std::uint32_t i, std::uint32_t j) const { return t_.depth[j] < t_.depth[i] ? j : i; }

  Tables t_;
};

}  // namespace ifds
