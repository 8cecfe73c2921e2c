#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ifds/bits.hpp"

namespace ifds {

using FactIndex = std::uint32_t;

class RelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// D* = D plus the 0 fact, which always sits at index 0.
class FactDomain {
 public:
  FactDomain() : names_{"0"} { index_.emplace("0", 0); }
  explicit FactDomain(const std::vector<std::string>& facts);

  std::size_t size() const { return names_.size() - 1; }
  std::size_t extended_size() const { return names_.size(); }

  const std::string& name(FactIndex i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  bool contains(const std::string& fact) const { return index_.count(fact) != 0; }
  FactIndex index_of(const std::string& fact) const;

  bool operator==(const FactDomain& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, FactIndex> index_;
};

/// Succinct form of a distributive flow function over D*.
/// Row a holds the targets of source fact a. The representation is kept
/// normalized: (0,0) is present, no pair (a,0) with a != 0 exists, and rows
/// a != 0 never repeat targets already generated by row 0.
class FlowRelation {
 public:
  FlowRelation() = default;
  explicit FlowRelation(std::size_t extended_size);

  static FlowRelation identity(std::size_t extended_size);
  /// Pairs are normalized; a pair (a,0) with a != 0 is rejected.
  static FlowRelation from_pairs(std::size_t extended_size,
                                 const std::vector<std::pair<FactIndex, FactIndex>>& pairs);
  /// f(X) = (X - kill) | gen, with gen and kill given as fact indices of D.
  static FlowRelation gen_kill(std::size_t extended_size, const std::vector<FactIndex>& gen,
                               const std::vector<FactIndex>& kill);

  std::size_t extended_size() const { return matrix_.rows(); }

  bool contains(FactIndex a, FactIndex b) const { return matrix_.test(a, b); }
  /// Adds a pair and renormalizes.
  void add(FactIndex a, FactIndex b);

  std::span<const Word> row(FactIndex a) const { return matrix_.row(a); }
  std::vector<std::pair<FactIndex, FactIndex>> pairs() const;
  std::size_t pair_count() const;

  /// Degree of fact a on the source side and on the target side of the
  /// bipartite graph.
  std::size_t out_degree(FactIndex a) const;
  std::size_t in_degree(FactIndex b) const;

  /// Input and output are sets over D*; bit 0 of the input is ignored and
  /// bit 0 of the output is always set.
  BitString apply(const BitString& input) const;

  bool operator==(const FlowRelation& other) const { return matrix_ == other.matrix_; }

 private:
  void normalize();
  void check(FactIndex a) const;

  BitMatrix matrix_;
};

/// Relation of g after f, i.e. apply(compose(f,g),X) == apply(g, apply(f,X)).
FlowRelation compose(const FlowRelation& f, const FlowRelation& g);

}  // namespace ifds
