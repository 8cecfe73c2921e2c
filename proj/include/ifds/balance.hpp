#pragma once

#include <cstddef>

#include "ifds/tree_decomposition.hpp"

namespace ifds {

/// Gives every bag at most two children by hanging surplus children below
/// copies of their parent. The largest subtree stays a direct child.
TreeDecomposition binarize(const TreeDecomposition& td);

struct BalanceReport {
  std::size_t input_width = 0;
  std::size_t input_height = 0;
  std::size_t output_width = 0;
  std::size_t output_height = 0;
  std::size_t output_bags = 0;
  bool rebuilt = false;
};

struct BalanceOptions {
  /// Binarized input trees whose height is already within
  /// skip_factor * log2(#bags) are kept as they are.
  double skip_factor = 2.0;
  bool force_rebuild = false;
};

/// Rebuilds a decomposition of width t into a binary one of logarithmic
/// height and width at most 4t+3: every recursion step picks a bag splitting
/// the current subtree (its centroid, or with three attachment points the
/// bag separating them) and stores it together with the boundary vertices.
TreeDecomposition balance_binarize(const TreeDecomposition& td, const BalanceOptions& opts = {},
                                   BalanceReport* report = nullptr);

}  // namespace ifds
