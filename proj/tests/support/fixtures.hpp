#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifds/exploded.hpp"
#include "ifds/instance.hpp"
#include "ifds/summarizer.hpp"
#include "ifds/tree_index.hpp"
#include "oracles.hpp"

namespace ifds::fixtures {

std::string data_path(const std::string& name);

/// Two procedures f and main with one call site; facts x and y.
Instance pointer_example();
/// Single procedure over v1..v7 with D empty, used for decomposition tests.
Instance cycle_example();
/// Hand-made decomposition of cycle_example: b1 {v1,v2,v5} at the root,
/// b2 {v2,v3,v5} below it, leaves b3 {v3,v4,v5} and b4 {v2,v6,v7}.
/// Bags are numbered 0..3 in that order.
ProcedureTree cycle_tree();

struct SmallShape {
  std::size_t max_n = 40;
  std::size_t max_domain = 3;
  std::size_t proc_size = 10;
  double call_density = 0.2;
};

/// Random instance number k of a seeded family, recursion included.
Instance small_instance(std::uint64_t seed, std::size_t k, const SmallShape& shape = {});

/// Summaries, GHat and procedure trees of an instance, plus the closure of
/// each procedure's GHat taken before any local edges are added.
struct Prepared {
  Instance inst;
  ExplodedGraph eg;
  SummarySet sums;
  GHat g;
  std::vector<ProcedureTree> trees;
  std::vector<oracle::Reach> reach;

  explicit Prepared(Instance i);
  /// Local reachability pass on every procedure (mutates g).
  void run_local();
};

}  // namespace ifds::fixtures
