#pragma once

#include <cstdint>

#include "ifds/instance.hpp"
#include "ifds/mini_program.hpp"

namespace ifds {

/// Returns IFDS_SEED from the environment when set, otherwise `fallback`.
/// Throws std::invalid_argument when the variable is not a number.
std::uint64_t seed_from_env(std::uint64_t fallback);

struct ProgramShape {
  std::uint64_t seed = 1;
  std::size_t vertices = 100;   // approximate total over all procedures
  std::size_t proc_size = 60;   // approximate vertices per procedure
  std::size_t vars = 2;
  std::size_t labels_per_var = 2;  // definition labels (reaching definitions)
  double call_density = 0.05;   // chance that a statement is a call
  std::size_t max_depth = 3;    // if/while nesting
  std::size_t max_params = 3;
  bool recursion = true;
};

/// Random structured program: statements, if/else and while loops, calls
/// between procedures. Procedure 0 is "main".
MiniProgram random_program(const ProgramShape& shape);

struct RandomOptions {
  std::uint64_t seed = 1;
  std::size_t n = 100;
  std::size_t domain = 2;
  std::size_t width_bound = 4;  // 0 skips the width check
  double call_density = 0.05;
  std::size_t proc_size = 60;
  std::size_t bandwidth = 3;
  bool recursion = true;
};

/// Random instance over a random structured program with random relations.
/// Interprocedural relations respect opts.bandwidth. Throws
/// std::runtime_error if no attempt meets the width bound.
Instance gen_random(const RandomOptions& opts);

/// Random program of about n vertices encoded for one of the analyses.
/// domain is the number of variables (reaching definitions: of labels).
Instance gen_random_analysis(AnalysisKind kind, std::uint64_t seed, std::size_t n, std::size_t domain,
                             std::size_t proc_size = 60, double call_density = 0.05);

}  // namespace ifds
