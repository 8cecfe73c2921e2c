#include "fixtures.hpp"

#include <random>

#include "ifds/generators.hpp"
#include "ifds/reach_index.hpp"
#include "ifds/tree_decomposition.hpp"

#ifndef IFDS_TEST_DATA_DIR
#error "IFDS_TEST_DATA_DIR must be defined"
#endif

namespace ifds::fixtures {

std::string data_path(const std::string& name) { return std::string(IFDS_TEST_DATA_DIR) + "/" + name; }

Instance pointer_example() { return load_instance(data_path("pointer_example.json")); }

Instance cycle_example() { return load_instance(data_path("cycle_example.json")); }

ProcedureTree cycle_tree() {
  // local ids: v1 = 0 ... v7 = 6
  std::vector<std::vector<std::uint32_t>> bags{{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {1, 5, 6}};
  std::vector<std::int32_t> parent{-1, 0, 1, 1};
  return ProcedureTree(from_bags(std::move(bags), std::move(parent)), 7);
}

Instance small_instance(std::uint64_t seed, std::size_t k, const SmallShape& shape) {
  std::mt19937_64 rng(seed * 1000003 + k);
  RandomOptions o;
  o.seed = rng();
  o.n = std::uniform_int_distribution<std::size_t>(4, shape.max_n)(rng);
  o.domain = std::uniform_int_distribution<std::size_t>(0, shape.max_domain)(rng);
  o.proc_size = shape.proc_size;
  o.call_density = shape.call_density;
  o.recursion = true;
  o.width_bound = 0;
  return gen_random(o);
}

Prepared::Prepared(Instance i) : inst(std::move(i)), eg(inst), sums(compute_summaries(inst, eg)), g(inst, sums) {
  for (ProcId p = 0; p < inst.procedures.size(); ++p) {
    trees.push_back(build_procedure_tree(inst, p));
    reach.push_back(oracle::closure(oracle::ghat_adjacency(inst, g, p)));
  }
}

void Prepared::run_local() {
  for (ProcId p = 0; p < inst.procedures.size(); ++p) compute_local(g, trees[p], inst.procedures[p].first);
}

}  // namespace ifds::fixtures
