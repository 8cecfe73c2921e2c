#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifds/instance.hpp"

namespace ifds {

class BenchMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchOptions {
  std::string instance_id = "instance";
  std::size_t pairs = 10000;
  std::size_t sources = 100;
  std::vector<std::string> algos{"tw", "nopp", "cpp", "od"};
  std::size_t threads = 1;
  double budget_s = 300.0;
  std::size_t cpp_memory_bytes = std::size_t{4} << 30;
  /// NOPP repeats the whole analysis per query, so it only runs this many
  /// pair and source queries (a prefix of the query list).
  std::size_t nopp_limit = 20;
  std::size_t width_cap = 10;
  std::uint64_t seed = 1;
};

struct BenchRecord {
  std::string instance_id;
  std::size_t n = 0;
  std::size_t domain = 0;
  std::size_t width = 0;
  std::size_t exploded_size = 0;  // exploded vertices plus exploded edges
  std::string algo;
  std::size_t threads = 1;
  double preprocess_ms = 0;
  std::size_t pair_queries = 0;
  double pair_mean_us = 0, pair_median_us = 0;
  std::size_t source_queries = 0;
  double source_mean_us = 0, source_median_us = 0;
  std::uint64_t checksum = 0;  // over the query prefix every algorithm answered
  bool timeout = false;
};

/// Runs every requested algorithm on the same random queries and returns
/// one record per algorithm. All answers are compared against the tree
/// index (tw, always run) and BenchMismatch is thrown on any difference.
std::vector<BenchRecord> bench_run(const Instance& inst, const BenchOptions& opts);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
/// gnuplot script drawing mean pair and source query times per algorithm
/// from the CSV written by write_csv.
std::string gnuplot_script(const std::string& csv_path, const std::string& png_path);

}  // namespace ifds
