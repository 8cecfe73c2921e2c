#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ifds/instance.hpp"
#include "ifds/query_index.hpp"

namespace ifds {

class QueryParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Query {
  enum class Kind : std::uint8_t { Pair, Source };
  Kind kind = Kind::Pair;
  VertexId u = 0;
  FactIndex d1 = 0;
  VertexId v = 0;  // pair only
  FactIndex d2 = 0;

  bool operator==(const Query&) const = default;
};

/// One query per line: `pair <u> <d1> <v> <d2>` or `source <u> <d1>`, with
/// vertex names and fact names (`0` for the zero fact). Blank lines and lines
/// starting with '#' are skipped.
std::vector<Query> parse_queries(const Instance& inst, std::string_view text);
std::vector<Query> load_queries(const Instance& inst, const std::string& path);
std::string format_query(const Instance& inst, const Query& q);

/// `legend <v,...> <fact,...>` followed by the hex bits on the next line.
std::string format_source_answer(const Instance& inst, const SourceAnswer& a);

/// Sources drawn uniformly over exploded vertices; pair targets uniformly
/// over the exploded vertices of the source's procedure.
std::vector<Query> generate_queries(const Instance& inst, std::size_t pairs, std::size_t sources, std::uint64_t seed);

}  // namespace ifds
