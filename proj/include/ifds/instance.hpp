#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ifds/relation.hpp"

namespace ifds {

using VertexId = std::uint32_t;
using ProcId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EdgeKind : std::uint8_t { Intra, CallToReturn, CallToStart, ExitToReturn };

const char* to_string(EdgeKind kind);

inline bool is_interprocedural(EdgeKind kind) {
  return kind == EdgeKind::CallToStart || kind == EdgeKind::ExitToReturn;
}

struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  EdgeKind kind = EdgeKind::Intra;
  std::uint32_t call_site = kNone;  // set for the three call-related kinds

  bool operator==(const Edge&) const = default;
};

/// Vertices of a procedure occupy the dense id range [first, first + size).
struct Procedure {
  std::string name;
  VertexId first = 0;
  std::uint32_t size = 0;
  VertexId start = 0;
  VertexId exit = 0;
  std::vector<EdgeId> edges;           // Intra and CallToReturn edges
  std::vector<std::uint32_t> callers;  // call sites that target this procedure
  std::optional<std::vector<FactIndex>> domain;

  bool contains(VertexId v) const { return v >= first && v < first + size; }
  bool operator==(const Procedure&) const = default;
};

struct CallSite {
  VertexId call = 0;
  VertexId return_site = 0;
  ProcId callee = 0;
  ProcId caller = 0;
  EdgeId call_to_return = 0;
  EdgeId call_to_start = 0;
  EdgeId exit_to_return = 0;

  bool operator==(const CallSite&) const = default;
};

/// A validated supergraph together with one flow relation per edge.
/// Immutable once built; relations[e] belongs to edges[e].
class Instance {
 public:
  FactDomain domain;
  std::vector<std::string> vertex_names;
  std::vector<ProcId> proc_of;
  std::vector<Procedure> procedures;
  std::vector<CallSite> calls;
  std::vector<Edge> edges;
  std::vector<FlowRelation> relations;

  std::size_t vertex_count() const { return vertex_names.size(); }
  std::size_t fact_count() const { return domain.extended_size(); }

  std::optional<VertexId> find_vertex(std::string_view name) const;
  VertexId vertex(std::string_view name) const;
  std::uint32_t local_index(VertexId v) const { return v - procedures[proc_of[v]].first; }
  const Procedure& procedure_of(VertexId v) const { return procedures[proc_of[v]]; }

  std::optional<EdgeId> find_edge(VertexId from, VertexId to) const;

  bool operator==(const Instance& other) const;

 private:
  friend class InstanceBuilder;
  void index();

  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
};

/// Incremental construction with full validation in build(). Used by the
/// parser and by the generators.
class InstanceBuilder {
 public:
  explicit InstanceBuilder(std::vector<std::string> domain);

  void add_procedure(std::string name, std::vector<std::string> vertices, std::string start,
                     std::string exit,
                     std::optional<std::vector<std::string>> domain = std::nullopt);
  void add_edge(std::string from, std::string to);
  void add_call(std::string call, std::string return_site, std::string callee);
  void set_flow(std::string from, std::string to,
                std::vector<std::pair<std::string, std::string>> pairs);

  Instance build() const;

 private:
  struct ProcSpec {
    std::string name;
    std::vector<std::string> vertices;
    std::string start, exit;
    std::optional<std::vector<std::string>> domain;
  };
  struct CallSpec {
    std::string call, return_site, callee;
  };
  struct FlowSpec {
    std::string from, to;
    std::vector<std::pair<std::string, std::string>> pairs;
  };

  std::vector<std::string> domain_;
  std::vector<ProcSpec> procs_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::vector<CallSpec> calls_;
  std::vector<FlowSpec> flows_;
};

Instance parse_instance(std::string_view json_text);
Instance load_instance(const std::string& path);
/// Canonical JSON: procedures, vertices and edges in stored order, flow
/// entries in edge order, relation pairs sorted by fact index.
std::string to_json(const Instance& inst, int indent = -1);
void save_instance(const Instance& inst, const std::string& path);

struct BandwidthViolation {
  enum class Side : std::uint8_t { Source, Target };
  EdgeId edge = kNone;
  Side side = Side::Source;
  FactIndex fact = 0;
  std::size_t degree = 0;

  bool operator==(const BandwidthViolation&) const = default;
};

/// Degree check of the bipartite graph of a single relation.
std::vector<BandwidthViolation> validate_bandwidth(const FlowRelation& rel, std::size_t b,
                                                   EdgeId edge = kNone);
/// Checks every call-to-start and exit-to-return edge.
std::vector<BandwidthViolation> validate_bandwidth(const Instance& inst, std::size_t b);
/// Largest degree over all interprocedural relations (0 if there are none).
std::size_t max_bandwidth(const Instance& inst);

/// Path validity with respect to the call/return grammar. A path is a vertex
/// sequence whose consecutive pairs are supergraph edges; call-to-start edges
/// open the parenthesis of their call site and exit-to-return edges close it.
/// Throws InstanceError when the sequence is not a path.
bool is_same_context_valid(const Instance& inst, std::span<const VertexId> path);
bool is_interprocedurally_valid(const Instance& inst, std::span<const VertexId> path);

}  // namespace ifds
