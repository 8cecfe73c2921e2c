#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifds/instance.hpp"

namespace ifds {

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Small structured IR: statements over named variables, if/while nesting,
/// calls with by-value or by-reference arguments. Variables with the same
/// name in different procedures map to the same data-flow fact.
struct Stmt {
  enum class Kind : std::uint8_t { Decl, Assign, Use, Call, If, While };
  Kind kind = Kind::Use;
  std::vector<std::string> vars;  // Decl, Use: the variables; Assign: the target
  std::vector<std::string> uses;  // Assign
  std::string def;                // Assign: definition label, may be empty
  std::string callee;             // Call
  std::vector<std::string> args;
  std::vector<bool> by_ref;
  std::vector<Stmt> body;         // If: then branch; While: loop body
  std::vector<Stmt> else_body;    // If
  /// Optional vertex names: one name, two for a call (call, return site) or
  /// two for an if (branch, join).
  std::vector<std::string> names;

  static Stmt decl(std::vector<std::string> vars);
  static Stmt assign(std::string target, std::vector<std::string> uses, std::string def = {});
  static Stmt use(std::vector<std::string> vars);
  static Stmt call(std::string callee, std::vector<std::string> args, std::vector<bool> by_ref);
  static Stmt if_(std::vector<Stmt> then_body, std::vector<Stmt> else_body = {});
  static Stmt while_(std::vector<Stmt> body);
  Stmt&& named(std::vector<std::string> n) && {
    names = std::move(n);
    return std::move(*this);
  }
};

struct MiniProc {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> locals;
  std::vector<Stmt> body;
  std::string start_name;  // empty: "<name>.s"
  std::string exit_name;   // empty: "<name>.e"
};

struct MiniProgram {
  std::vector<MiniProc> procs;
};

/// Control flow of a MiniProgram. Every edge (u, w) carries the effect of
/// the statement at u; stmt is null at vertices without an effect (start,
/// exit, branch, join, loop head, return site).
struct LoweredProgram {
  struct Vertex {
    std::string name;
    const Stmt* stmt = nullptr;
  };
  struct Call {
    std::size_t call = 0;         // vertex indices within the caller
    std::size_t return_site = 0;
    std::size_t callee = 0;       // procedure index
    const Stmt* stmt = nullptr;
  };
  struct Proc {
    const MiniProc* source = nullptr;
    std::vector<Vertex> vertices;
    std::size_t start = 0, exit = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // includes call-to-return edges
    std::vector<Call> calls;
  };
  std::vector<Proc> procs;
};

/// Throws ProgramError on unknown callees or argument count mismatches.
LoweredProgram lower(const MiniProgram& prog);

enum class AnalysisKind : std::uint8_t { Reach, PossUninit, SimpUninit, Live, ReachDefs };

const char* to_string(AnalysisKind kind);
/// Accepts reach, poss-uninit, simp-uninit, live, reach-defs.
AnalysisKind parse_analysis_kind(std::string_view name);

/// IFDS instance of the given analysis; fact semantics are described in
/// docs/analyses.md. Liveness is posed on the reversed flow graphs.
Instance gen_analysis(const MiniProgram& prog, AnalysisKind kind);

/// The two-procedure pointer example: f(int*& x, int* y) assigns y twice,
/// main declares x and y, calls f(x, y) and uses both.
MiniProgram pointer_example();

}  // namespace ifds
