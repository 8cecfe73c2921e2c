#include "ifds/queries.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

namespace ifds {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t j = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > j) out.push_back(line.substr(j, i - j));
  }
  return out;
}

}  // namespace

std::vector<Query> parse_queries(const Instance& inst, std::string_view text) {
  std::vector<Query> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    auto fail = [&](const std::string& why) -> QueryParseError {
      return QueryParseError("query line " + std::to_string(lineno) + ": " + why);
    };
    auto vertex = [&](std::string_view name) {
      const auto v = inst.find_vertex(name);
      if (!v) throw fail("unknown vertex \"" + std::string(name) + "\"");
      return *v;
    };
    auto fact = [&](std::string_view name) {
      const std::string s(name);
      if (!inst.domain.contains(s)) throw fail("unknown fact \"" + s + "\"");
      return inst.domain.index_of(s);
    };
    Query q;
    if (tok[0] == "pair") {
      if (tok.size() != 5) throw fail("pair needs 4 arguments");
      q.kind = Query::Kind::Pair;
      q.u = vertex(tok[1]);
      q.d1 = fact(tok[2]);
      q.v = vertex(tok[3]);
      q.d2 = fact(tok[4]);
    } else if (tok[0] == "source") {
      if (tok.size() != 3) throw fail("source needs 2 arguments");
      q.kind = Query::Kind::Source;
      q.u = vertex(tok[1]);
      q.d1 = fact(tok[2]);
    } else {
      throw fail("unknown query kind \"" + std::string(tok[0]) + "\"");
    }
    out.push_back(q);
  }
  return out;
}

std::vector<Query> load_queries(const Instance& inst, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw QueryParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_queries(inst, ss.str());
}

std::string format_query(const Instance& inst, const Query& q) {
  const auto& dn = inst.domain;
  if (q.kind == Query::Kind::Source) return "source " + inst.vertex_names[q.u] + " " + dn.name(q.d1);
  return "pair " + inst.vertex_names[q.u] + " " + dn.name(q.d1) + " " + inst.vertex_names[q.v] + " " + dn.name(q.d2);
}

std::string format_source_answer(const Instance& inst, const SourceAnswer& a) {
  std::string out = "legend ";
  bool first = true;
  for (auto v : a.legend()) {
    if (!first) out += ',';
    out += inst.vertex_names[v];
    first = false;
  }
  out += ' ';
  first = true;
  for (const auto& f : inst.domain.names()) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
  out += a.bits().to_hex();
  return out;
}

std::vector<Query> generate_queries(const Instance& inst, std::size_t pairs, std::size_t sources, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t P = inst.fact_count();
  std::uniform_int_distribution<VertexId> vert(0, static_cast<VertexId>(inst.vertex_count() - 1));
  std::uniform_int_distribution<FactIndex> fact(0, static_cast<FactIndex>(P - 1));
  std::vector<Query> out;
  out.reserve(pairs + sources);
  for (std::size_t i = 0; i < pairs; ++i) {
    Query q;
    q.u = vert(rng);
    q.d1 = fact(rng);
    const auto& proc = inst.procedure_of(q.u);
    q.v = proc.first + std::uniform_int_distribution<VertexId>(0, proc.size - 1)(rng);
    q.d2 = fact(rng);
    out.push_back(q);
  }
  for (std::size_t i = 0; i < sources; ++i) {
    Query q;
    q.kind = Query::Kind::Source;
    q.u = vert(rng);
    q.d1 = fact(rng);
    out.push_back(q);
  }
  return out;
}

}  // namespace ifds
