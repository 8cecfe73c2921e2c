#include "ifds/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace ifds {

using nlohmann::json;

namespace {

std::uint64_t edge_key(VertexId from, VertexId to) {
  return (static_cast<std::uint64_t>(from) << 32) | to;
}

}  // namespace

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Intra: return "intra";
    case EdgeKind::CallToReturn: return "call-to-return";
    case EdgeKind::CallToStart: return "call-to-start";
    case EdgeKind::ExitToReturn: return "exit-to-return";
  }
  return "?";
}

std::optional<VertexId> Instance::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

VertexId Instance::vertex(std::string_view name) const {
  auto v = find_vertex(name);
  if (!v) throw InstanceError("unknown vertex \"" + std::string(name) + "\"");
  return *v;
}

std::optional<EdgeId> Instance::find_edge(VertexId from, VertexId to) const {
  auto it = edge_index_.find(edge_key(from, to));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

void Instance::index() {
  vertex_index_.clear();
  edge_index_.clear();
  for (VertexId v = 0; v < vertex_names.size(); ++v) vertex_index_.emplace(vertex_names[v], v);
  for (EdgeId e = 0; e < edges.size(); ++e) edge_index_.emplace(edge_key(edges[e].from, edges[e].to), e);
}

bool Instance::operator==(const Instance& other) const {
  return domain == other.domain && vertex_names == other.vertex_names && proc_of == other.proc_of &&
         procedures == other.procedures && calls == other.calls && edges == other.edges &&
         relations == other.relations;
}

InstanceBuilder::InstanceBuilder(std::vector<std::string> domain) : domain_(std::move(domain)) {}

void InstanceBuilder::add_procedure(std::string name, std::vector<std::string> vertices,
                                    std::string start, std::string exit,
                                    std::optional<std::vector<std::string>> domain) {
  procs_.push_back({std::move(name), std::move(vertices), std::move(start), std::move(exit),
                    std::move(domain)});
}

void InstanceBuilder::add_edge(std::string from, std::string to) {
  edges_.emplace_back(std::move(from), std::move(to));
}

void InstanceBuilder::add_call(std::string call, std::string return_site, std::string callee) {
  calls_.push_back({std::move(call), std::move(return_site), std::move(callee)});
}

void InstanceBuilder::set_flow(std::string from, std::string to,
                               std::vector<std::pair<std::string, std::string>> pairs) {
  flows_.push_back({std::move(from), std::move(to), std::move(pairs)});
}

Instance InstanceBuilder::build() const {
  Instance inst;
  try {
    inst.domain = FactDomain(domain_);
  } catch (const RelationError& e) {
    throw InstanceError(std::string("bad domain: ") + e.what());
  }
  const std::size_t p = inst.domain.extended_size();

  std::unordered_map<std::string, ProcId> proc_index;
  std::unordered_map<std::string, VertexId> vindex;
  for (const auto& spec : procs_) {
    if (spec.name.empty()) throw InstanceError("procedure without a name");
    if (proc_index.count(spec.name)) throw InstanceError("duplicate procedure \"" + spec.name + "\"");
    if (spec.vertices.empty()) throw InstanceError("procedure \"" + spec.name + "\" has no vertices");
    const auto pid = static_cast<ProcId>(inst.procedures.size());
    proc_index.emplace(spec.name, pid);
    Procedure proc;
    proc.name = spec.name;
    proc.first = static_cast<VertexId>(inst.vertex_names.size());
    proc.size = static_cast<std::uint32_t>(spec.vertices.size());
    for (const auto& v : spec.vertices) {
      if (v.empty()) throw InstanceError("empty vertex id in procedure \"" + spec.name + "\"");
      if (!vindex.emplace(v, static_cast<VertexId>(inst.vertex_names.size())).second)
        throw InstanceError("vertex \"" + v + "\" is declared more than once");
      inst.vertex_names.push_back(v);
      inst.proc_of.push_back(pid);
    }
    auto member = [&](const std::string& v, const char* role) {
      auto it = vindex.find(v);
      if (it == vindex.end() || !proc.contains(it->second))
        throw InstanceError(std::string(role) + " vertex \"" + v + "\" of procedure \"" + spec.name +
                            "\" is not one of its vertices");
      return it->second;
    };
    proc.start = member(spec.start, "start");
    proc.exit = member(spec.exit, "exit");
    if (spec.domain) {
      std::vector<FactIndex> dom;
      std::unordered_set<FactIndex> seen;
      for (const auto& f : *spec.domain) {
        if (f == "0" || !inst.domain.contains(f))
          throw InstanceError("procedure \"" + spec.name + "\" lists fact \"" + f +
                              "\" which is not in the global domain");
        const FactIndex i = inst.domain.index_of(f);
        if (!seen.insert(i).second)
          throw InstanceError("procedure \"" + spec.name + "\" lists fact \"" + f + "\" twice");
        dom.push_back(i);
      }
      std::sort(dom.begin(), dom.end());
      proc.domain = std::move(dom);
    }
    inst.procedures.push_back(std::move(proc));
  }

  auto lookup = [&](const std::string& v) {
    auto it = vindex.find(v);
    if (it == vindex.end()) throw InstanceError("reference to unknown vertex \"" + v + "\"");
    return it->second;
  };

  // Intraprocedural edges, grouped by procedure so that ids are canonical.
  std::vector<std::pair<VertexId, VertexId>> intra;
  intra.reserve(edges_.size());
  std::unordered_set<std::uint64_t> seen_edges;
  for (const auto& [f, t] : edges_) {
    const VertexId u = lookup(f), v = lookup(t);
    if (inst.proc_of[u] != inst.proc_of[v])
      throw InstanceError("edge " + f + " -> " + t + " connects two procedures");
    if (!seen_edges.insert(edge_key(u, v)).second)
      throw InstanceError("duplicate edge " + f + " -> " + t);
    intra.emplace_back(u, v);
  }
  std::stable_sort(intra.begin(), intra.end(), [&](const auto& a, const auto& b) {
    return inst.proc_of[a.first] < inst.proc_of[b.first];
  });
  std::unordered_map<std::uint64_t, EdgeId> eindex;
  for (auto [u, v] : intra) {
    const auto id = static_cast<EdgeId>(inst.edges.size());
    inst.edges.push_back({u, v, EdgeKind::Intra, kNone});
    inst.procedures[inst.proc_of[u]].edges.push_back(id);
    eindex.emplace(edge_key(u, v), id);
  }

  std::unordered_set<VertexId> call_vertices, return_vertices;
  for (const auto& spec : calls_) {
    const VertexId c = lookup(spec.call), r = lookup(spec.return_site);
    auto pit = proc_index.find(spec.callee);
    if (pit == proc_index.end())
      throw InstanceError("call at \"" + spec.call + "\" targets unknown procedure \"" + spec.callee + "\"");
    if (inst.proc_of[c] != inst.proc_of[r])
      throw InstanceError("call vertex \"" + spec.call + "\" and return site \"" + spec.return_site +
                          "\" are in different procedures");
    if (c == r) throw InstanceError("call vertex \"" + spec.call + "\" is its own return site");
    if (!call_vertices.insert(c).second)
      throw InstanceError("vertex \"" + spec.call + "\" is the call vertex of more than one call site");
    if (!return_vertices.insert(r).second)
      throw InstanceError("vertex \"" + spec.return_site + "\" is the return site of more than one call site");
    auto eit = eindex.find(edge_key(c, r));
    if (eit == eindex.end())
      throw InstanceError("call site " + spec.call + " -> " + spec.return_site +
                          " lacks its call-to-return-site edge");
    const auto site = static_cast<std::uint32_t>(inst.calls.size());
    inst.edges[eit->second].kind = EdgeKind::CallToReturn;
    inst.edges[eit->second].call_site = site;
    CallSite cs;
    cs.call = c;
    cs.return_site = r;
    cs.callee = pit->second;
    cs.caller = inst.proc_of[c];
    cs.call_to_return = eit->second;
    inst.calls.push_back(cs);
    inst.procedures[cs.callee].callers.push_back(site);
  }
  for (const auto& e : inst.edges) {
    if (e.kind == EdgeKind::Intra && return_vertices.count(e.to))
      throw InstanceError("return site \"" + inst.vertex_names[e.to] +
                          "\" has an intraprocedural predecessor other than its call vertex");
  }
  for (std::uint32_t site = 0; site < inst.calls.size(); ++site) {
    auto& cs = inst.calls[site];
    const auto& callee = inst.procedures[cs.callee];
    auto add = [&](VertexId u, VertexId v, EdgeKind kind) {
      if (!eindex.emplace(edge_key(u, v), static_cast<EdgeId>(inst.edges.size())).second)
        throw InstanceError("edge " + inst.vertex_names[u] + " -> " + inst.vertex_names[v] +
                            " would be both " + to_string(kind) + " and another edge kind");
      inst.edges.push_back({u, v, kind, site});
      return static_cast<EdgeId>(inst.edges.size() - 1);
    };
    cs.call_to_start = add(cs.call, callee.start, EdgeKind::CallToStart);
    cs.exit_to_return = add(callee.exit, cs.return_site, EdgeKind::ExitToReturn);
  }

  inst.relations.assign(inst.edges.size(), FlowRelation());
  std::vector<char> has_rel(inst.edges.size(), 0);
  auto allowed = [&](VertexId v, FactIndex f) {
    if (f == 0) return true;
    const auto& dom = inst.procedures[inst.proc_of[v]].domain;
    return !dom || std::binary_search(dom->begin(), dom->end(), f);
  };
  for (const auto& spec : flows_) {
    const VertexId u = lookup(spec.from), v = lookup(spec.to);
    auto eit = eindex.find(edge_key(u, v));
    if (eit == eindex.end())
      throw InstanceError("flow entry for " + spec.from + " -> " + spec.to + " which is not an edge");
    if (has_rel[eit->second])
      throw InstanceError("more than one flow entry for edge " + spec.from + " -> " + spec.to);
    std::vector<std::pair<FactIndex, FactIndex>> pairs;
    pairs.reserve(spec.pairs.size());
    try {
      for (const auto& [a, b] : spec.pairs) {
        const FactIndex ia = inst.domain.index_of(a), ib = inst.domain.index_of(b);
        if (!allowed(u, ia) || !allowed(v, ib))
          throw InstanceError("pair (" + a + "," + b + ") uses a fact outside the procedure domain");
        pairs.emplace_back(ia, ib);
      }
      inst.relations[eit->second] = FlowRelation::from_pairs(p, pairs);
    } catch (const RelationError& e) {
      throw InstanceError("flow entry " + spec.from + " -> " + spec.to + ": " + e.what());
    } catch (const InstanceError& e) {
      throw InstanceError("flow entry " + spec.from + " -> " + spec.to + ": " + e.what());
    }
    has_rel[eit->second] = 1;
  }
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    if (!has_rel[e])
      throw InstanceError(std::string("missing flow relation for ") + to_string(inst.edges[e].kind) +
                          " edge " + inst.vertex_names[inst.edges[e].from] + " -> " +
                          inst.vertex_names[inst.edges[e].to]);
  }
  inst.index();
  return inst;
}

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InstanceError(where + " lacks \"" + key + "\"");
  return *it;
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) throw InstanceError(where + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> str_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InstanceError(where + " must be an array");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(str(x, where + " entry"));
  return out;
}

}  // namespace

Instance parse_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InstanceError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InstanceError("instance must be a JSON object");

  InstanceBuilder builder(str_list(field(doc, "domain", "instance"), "domain"));

  const auto& procs = field(doc, "procedures", "instance");
  if (!procs.is_array()) throw InstanceError("procedures must be an array");
  for (const auto& pj : procs) {
    if (!pj.is_object()) throw InstanceError("procedure entries must be objects");
    const std::string name = str(field(pj, "name", "procedure"), "procedure name");
    const std::string where = "procedure \"" + name + "\"";
    auto it = pj.find("exit");
    if (it == pj.end()) throw InstanceError(where + " lacks an exit vertex");
    const std::string exit = str(*it, where + " exit");
    it = pj.find("start");
    if (it == pj.end()) throw InstanceError(where + " lacks a start vertex");
    const std::string start = str(*it, where + " start");
    std::optional<std::vector<std::string>> dom;
    if (pj.contains("domain")) dom = str_list(pj["domain"], where + " domain");
    builder.add_procedure(name, str_list(field(pj, "vertices", where), where + " vertices"), start, exit,
                          std::move(dom));
    if (pj.contains("edges")) {
      const auto& ej = pj["edges"];
      if (!ej.is_array()) throw InstanceError(where + " edges must be an array");
      for (const auto& e : ej) {
        if (!e.is_object()) throw InstanceError(where + " edges must be objects");
        builder.add_edge(str(field(e, "from", where + " edge"), "edge from"),
                         str(field(e, "to", where + " edge"), "edge to"));
      }
    }
  }

  if (doc.contains("calls")) {
    const auto& cj = doc["calls"];
    if (!cj.is_array()) throw InstanceError("calls must be an array");
    for (const auto& c : cj) {
      if (!c.is_object()) throw InstanceError("call entries must be objects");
      builder.add_call(str(field(c, "call", "call"), "call"), str(field(c, "returnSite", "call"), "returnSite"),
                       str(field(c, "callee", "call"), "callee"));
    }
  }

  if (doc.contains("flow")) {
    const auto& fj = doc["flow"];
    if (!fj.is_array()) throw InstanceError("flow must be an array");
    for (const auto& f : fj) {
      if (!f.is_object()) throw InstanceError("flow entries must be objects");
      const std::string from = str(field(f, "from", "flow entry"), "flow from");
      const std::string to = str(field(f, "to", "flow entry"), "flow to");
      const auto& rel = field(f, "rel", "flow entry " + from + " -> " + to);
      if (!rel.is_array()) throw InstanceError("rel of " + from + " -> " + to + " must be an array");
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& pr : rel) {
        if (!pr.is_array() || pr.size() != 2)
          throw InstanceError("rel of " + from + " -> " + to + " must hold [src, dst] pairs");
        pairs.emplace_back(str(pr[0], "fact"), str(pr[1], "fact"));
      }
      builder.set_flow(from, to, std::move(pairs));
    }
  }
  return builder.build();
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string to_json(const Instance& inst, int indent) {
  const auto& names = inst.vertex_names;
  json doc;
  doc["domain"] = json::array();
  for (std::size_t i = 1; i < inst.domain.extended_size(); ++i)
    doc["domain"].push_back(inst.domain.name(static_cast<FactIndex>(i)));
  doc["procedures"] = json::array();
  for (const auto& p : inst.procedures) {
    json pj;
    pj["name"] = p.name;
    pj["start"] = names[p.start];
    pj["exit"] = names[p.exit];
    pj["vertices"] = json::array();
    for (std::uint32_t i = 0; i < p.size; ++i) pj["vertices"].push_back(names[p.first + i]);
    pj["edges"] = json::array();
    for (EdgeId e : p.edges)
      pj["edges"].push_back({{"from", names[inst.edges[e].from]}, {"to", names[inst.edges[e].to]}});
    if (p.domain) {
      pj["domain"] = json::array();
      for (FactIndex f : *p.domain) pj["domain"].push_back(inst.domain.name(f));
    }
    doc["procedures"].push_back(std::move(pj));
  }
  doc["calls"] = json::array();
  for (const auto& c : inst.calls)
    doc["calls"].push_back({{"call", names[c.call]},
                            {"returnSite", names[c.return_site]},
                            {"callee", inst.procedures[c.callee].name}});
  doc["flow"] = json::array();
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    json rel = json::array();
    for (auto [a, b] : inst.relations[e].pairs())
      rel.push_back({inst.domain.name(a), inst.domain.name(b)});
    doc["flow"].push_back(
        {{"from", names[inst.edges[e].from]}, {"to", names[inst.edges[e].to]}, {"rel", std::move(rel)}});
  }
  return doc.dump(indent);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write " + path);
  out << to_json(inst, 1) << '\n';
}

std::vector<BandwidthViolation> validate_bandwidth(const FlowRelation& rel, std::size_t b, EdgeId edge) {
  std::vector<BandwidthViolation> out;
  const std::size_t p = rel.extended_size();
  for (FactIndex a = 0; a < p; ++a) {
    const std::size_t d = rel.out_degree(a);
    if (d > b) out.push_back({edge, BandwidthViolation::Side::Source, a, d});
  }
  for (FactIndex a = 0; a < p; ++a) {
    const std::size_t d = rel.in_degree(a);
    if (d > b) out.push_back({edge, BandwidthViolation::Side::Target, a, d});
  }
  return out;
}

std::vector<BandwidthViolation> validate_bandwidth(const Instance& inst, std::size_t b) {
  std::vector<BandwidthViolation> out;
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    if (!is_interprocedural(inst.edges[e].kind)) continue;
    auto v = validate_bandwidth(inst.relations[e], b, e);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::size_t max_bandwidth(const Instance& inst) {
  std::size_t best = 0;
  for (EdgeId e = 0; e < inst.edges.size(); ++e) {
    if (!is_interprocedural(inst.edges[e].kind)) continue;
    const auto& rel = inst.relations[e];
    for (FactIndex a = 0; a < rel.extended_size(); ++a)
      best = std::max({best, rel.out_degree(a), rel.in_degree(a)});
  }
  return best;
}

namespace {

struct Token {
  bool open;
  std::uint32_t site;
};

std::vector<Token> project(const Instance& inst, std::span<const VertexId> path) {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] >= inst.vertex_count() || path[i + 1] >= inst.vertex_count())
      throw InstanceError("path mentions an unknown vertex");
    auto e = inst.find_edge(path[i], path[i + 1]);
    if (!e)
      throw InstanceError("not a path: no edge " + inst.vertex_names[path[i]] + " -> " +
                          inst.vertex_names[path[i + 1]]);
    const Edge& edge = inst.edges[*e];
    if (edge.kind == EdgeKind::CallToStart) tokens.push_back({true, edge.call_site});
    if (edge.kind == EdgeKind::ExitToReturn) tokens.push_back({false, edge.call_site});
  }
  if (path.size() == 1 && path[0] >= inst.vertex_count())
    throw InstanceError("path mentions an unknown vertex");
  return tokens;
}

// balanced[i*(k+1)+j]: tokens[i..j) derives from S -> c S r S | eps.
std::vector<char> balanced_table(const std::vector<Token>& t) {
  const std::size_t k = t.size();
  std::vector<char> bal((k + 1) * (k + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> char& { return bal[i * (k + 1) + j]; };
  for (std::size_t i = 0; i <= k; ++i) at(i, i) = 1;
  for (std::size_t len = 2; len <= k; len += 2) {
    for (std::size_t i = 0; i + len <= k; ++i) {
      const std::size_t j = i + len;
      if (!t[i].open) continue;
      for (std::size_t m = i + 1; m < j; m += 2) {
        if (!t[m].open && t[m].site == t[i].site && at(i + 1, m) && at(m + 1, j)) {
          at(i, j) = 1;
          break;
        }
      }
    }
  }
  return bal;
}

}  // namespace

bool is_same_context_valid(const Instance& inst, std::span<const VertexId> path) {
  const auto tokens = project(inst, path);
  const std::size_t k = tokens.size();
  if (k % 2) return false;
  return balanced_table(tokens)[k] != 0;
}

bool is_interprocedurally_valid(const Instance& inst, std::span<const VertexId> path) {
  const auto tokens = project(inst, path);
  const std::size_t k = tokens.size();
  const auto bal = balanced_table(tokens);
  // S' -> S' c S | S, i.e. S (c S)*.
  std::vector<char> reach(k + 1, 0);
  reach[0] = 1;
  for (std::size_t i = 0; i <= k; ++i) {
    if (!reach[i]) continue;
    for (std::size_t j = i; j <= k; ++j) {
      if (!bal[i * (k + 1) + j]) continue;
      reach[j] = 1;
      if (j < k && tokens[j].open) reach[j + 1] = 1;
    }
  }
  return reach[k] != 0;
}

}  // namespace ifds
