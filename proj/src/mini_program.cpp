#include "ifds/mini_program.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace ifds {

Stmt Stmt::decl(std::vector<std::string> vars) {
  Stmt s;
  s.kind = Kind::Decl;
  s.vars = std::move(vars);
  return s;
}

Stmt Stmt::assign(std::string target, std::vector<std::string> uses, std::string def) {
  Stmt s;
  s.kind = Kind::Assign;
  s.vars = {std::move(target)};
  s.uses = std::move(uses);
  s.def = std::move(def);
  return s;
}

Stmt Stmt::use(std::vector<std::string> vars) {
  Stmt s;
  s.kind = Kind::Use;
  s.vars = std::move(vars);
  return s;
}

Stmt Stmt::call(std::string callee, std::vector<std::string> args, std::vector<bool> by_ref) {
  Stmt s;
  s.kind = Kind::Call;
  s.callee = std::move(callee);
  s.args = std::move(args);
  s.by_ref = std::move(by_ref);
  return s;
}

Stmt Stmt::if_(std::vector<Stmt> then_body, std::vector<Stmt> else_body) {
  Stmt s;
  s.kind = Kind::If;
  s.body = std::move(then_body);
  s.else_body = std::move(else_body);
  return s;
}

Stmt Stmt::while_(std::vector<Stmt> body) {
  Stmt s;
  s.kind = Kind::While;
  s.body = std::move(body);
  return s;
}

const char* to_string(AnalysisKind kind) {
  switch (kind) {
    case AnalysisKind::Reach: return "reach";
    case AnalysisKind::PossUninit: return "poss-uninit";
    case AnalysisKind::SimpUninit: return "simp-uninit";
    case AnalysisKind::Live: return "live";
    case AnalysisKind::ReachDefs: return "reach-defs";
  }
  return "?";
}

AnalysisKind parse_analysis_kind(std::string_view name) {
  for (auto k : {AnalysisKind::Reach, AnalysisKind::PossUninit, AnalysisKind::SimpUninit, AnalysisKind::Live,
                 AnalysisKind::ReachDefs})
    if (name == to_string(k)) return k;
  throw ProgramError("unknown analysis kind \"" + std::string(name) + "\"");
}

namespace {

class Lowerer {
 public:
  Lowerer(const MiniProgram& prog, const std::unordered_map<std::string, std::size_t>& index)
      : prog_(prog), index_(index) {}

  LoweredProgram::Proc run(const MiniProc& mp) {
    p_ = LoweredProgram::Proc{};
    p_.source = &mp;
    name_ = mp.name;
    counter_ = 0;
    seen_.clear();
    p_.start = add(mp.start_name.empty() ? mp.name + ".s" : mp.start_name, nullptr);
    const auto body = block(mp.body);
    p_.exit = add(mp.exit_name.empty() ? mp.name + ".e" : mp.exit_name, nullptr);
    if (body) {
      edge(p_.start, body->first);
      edge(body->second, p_.exit);
    } else {
      edge(p_.start, p_.exit);
    }
    return std::move(p_);
  }

 private:
  using Span = std::pair<std::size_t, std::size_t>;

  std::size_t add(std::string name, const Stmt* s) {
    p_.vertices.push_back({std::move(name), s});
    return p_.vertices.size() - 1;
  }
  std::string auto_name(const Stmt& s, std::size_t i, std::size_t id, const char* suffix) {
    if (i < s.names.size()) return s.names[i];
    return name_ + "." + std::to_string(id) + suffix;
  }
  void edge(std::size_t a, std::size_t b) {
    if (seen_.insert({a, b}).second) p_.edges.emplace_back(a, b);
  }

  std::optional<Span> block(const std::vector<Stmt>& stmts) {
    std::optional<Span> out;
    for (const auto& s : stmts) {
      const Span sp = stmt(s);
      if (out) {
        edge(out->second, sp.first);
        out->second = sp.second;
      } else {
        out = sp;
      }
    }
    return out;
  }

  Span stmt(const Stmt& s) {
    const std::size_t id = ++counter_;
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign:
      case Stmt::Kind::Use: {
        const auto v = add(auto_name(s, 0, id, ""), &s);
        return {v, v};
      }
      case Stmt::Kind::Call: {
        auto it = index_.find(s.callee);
        if (it == index_.end()) throw ProgramError("call to unknown procedure \"" + s.callee + "\"");
        const auto& callee = prog_.procs[it->second];
        if (s.args.size() != callee.params.size() || s.by_ref.size() != s.args.size())
          throw ProgramError("call to \"" + s.callee + "\" has the wrong number of arguments");
        const auto c = add(auto_name(s, 0, id, "c"), &s);
        const auto r = add(auto_name(s, 1, id, "r"), nullptr);
        edge(c, r);
        p_.calls.push_back({c, r, it->second, &s});
        return {c, r};
      }
      case Stmt::Kind::If: {
        const auto b = add(auto_name(s, 0, id, "b"), &s);
        const auto t = block(s.body);
        const auto e = block(s.else_body);
        const auto j = add(auto_name(s, 1, id, "j"), nullptr);
        for (const auto& br : {t, e}) {
          if (br) {
            edge(b, br->first);
            edge(br->second, j);
          } else {
            edge(b, j);
          }
        }
        return {b, j};
      }
      case Stmt::Kind::While: {
        const auto h = add(auto_name(s, 0, id, "h"), &s);
        if (const auto body = block(s.body)) {
          edge(h, body->first);
          edge(body->second, h);
        }
        return {h, h};
      }
    }
    throw ProgramError("bad statement kind");
  }

  const MiniProgram& prog_;
  const std::unordered_map<std::string, std::size_t>& index_;
  LoweredProgram::Proc p_;
  std::string name_;
  std::size_t counter_ = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen_;
};

using Pairs = std::vector<std::pair<std::string, std::string>>;

// Fact bookkeeping shared by the relation builders of one analysis.
struct Facts {
  std::vector<std::string> all;                            // D, without 0
  std::map<std::string, std::vector<std::string>> labels;  // variable -> definition labels

  Pairs identity_except(const std::set<std::string>& drop) const {
    Pairs out{{"0", "0"}};
    for (const auto& f : all)
      if (!drop.count(f)) out.emplace_back(f, f);
    return out;
  }
  std::set<std::string> labels_of(const std::vector<std::string>& vars) const {
    std::set<std::string> out;
    for (const auto& v : vars)
      if (auto it = labels.find(v); it != labels.end()) out.insert(it->second.begin(), it->second.end());
    return out;
  }
};

void collect(const std::vector<Stmt>& stmts, std::vector<std::string>& vars, std::set<std::string>& seen,
             std::map<std::string, std::string>& label_var, std::vector<std::string>& labels) {
  auto note = [&](const std::string& v) {
    if (seen.insert(v).second) vars.push_back(v);
  };
  for (const auto& s : stmts) {
    for (const auto& v : s.vars) note(v);
    for (const auto& v : s.uses) note(v);
    for (const auto& v : s.args) note(v);
    if (s.kind == Stmt::Kind::Assign && !s.def.empty()) {
      auto [it, fresh] = label_var.emplace(s.def, s.vars.at(0));
      if (fresh) labels.push_back(s.def);
      else if (it->second != s.vars[0])
        throw ProgramError("definition label \"" + s.def + "\" is used for two variables");
    }
    collect(s.body, vars, seen, label_var, labels);
    collect(s.else_body, vars, seen, label_var, labels);
  }
}

Pairs forward_transfer(AnalysisKind kind, const Facts& facts, const Stmt* s) {
  if (kind == AnalysisKind::Reach) return {{"0", "0"}};
  if (!s) return facts.identity_except({});
  switch (s->kind) {
    case Stmt::Kind::Decl: {
      if (kind == AnalysisKind::ReachDefs) return facts.identity_except({});
      Pairs out = facts.identity_except({});
      for (const auto& x : s->vars) out.emplace_back("0", x);
      return out;
    }
    case Stmt::Kind::Assign: {
      const auto& x = s->vars[0];
      if (kind == AnalysisKind::ReachDefs) {
        Pairs out = facts.identity_except(facts.labels_of({x}));
        if (!s->def.empty()) out.emplace_back("0", s->def);
        return out;
      }
      Pairs out = facts.identity_except({x});
      if (kind == AnalysisKind::PossUninit)
        for (const auto& u : s->uses) out.emplace_back(u, x);
      return out;
    }
    case Stmt::Kind::Call: {
      std::vector<std::string> ref_args;
      for (std::size_t i = 0; i < s->args.size(); ++i)
        if (s->by_ref[i]) ref_args.push_back(s->args[i]);
      if (kind == AnalysisKind::ReachDefs) return facts.identity_except(facts.labels_of(ref_args));
      return facts.identity_except({ref_args.begin(), ref_args.end()});
    }
    default:
      return facts.identity_except({});
  }
}

Pairs live_transfer(const Facts& facts, const Stmt* s) {
  if (!s) return facts.identity_except({});
  switch (s->kind) {
    case Stmt::Kind::Decl:
      return facts.identity_except({s->vars.begin(), s->vars.end()});
    case Stmt::Kind::Assign: {
      Pairs out = facts.identity_except({s->vars[0]});
      for (const auto& u : s->uses) out.emplace_back("0", u);
      return out;
    }
    case Stmt::Kind::Use: {
      Pairs out = facts.identity_except({});
      for (const auto& x : s->vars) out.emplace_back("0", x);
      return out;
    }
    case Stmt::Kind::Call: {
      std::set<std::string> ref_args;
      for (std::size_t i = 0; i < s->args.size(); ++i)
        if (s->by_ref[i]) ref_args.insert(s->args[i]);
      return facts.identity_except(ref_args);
    }
    default:
      return facts.identity_except({});
  }
}

}  // namespace

LoweredProgram lower(const MiniProgram& prog) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < prog.procs.size(); ++i)
    if (!index.emplace(prog.procs[i].name, i).second)
      throw ProgramError("duplicate procedure \"" + prog.procs[i].name + "\"");
  LoweredProgram out;
  Lowerer lw(prog, index);
  for (const auto& p : prog.procs) out.procs.push_back(lw.run(p));
  return out;
}

Instance gen_analysis(const MiniProgram& prog, AnalysisKind kind) {
  const LoweredProgram lp = lower(prog);

  std::vector<std::string> vars, labels;
  std::set<std::string> seen;
  std::map<std::string, std::string> label_var;
  for (const auto& p : prog.procs) {
    for (const auto& v : p.params)
      if (seen.insert(v).second) vars.push_back(v);
    for (const auto& v : p.locals)
      if (seen.insert(v).second) vars.push_back(v);
  }
  for (const auto& p : prog.procs) collect(p.body, vars, seen, label_var, labels);

  Facts facts;
  if (kind == AnalysisKind::ReachDefs) {
    facts.all = labels;
    for (const auto& l : labels) facts.labels[label_var[l]].push_back(l);
  } else if (kind != AnalysisKind::Reach) {
    facts.all = vars;
  }
  for (const auto& f : facts.all)
    if (f == "0") throw ProgramError("\"0\" is reserved for the zero fact");

  InstanceBuilder b(facts.all);
  const bool reversed = kind == AnalysisKind::Live;
  for (const auto& p : lp.procs) {
    std::vector<std::string> names;
    for (const auto& v : p.vertices) names.push_back(v.name);
    const auto& start = p.vertices[reversed ? p.exit : p.start].name;
    const auto& exit = p.vertices[reversed ? p.start : p.exit].name;
    b.add_procedure(p.source->name, std::move(names), start, exit);
  }
  for (const auto& p : lp.procs) {
    for (auto [u, w] : p.edges) {
      const auto& un = p.vertices[u].name;
      const auto& wn = p.vertices[w].name;
      if (reversed) {
        b.add_edge(wn, un);
        b.set_flow(wn, un, live_transfer(facts, p.vertices[u].stmt));
      } else {
        b.add_edge(un, wn);
        b.set_flow(un, wn, forward_transfer(kind, facts, p.vertices[u].stmt));
      }
    }
  }
  for (const auto& p : lp.procs) {
    for (const auto& c : p.calls) {
      const auto& callee = lp.procs[c.callee];
      const auto& params = callee.source->params;
      const auto& s = *c.stmt;
      const auto& cn = p.vertices[c.call].name;
      const auto& rn = p.vertices[c.return_site].name;
      const auto& sn = callee.vertices[callee.start].name;
      const auto& en = callee.vertices[callee.exit].name;
      Pairs into{{"0", "0"}}, back{{"0", "0"}};
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        const auto& a = s.args[i];
        const auto& q = params[i];
        switch (kind) {
          case AnalysisKind::Reach:
            break;
          case AnalysisKind::PossUninit:
          case AnalysisKind::SimpUninit:
            into.emplace_back(a, q);
            if (s.by_ref[i]) back.emplace_back(q, a);
            break;
          case AnalysisKind::ReachDefs:
            if (s.by_ref[i]) {
              for (const auto& l : facts.labels_of({a})) into.emplace_back(l, l);
              for (const auto& l : facts.labels_of({a, q})) back.emplace_back(l, l);
            }
            break;
          case AnalysisKind::Live:
            // into: call vertex r -> callee exit; back: callee start -> c
            if (s.by_ref[i]) into.emplace_back(a, q);
            back.emplace_back(q, a);
            break;
        }
      }
      if (reversed) {
        b.add_call(rn, cn, callee.source->name);
        b.set_flow(rn, en, into);
        b.set_flow(sn, cn, back);
      } else {
        b.add_call(cn, rn, callee.source->name);
        b.set_flow(cn, sn, into);
        b.set_flow(en, rn, back);
      }
    }
  }
  return b.build();
}

MiniProgram pointer_example() {
  MiniProgram prog;
  MiniProc f;
  f.name = "f";
  f.params = {"x", "y"};
  f.start_name = "v1";
  f.exit_name = "v4";
  f.body.push_back(Stmt::assign("y", {}).named({"v2"}));
  f.body.push_back(Stmt::assign("y", {}).named({"v3"}));
  MiniProc m;
  m.name = "main";
  m.locals = {"x", "y"};
  m.start_name = "v5";
  m.exit_name = "v9";
  m.body.push_back(Stmt::decl({"x", "y"}).named({"v6"}));
  m.body.push_back(Stmt::call("f", {"x", "y"}, {true, false}).named({"c7", "r7"}));
  m.body.push_back(Stmt::use({"x", "y"}).named({"v8"}));
  prog.procs = {std::move(f), std::move(m)};
  return prog;
}

}  // namespace ifds
