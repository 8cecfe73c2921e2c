#include "ifds/generators.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "ifds/tree_decomposition.hpp"

namespace ifds {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("IFDS_SEED");
  if (!s || !*s) return fallback;
  char* end = nullptr;
  const auto v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw std::invalid_argument(std::string("IFDS_SEED is not a number: ") + s);
  return v;
}

namespace {

class ProgramGen {
 public:
  explicit ProgramGen(const ProgramShape& shape) : sh_(shape), rng_(shape.seed) {}

  MiniProgram run() {
    const std::size_t nprocs = std::max<std::size_t>(1, (sh_.vertices + sh_.proc_size / 2) / std::max<std::size_t>(1, sh_.proc_size));
    const std::size_t vars = std::max<std::size_t>(1, sh_.vars);
    for (std::size_t v = 0; v < vars; ++v) var_names_.push_back("x" + std::to_string(v));
    MiniProgram prog;
    prog.procs.resize(nprocs);
    ref_.resize(nprocs);
    for (std::size_t p = 0; p < nprocs; ++p) {
      auto& mp = prog.procs[p];
      mp.name = p == 0 ? "main" : "p" + std::to_string(p);
      const std::size_t k = p == 0 ? 0 : pick(std::min(sh_.max_params, vars) + 1);
      for (std::size_t i = 0; i < k; ++i) {
        mp.params.push_back(var_names_[i]);
        ref_[p].push_back(coin(0.5));
      }
      for (std::size_t i = k; i < vars; ++i) mp.locals.push_back(var_names_[i]);
    }
    procs_ = &prog.procs;
    const std::size_t budget = std::max<std::size_t>(1, sh_.vertices / nprocs);
    for (std::size_t p = 0; p < nprocs; ++p) {
      current_ = p;
      std::size_t left = budget > 2 ? budget - 2 : 1;
      prog.procs[p].body = block(left, 0);
    }
    return prog;
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  const std::string& var() { return var_names_[pick(var_names_.size())]; }
  std::vector<std::string> some_vars(std::size_t lo, std::size_t hi) {
    std::vector<std::string> out;
    const std::size_t k = lo + pick(hi - lo + 1);
    for (std::size_t i = 0; i < k; ++i) out.push_back(var());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<Stmt> block(std::size_t& left, std::size_t depth) {
    std::vector<Stmt> out;
    while (left > 0) {
      out.push_back(stmt(left, depth));
      if (depth > 0 && coin(0.15)) break;
    }
    return out;
  }

  std::vector<Stmt> nested(std::size_t& left, std::size_t depth) {
    std::size_t share = 1 + pick(std::max<std::size_t>(1, left / 3));
    share = std::min(share, left);
    left -= share;
    auto body = block(share, depth);
    left += share;  // unused part goes back
    if (body.empty()) body.push_back(simple(left));
    return body;
  }

  Stmt simple(std::size_t& left) {
    if (left > 0) --left;
    const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < 0.8) {
      const auto& x = var();
      const auto label = x + "@" + std::to_string(pick(std::max<std::size_t>(1, sh_.labels_per_var)));
      return Stmt::assign(x, some_vars(0, 2), label);
    }
    if (r < 0.95) return Stmt::use(some_vars(1, 2));
    return Stmt::decl(some_vars(1, 2));
  }

  Stmt stmt(std::size_t& left, std::size_t depth) {
    const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < sh_.call_density && left >= 2) {
      std::vector<std::size_t> targets;
      for (std::size_t q = 0; q < procs_->size(); ++q)
        if (q != 0 && (sh_.recursion || q > current_)) targets.push_back(q);
      if (!targets.empty()) {
        const auto q = targets[pick(targets.size())];
        const auto& callee = (*procs_)[q];
        std::vector<std::string> pool = var_names_;
        std::shuffle(pool.begin(), pool.end(), rng_);
        pool.resize(callee.params.size());
        left -= 2;
        return Stmt::call(callee.name, pool, ref_[q]);
      }
    }
    if (depth < sh_.max_depth && left >= 4) {
      if (r < sh_.call_density + 0.10) {
        left -= 2;
        auto then_body = nested(left, depth + 1);
        std::vector<Stmt> else_body;
        if (coin(0.5) && left > 0) else_body = nested(left, depth + 1);
        return Stmt::if_(std::move(then_body), std::move(else_body));
      }
      if (r < sh_.call_density + 0.17) {
        left -= 1;
        return Stmt::while_(nested(left, depth + 1));
      }
    }
    return simple(left);
  }

  ProgramShape sh_;
  std::mt19937_64 rng_;
  std::vector<std::string> var_names_;
  std::vector<std::vector<bool>> ref_;
  const std::vector<MiniProc>* procs_ = nullptr;
  std::size_t current_ = 0;
};

using Pairs = std::vector<std::pair<std::string, std::string>>;

class RelationGen {
 public:
  RelationGen(std::size_t domain, std::uint64_t seed) : d_(domain), rng_(seed) {
    for (std::size_t i = 0; i < d_; ++i) names_.push_back("d" + std::to_string(i));
  }
  const std::vector<std::string>& names() const { return names_; }

  Pairs intra() {
    Pairs out{{"0", "0"}};
    if (d_ == 0) return out;
    if (coin(0.1)) out.emplace_back("0", fact());
    for (const auto& f : names_) {
      if (coin(0.95)) out.emplace_back(f, f);
      if (coin(0.1)) out.emplace_back(f, fact());
    }
    return out;
  }

  // Every fact node keeps out- and in-degree at most b.
  Pairs bounded(std::size_t b) {
    Pairs out{{"0", "0"}};
    if (d_ == 0 || b == 0) return out;
    std::vector<std::size_t> outdeg(d_ + 1, 0), indeg(d_ + 1, 0);
    outdeg[0] = indeg[0] = 1;
    auto add = [&](std::size_t a, std::size_t t) {
      if (outdeg[a] >= b || indeg[t] >= b) return;
      ++outdeg[a];
      ++indeg[t];
      out.emplace_back(a == 0 ? "0" : names_[a - 1], names_[t - 1]);
    };
    std::vector<std::size_t> perm(d_);
    std::iota(perm.begin(), perm.end(), 1);
    if (coin(0.3)) std::shuffle(perm.begin(), perm.end(), rng_);
    if (coin(0.1)) add(0, 1 + pick(d_));
    for (std::size_t a = 1; a <= d_; ++a) {
      if (coin(0.8)) add(a, perm[a - 1]);
      if (coin(0.2)) add(a, 1 + pick(d_));
    }
    return out;
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  const std::string& fact() { return names_[pick(d_)]; }

  std::size_t d_;
  std::mt19937_64 rng_;
  std::vector<std::string> names_;
};

Instance random_instance(const RandomOptions& opts, std::uint64_t seed) {
  ProgramShape shape;
  shape.seed = seed;
  shape.vertices = opts.n;
  shape.proc_size = opts.proc_size;
  shape.vars = std::max<std::size_t>(1, opts.domain);
  shape.call_density = opts.call_density;
  shape.recursion = opts.recursion;
  const MiniProgram prog = random_program(shape);
  const LoweredProgram lp = lower(prog);
  RelationGen rel(opts.domain, seed ^ 0x9e3779b97f4a7c15ull);
  InstanceBuilder b(rel.names());
  for (const auto& p : lp.procs) {
    std::vector<std::string> names;
    for (const auto& v : p.vertices) names.push_back(v.name);
    b.add_procedure(p.source->name, std::move(names), p.vertices[p.start].name, p.vertices[p.exit].name);
  }
  for (const auto& p : lp.procs) {
    for (auto [u, w] : p.edges) {
      b.add_edge(p.vertices[u].name, p.vertices[w].name);
      b.set_flow(p.vertices[u].name, p.vertices[w].name, rel.intra());
    }
  }
  for (const auto& p : lp.procs) {
    for (const auto& c : p.calls) {
      const auto& callee = lp.procs[c.callee];
      const auto& cn = p.vertices[c.call].name;
      const auto& rn = p.vertices[c.return_site].name;
      b.add_call(cn, rn, callee.source->name);
      b.set_flow(cn, callee.vertices[callee.start].name, rel.bounded(opts.bandwidth));
      b.set_flow(callee.vertices[callee.exit].name, rn, rel.bounded(opts.bandwidth));
    }
  }
  return b.build();
}

}  // namespace

MiniProgram random_program(const ProgramShape& shape) { return ProgramGen(shape).run(); }

Instance gen_random(const RandomOptions& opts) {
  if (opts.n == 0) throw std::invalid_argument("n must be positive");
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    Instance inst = random_instance(opts, opts.seed + attempt * 0x100000001b3ull);
    if (opts.width_bound == 0) return inst;
    bool ok = true;
    for (ProcId p = 0; ok && p < inst.procedures.size(); ++p)
      ok = decompose(flow_graph(inst, p)).width() <= opts.width_bound;
    if (ok) return inst;
  }
  throw std::runtime_error("could not generate an instance within width bound " + std::to_string(opts.width_bound));
}

Instance gen_random_analysis(AnalysisKind kind, std::uint64_t seed, std::size_t n, std::size_t domain,
                             std::size_t proc_size, double call_density) {
  ProgramShape shape;
  shape.seed = seed;
  shape.vertices = n;
  shape.proc_size = proc_size;
  shape.call_density = call_density;
  shape.labels_per_var = 2;
  shape.vars = kind == AnalysisKind::ReachDefs ? std::max<std::size_t>(1, domain / 2) : std::max<std::size_t>(1, domain);
  return gen_analysis(random_program(shape), kind);
}

}  // namespace ifds
