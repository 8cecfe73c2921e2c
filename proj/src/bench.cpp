#include "ifds/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>

#include "ifds/baselines.hpp"
#include "ifds/queries.hpp"
#include "ifds/query_index.hpp"

namespace ifds {

namespace {

using Clock = std::chrono::steady_clock;

double us_since(Clock::time_point t) { return std::chrono::duration<double, std::micro>(Clock::now() - t).count(); }

struct Timings {
  std::vector<double> pair_us, source_us;
};

void summarize(const std::vector<double>& xs, double& mean, double& median) {
  if (xs.empty()) return;
  mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  std::vector<double> s = xs;
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2), s.end());
  median = s[s.size() / 2];
}

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t hash_bits(const BitString& b) {
  std::uint64_t h = b.size();
  for (auto w : b.words()) h = mix(h, w);
  return h;
}

}  // namespace

std::vector<BenchRecord> bench_run(const Instance& inst, const BenchOptions& opts) {
  const auto queries = generate_queries(inst, opts.pairs, opts.sources, opts.seed);
  std::vector<Query> pairs, sources;
  for (const auto& q : queries) (q.kind == Query::Kind::Pair ? pairs : sources).push_back(q);

  bool want_nopp = std::find(opts.algos.begin(), opts.algos.end(), "nopp") != opts.algos.end();
  const std::size_t common_pairs = want_nopp ? std::min(pairs.size(), opts.nopp_limit) : pairs.size();
  const std::size_t common_sources = want_nopp ? std::min(sources.size(), opts.nopp_limit) : sources.size();

  std::size_t exploded = inst.vertex_count() * inst.fact_count();
  for (const auto& r : inst.relations) exploded += r.pair_count();

  auto base_record = [&](const std::string& algo) {
    BenchRecord r;
    r.instance_id = opts.instance_id;
    r.n = inst.vertex_count();
    r.domain = inst.domain.size();
    r.exploded_size = exploded;
    r.algo = algo;
    r.threads = opts.threads;
    return r;
  };

  // Reference answers from the tree index.
  auto shared = std::make_shared<const Instance>(inst);
  PreprocessOptions popts;
  popts.width_cap = opts.width_cap;
  PreprocessStats pst;
  auto t0 = Clock::now();
  const QueryIndex ix = QueryIndex::build(shared, popts, &pst);
  const double tw_pre = us_since(t0) / 1000.0;
  ThreadPool pool(opts.threads);

  std::vector<char> ref_pair(pairs.size());
  std::vector<BitString> ref_source(sources.size());
  BenchRecord tw = base_record("tw");
  tw.width = pst.max_width;
  tw.preprocess_ms = tw_pre;
  {
    Timings t;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& q = pairs[i];
      const auto s = Clock::now();
      ref_pair[i] = opts.threads > 1 ? ix.pair_parallel(q.u, q.d1, q.v, q.d2, pool, opts.threads)
                                     : ix.pair(q.u, q.d1, q.v, q.d2);
      t.pair_us.push_back(us_since(s));
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const auto& q = sources[i];
      const auto s = Clock::now();
      const auto a = opts.threads > 1 ? ix.source_parallel(q.u, q.d1, pool, opts.threads) : ix.source(q.u, q.d1);
      t.source_us.push_back(us_since(s));
      ref_source[i] = a.to_local();
    }
    tw.pair_queries = pairs.size();
    tw.source_queries = sources.size();
    summarize(t.pair_us, tw.pair_mean_us, tw.pair_median_us);
    summarize(t.source_us, tw.source_mean_us, tw.source_median_us);
  }
  std::uint64_t checksum = 0;
  for (std::size_t i = 0; i < common_pairs; ++i) checksum = mix(checksum, static_cast<std::uint64_t>(ref_pair[i]));
  for (std::size_t i = 0; i < common_sources; ++i) checksum = mix(checksum, hash_bits(ref_source[i]));

  std::vector<BenchRecord> out;
  for (const auto& algo : opts.algos) {
    if (algo == "tw") {
      tw.checksum = checksum;
      out.push_back(tw);
      continue;
    }
    BenchRecord r = base_record(algo);
    r.width = pst.max_width;
    std::function<bool(const Query&)> pair_fn;
    std::function<BitString(const Query&)> source_fn;
    std::size_t np = pairs.size(), ns = sources.size();
    std::optional<CppTable> cpp;
    std::unique_ptr<OdCache> od;
    if (algo == "nopp") {
      np = common_pairs;
      ns = common_sources;
      pair_fn = [&](const Query& q) { return nopp_pair(inst, q.u, q.d1, q.v, q.d2); };
      source_fn = [&](const Query& q) { return nopp_source(inst, q.u, q.d1); };
    } else if (algo == "cpp") {
      CppOptions co;
      co.time_budget_s = opts.budget_s;
      co.memory_budget_bytes = opts.cpp_memory_bytes;
      const auto s = Clock::now();
      try {
        cpp.emplace(CppTable::build(inst, co));
      } catch (const BudgetExceeded&) {
        r.preprocess_ms = us_since(s) / 1000.0;
        r.timeout = true;
        out.push_back(r);
        continue;
      }
      r.preprocess_ms = us_since(s) / 1000.0;
      pair_fn = [&](const Query& q) { return cpp->pair(q.u, q.d1, q.v, q.d2); };
      source_fn = [&](const Query& q) { return cpp->source(q.u, q.d1); };
    } else if (algo == "od") {
      od = std::make_unique<OdCache>(inst);
      pair_fn = [&](const Query& q) { return od->pair(q.u, q.d1, q.v, q.d2); };
      source_fn = [&](const Query& q) { return od->source(q.u, q.d1); };
    } else {
      throw std::invalid_argument("unknown algorithm \"" + algo + "\"");
    }

    Timings t;
    const auto start = Clock::now();
    auto over_budget = [&] { return us_since(start) > opts.budget_s * 1e6; };
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < np; ++i) {
      if (i >= common_pairs && over_budget()) {
        r.timeout = true;
        break;
      }
      const auto s = Clock::now();
      const bool a = pair_fn(pairs[i]);
      t.pair_us.push_back(us_since(s));
      if (a != static_cast<bool>(ref_pair[i]))
        throw BenchMismatch(algo + " disagrees with tw on " + format_query(inst, pairs[i]));
      if (i < common_pairs) sum = mix(sum, static_cast<std::uint64_t>(a));
    }
    for (std::size_t i = 0; i < ns; ++i) {
      if (i >= common_sources && over_budget()) {
        r.timeout = true;
        break;
      }
      const auto s = Clock::now();
      const BitString a = source_fn(sources[i]);
      t.source_us.push_back(us_since(s));
      if (!(a == ref_source[i])) throw BenchMismatch(algo + " disagrees with tw on " + format_query(inst, sources[i]));
      if (i < common_sources) sum = mix(sum, hash_bits(a));
    }
    r.pair_queries = t.pair_us.size();
    r.source_queries = t.source_us.size();
    summarize(t.pair_us, r.pair_mean_us, r.pair_median_us);
    summarize(t.source_us, r.source_mean_us, r.source_median_us);
    r.checksum = sum;
    out.push_back(r);
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "instance,n,domain,width,exploded_size,algo,threads,preprocess_ms,pair_queries,pair_mean_us,"
         "pair_median_us,source_queries,source_mean_us,source_median_us,checksum,timeout\n";
  for (const auto& r : records) {
    out << r.instance_id << ',' << r.n << ',' << r.domain << ',' << r.width << ',' << r.exploded_size << ',' << r.algo
        << ',' << r.threads << ',' << r.preprocess_ms << ',' << r.pair_queries << ',' << r.pair_mean_us << ','
        << r.pair_median_us << ',' << r.source_queries << ',' << r.source_mean_us << ',' << r.source_median_us << ','
        << r.checksum << ',' << (r.timeout ? 1 : 0) << '\n';
  }
}

std::string gnuplot_script(const std::string& csv_path, const std::string& png_path) {
  return "set datafile separator ','\n"
         "set terminal pngcairo size 900,500\n"
         "set output '" + png_path + "'\n"
         "set style data histograms\n"
         "set style fill solid 0.8\n"
         "set logscale y\n"
         "set ylabel 'mean query time (us)'\n"
         "set key top left\n"
         "plot '" + csv_path + "' every ::1 using 10:xtic(6) title 'pair', \\\n"
         "     '' every ::1 using 13 title 'single source'\n";
}

}  // namespace ifds
