#include "ifds/index_io.hpp"

#include <fstream>
#include <iterator>

namespace ifds {

namespace {

class Writer {
 public:
  void u64(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  template <typename T>
  void array(const std::vector<T>& xs) {
    u64(xs.size());
    for (auto x : xs) u64(static_cast<std::uint64_t>(x));
  }
  void bytes(const std::string& s) {
    u64(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
    while (out_.size() % 8) out_.push_back(0);
  }
  std::size_t words() const { return out_.size() / 8; }
  void patch(std::size_t word, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) out_[word * 8 + i] = static_cast<std::uint8_t>(x >> (8 * i));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::uint64_t u64() {
    if (pos_ + 8 > in_.size()) throw IndexFormatError("index file is truncated");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return x;
  }
  std::uint64_t count(std::uint64_t limit) {
    const auto n = u64();
    if (n > limit) throw IndexFormatError("index file has an implausible array length");
    return n;
  }
  template <typename T>
  std::vector<T> array() {
    const auto n = count((in_.size() - pos_) / 8);
    std::vector<T> xs(n);
    for (auto& x : xs) x = static_cast<T>(u64());
    return xs;
  }
  std::string bytes() {
    const auto n = count(in_.size() - pos_);
    std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += (n + 7) / 8 * 8;
    if (pos_ > in_.size()) throw IndexFormatError("index file is truncated");
    return s;
  }
  std::size_t word() const { return pos_ / 8; }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

void write_strings(Writer& w, const PackedStrings& s) {
  w.u64(s.fact_count());
  w.array(s.lengths());
  w.array(s.pool());
}

PackedStrings read_strings(Reader& r, std::size_t vertices, std::size_t facts) {
  const auto f = r.u64();
  auto lengths = r.array<std::uint32_t>();
  auto pool = r.array<Word>();
  if (f != facts || lengths.size() != vertices) throw IndexFormatError("string table does not match the procedure");
  try {
    return PackedStrings::from_parts(lengths, facts, std::move(pool));
  } catch (const std::invalid_argument& e) {
    throw IndexFormatError(e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_index(const QueryIndex& ix) {
  const Instance& inst = ix.instance();
  Writer w;
  w.u64(kIndexMagic);
  w.u64(kIndexVersion);
  w.bytes(to_json(inst));
  w.u64(inst.vertex_count());
  w.u64(inst.domain.size());
  w.u64(ix.procedure_count());
  const std::size_t table = w.words();
  for (std::size_t p = 0; p < ix.procedure_count(); ++p) w.u64(0);
  for (ProcId p = 0; p < ix.procedure_count(); ++p) {
    w.patch(table + p, w.words());
    const auto& pi = ix.procedure(p);
    const auto& tree = pi.tree;
    w.u64(tree.vertex_count());
    w.u64(tree.bag_count());
    std::vector<std::uint64_t> offsets{0}, vertices, parents;
    for (std::uint32_t b = 0; b < tree.bag_count(); ++b) {
      for (auto v : tree.bag(b)) vertices.push_back(v);
      offsets.push_back(vertices.size());
      parents.push_back(static_cast<std::uint64_t>(static_cast<std::int64_t>(tree.parent(b))));
    }
    w.array(offsets);
    w.array(vertices);
    w.array(parents);
    const auto& lca = tree.lca_index().tables();
    w.array(lca.euler);
    w.array(lca.depth);
    w.array(lca.first);
    w.array(lca.sparse);
    write_strings(w, pi.anc_forward);
    write_strings(w, pi.anc_backward);
    write_strings(w, pi.desc);
  }
  return w.take();
}

QueryIndex deserialize_index(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() % 8) throw IndexFormatError("index file size is not a multiple of 8 bytes");
  Reader r(bytes);
  if (r.u64() != kIndexMagic) throw IndexFormatError("not an index file (bad magic)");
  if (const auto v = r.u64(); v != kIndexVersion)
    throw IndexFormatError("unsupported index version " + std::to_string(v));
  std::shared_ptr<const Instance> inst;
  try {
    inst = std::make_shared<const Instance>(parse_instance(r.bytes()));
  } catch (const std::runtime_error& e) {
    throw IndexFormatError(std::string("embedded instance: ") + e.what());
  }
  const auto n = r.u64();
  const auto dsize = r.u64();
  const auto nprocs = r.u64();
  if (n != inst->vertex_count() || dsize != inst->domain.size() || nprocs != inst->procedures.size())
    throw IndexFormatError("index header does not match the embedded instance");
  std::vector<std::uint64_t> table(nprocs);
  for (auto& t : table) t = r.u64();
  const std::size_t P = inst->fact_count();
  std::vector<ProcedureIndex> procs(nprocs);
  for (ProcId p = 0; p < nprocs; ++p) {
    if (r.word() != table[p]) throw IndexFormatError("procedure offset table is inconsistent");
    const auto nv = r.u64();
    const auto nb = r.u64();
    if (nv != inst->procedures[p].size) throw IndexFormatError("procedure size mismatch");
    const auto offsets = r.array<std::uint64_t>();
    const auto vertices = r.array<std::uint32_t>();
    const auto parents = r.array<std::int64_t>();
    if (offsets.size() != nb + 1 || parents.size() != nb || offsets.front() != 0 || offsets.back() != vertices.size())
      throw IndexFormatError("malformed bag table");
    std::vector<std::vector<std::uint32_t>> bags(nb);
    std::vector<std::int32_t> parent(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      if (offsets[b] > offsets[b + 1]) throw IndexFormatError("malformed bag table");
      bags[b].assign(vertices.begin() + static_cast<std::ptrdiff_t>(offsets[b]),
                     vertices.begin() + static_cast<std::ptrdiff_t>(offsets[b + 1]));
      parent[b] = static_cast<std::int32_t>(parents[b]);
    }
    LcaIndex::Tables lca;
    lca.euler = r.array<std::uint32_t>();
    lca.depth = r.array<std::uint32_t>();
    lca.first = r.array<std::uint32_t>();
    lca.sparse = r.array<std::uint32_t>();
    try {
      procs[p].tree = ProcedureTree::from_preorder(std::move(bags), std::move(parent), nv, std::move(lca));
    } catch (const std::exception& e) {
      throw IndexFormatError(std::string("procedure ") + inst->procedures[p].name + ": " + e.what());
    }
    procs[p].anc_forward = read_strings(r, nv, P);
    procs[p].anc_backward = read_strings(r, nv, P);
    procs[p].desc = read_strings(r, nv, P);
    const auto& tree = procs[p].tree;
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (procs[p].anc_forward.length(v) != tree.delta(tree.root_bag(v)) * P ||
          procs[p].anc_backward.length(v) != tree.delta(tree.root_bag(v)) * P ||
          procs[p].desc.length(v) != tree.alpha(v) * P)
        throw IndexFormatError("string lengths do not match the tree of procedure " + inst->procedures[p].name);
    }
  }
  if (!r.at_end()) throw IndexFormatError("trailing data after the last procedure");
  return QueryIndex(std::move(inst), std::move(procs));
}

void save_index(const QueryIndex& ix, const std::string& path) {
  const auto bytes = serialize_index(ix);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IndexFormatError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IndexFormatError("cannot write " + path);
}

QueryIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexFormatError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_index(bytes);
}

}  // namespace ifds
