#include "ifds/relation.hpp"

namespace ifds {

FactDomain::FactDomain(const std::vector<std::string>& facts) : FactDomain() {
  for (const auto& f : facts) {
    if (f.empty()) throw RelationError("empty fact name");
    if (index_.count(f)) {
      if (f == "0") throw RelationError("fact name \"0\" is reserved");
      throw RelationError("duplicate fact \"" + f + "\"");
    }
    index_.emplace(f, static_cast<FactIndex>(names_.size()));
    names_.push_back(f);
  }
}

FactIndex FactDomain::index_of(const std::string& fact) const {
  auto it = index_.find(fact);
  if (it == index_.end()) throw RelationError("unknown fact \"" + fact + "\"");
  return it->second;
}

FlowRelation::FlowRelation(std::size_t extended_size) : matrix_(extended_size, extended_size) {
  if (extended_size == 0) throw RelationError("fact domain must contain the 0 fact");
  matrix_.set(0, 0);
}

FlowRelation FlowRelation::identity(std::size_t extended_size) {
  FlowRelation r(extended_size);
  for (std::size_t d = 1; d < extended_size; ++d) r.matrix_.set(d, d);
  return r;
}

FlowRelation FlowRelation::from_pairs(std::size_t extended_size,
                                      const std::vector<std::pair<FactIndex, FactIndex>>& pairs) {
  FlowRelation r(extended_size);
  for (auto [a, b] : pairs) {
    r.check(a);
    r.check(b);
    if (a != 0 && b == 0) throw RelationError("pair (a,0) with a != 0 is not a valid relation pair");
    r.matrix_.set(a, b);
  }
  r.normalize();
  return r;
}

FlowRelation FlowRelation::gen_kill(std::size_t extended_size, const std::vector<FactIndex>& gen,
                                    const std::vector<FactIndex>& kill) {
  FlowRelation r(extended_size);
  std::vector<char> killed(extended_size, 0);
  for (FactIndex k : kill) {
    r.check(k);
    killed[k] = 1;
  }
  for (FactIndex g : gen) {
    r.check(g);
    if (g == 0) throw RelationError("cannot generate the 0 fact");
    r.matrix_.set(0, g);
  }
  for (std::size_t d = 1; d < extended_size; ++d)
    if (!killed[d]) r.matrix_.set(d, d);
  r.normalize();
  return r;
}

void FlowRelation::add(FactIndex a, FactIndex b) {
  check(a);
  check(b);
  if (a != 0 && b == 0) throw RelationError("pair (a,0) with a != 0 is not a valid relation pair");
  matrix_.set(a, b);
  normalize();
}

void FlowRelation::check(FactIndex a) const {
  if (a >= matrix_.rows()) throw RelationError("fact index " + std::to_string(a) + " out of range");
}

void FlowRelation::normalize() {
  matrix_.set(0, 0);
  const auto zero = matrix_.row(0);
  for (std::size_t a = 1; a < matrix_.rows(); ++a) {
    auto r = matrix_.row(a);
    for (std::size_t w = 0; w < r.size(); ++w) r[w] &= ~zero[w];
  }
}

std::vector<std::pair<FactIndex, FactIndex>> FlowRelation::pairs() const {
  std::vector<std::pair<FactIndex, FactIndex>> out;
  for (std::size_t a = 0; a < matrix_.rows(); ++a)
    for (std::size_t b = 0; b < matrix_.cols(); ++b)
      if (matrix_.test(a, b)) out.emplace_back(static_cast<FactIndex>(a), static_cast<FactIndex>(b));
  return out;
}

std::size_t FlowRelation::pair_count() const { return bits::count(matrix_.data()); }

std::size_t FlowRelation::out_degree(FactIndex a) const {
  check(a);
  return bits::count(matrix_.row(a));
}

std::size_t FlowRelation::in_degree(FactIndex b) const {
  check(b);
  std::size_t n = 0;
  for (std::size_t a = 0; a < matrix_.rows(); ++a) n += matrix_.test(a, b);
  return n;
}

BitString FlowRelation::apply(const BitString& input) const {
  if (input.size() != extended_size()) throw RelationError("input set has the wrong width");
  BitString out(extended_size());
  auto dst = out.words();
  const auto zero = matrix_.row(0);
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= zero[w];
  input.for_each_set([&](std::size_t a) {
    if (a == 0) return;
    const auto r = matrix_.row(a);
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= r[w];
  });
  out.set(0);
  return out;
}

FlowRelation compose(const FlowRelation& f, const FlowRelation& g) {
  if (f.extended_size() != g.extended_size()) throw RelationError("relations over different domains");
  const std::size_t p = f.extended_size();
  std::vector<std::pair<FactIndex, FactIndex>> pairs;
  // Row a of the result is the union of the rows of g selected by row a of f.
  // Only row 0 of f contains 0, so g's constant part lands in row 0 alone.
  for (std::size_t a = 0; a < p; ++a) {
    BitString acc(p);
    auto dst = acc.words();
    const auto fa = f.row(static_cast<FactIndex>(a));
    for (std::size_t c = 0; c < p; ++c) {
      if (!bits::test(fa, c)) continue;
      const auto gc = g.row(static_cast<FactIndex>(c));
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= gc[w];
    }
    acc.for_each_set([&](std::size_t b) {
      pairs.emplace_back(static_cast<FactIndex>(a), static_cast<FactIndex>(b));
    });
  }
  return FlowRelation::from_pairs(p, pairs);
}

}  // namespace ifds
