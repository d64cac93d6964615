#include "harmony/families.hpp"

#include <algorithm>

#include "harmony/errors.hpp"

namespace harmony {

std::uint64_t multiset_size(const Multiset& m) {
  std::uint64_t n = 0;
  for (const auto& [x, c] : m) n += c;
  return n;
}

Block::Block(Multiset counts) : counts_(std::move(counts)) {
  std::erase_if(counts_, [](const auto& kv) { return kv.second == 0; });
  if (counts_.empty()) throw PreconditionError("a block needs at least one element");
}

Block Block::of(std::initializer_list<Index> elements) { return of(std::vector<Index>(elements)); }

Block Block::of(const std::vector<Index>& elements) {
  Multiset m;
  for (auto x : elements) ++m[x];
  return Block(std::move(m));
}

Block Block::constant(Index element, std::uint64_t n) { return Block(Multiset{{element, n}}); }

std::uint64_t Block::size() const { return multiset_size(counts_); }

std::vector<Index> Block::elements() const {
  std::vector<Index> out;
  for (const auto& [x, c] : counts_) out.insert(out.end(), c, x);
  return out;
}

Block Block::translated(const AbelianGroup& g, Index by) const {
  Multiset m;
  for (const auto& [x, c] : counts_) m[g.add(x, by)] += c;
  return Block(std::move(m));
}

Block Block::joined(const Block& other) const {
  auto m = counts_;
  for (const auto& [x, c] : other.counts_) m[x] += c;
  return Block(std::move(m));
}

std::uint64_t BlockFamily::block_count() const {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += e.repeat;
  return n;
}

std::vector<Block> BlockFamily::blocks() const {
  std::vector<Block> out;
  for (const auto& e : entries) out.insert(out.end(), e.repeat, e.block);
  return out;
}

std::map<std::uint64_t, std::uint64_t> BlockFamily::size_profile() const {
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& e : entries) out[e.block.size()] += e.repeat;
  return out;
}

std::uint64_t BlockFamily::flatten_size() const {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += e.repeat * e.block.size();
  return n;
}

Multiset delta_block(const AbelianGroup& g, const Block& b) {
  Multiset d;
  for (const auto& [x, cx] : b.counts()) {
    for (const auto& [y, cy] : b.counts()) {
      if (x == y) {
        if (cx > 1) d[0] += cx * (cx - 1);
      } else {
        d[g.sub(x, y)] += cx * cy;
      }
    }
  }
  return d;
}

Multiset delta_family(const BlockFamily& f) {
  Multiset d;
  for (const auto& e : f.entries) {
    for (const auto& [x, c] : delta_block(f.group, e.block)) d[x] += c * e.repeat;
  }
  return d;
}

Multiset flatten(const BlockFamily& f) {
  Multiset m;
  for (const auto& e : f.entries) {
    for (const auto& [x, c] : e.block.counts()) m[x] += c * e.repeat;
  }
  return m;
}

Subgroup Subgroup::trivial() { return Subgroup(); }

Subgroup Subgroup::generated(const AbelianGroup& g, const std::vector<Index>& generators) {
  Subgroup s;
  s.elements_ = generated_subgroup(g, generators);
  return s;
}

Subgroup Subgroup::from_elements(const AbelianGroup& g, std::vector<Index> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (elements.empty() || elements.front() != 0) throw PreconditionError("a subgroup must contain 0");
  for (auto x : elements) {
    if (x >= g.order()) throw PreconditionError("subgroup element outside the group");
  }
  for (auto x : elements) {
    for (auto y : elements) {
      if (!std::binary_search(elements.begin(), elements.end(), g.sub(x, y))) {
        throw PreconditionError("the given elements are not closed under subtraction");
      }
    }
  }
  Subgroup s;
  s.elements_ = std::move(elements);
  return s;
}

Subgroup Subgroup::head(const AbelianGroup& full, std::uint64_t tail_order) {
  if (tail_order == 0 || full.order() % tail_order) throw PreconditionError("tail order does not divide the group order");
  Subgroup s;
  s.elements_.clear();
  for (Index i = 0; i < full.order() / tail_order; ++i) s.elements_.push_back(i * tail_order);
  return s;
}

bool Subgroup::contains(Index x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::strong: return "SDF";
    case FamilyKind::relative: return "relative DF";
    case FamilyKind::partitioned: return "PDF";
    case FamilyKind::none: break;
  }
  return "none";
}

namespace {

std::vector<std::uint64_t> dense(const AbelianGroup& g, const Multiset& m) {
  std::vector<std::uint64_t> v(g.order(), 0);
  for (const auto& [x, c] : m) v[x] = c;
  return v;
}

// Constant value of v over the positions where `inside` is false; nullopt if
// it varies. Positions where `inside` is true must be 0.
std::optional<std::uint64_t> constant_outside(const std::vector<std::uint64_t>& v, const std::vector<bool>& inside) {
  std::optional<std::uint64_t> lambda;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (inside[i]) {
      if (v[i]) return std::nullopt;
    } else if (!lambda) {
      lambda = v[i];
    } else if (*lambda != v[i]) {
      return std::nullopt;
    }
  }
  return lambda;
}

bool transversal_of_nontrivial_cosets(const AbelianGroup& g, const Subgroup& h, const std::vector<std::uint64_t>& flat) {
  std::vector<bool> in_h(g.order(), false);
  for (auto x : h.elements()) in_h[x] = true;
  for (const auto& coset : cosets(g, h.elements())) {
    std::uint64_t hits = 0;
    for (auto x : coset) hits += flat[x];
    if (hits != (in_h[coset.front()] ? 0 : 1)) return false;
  }
  return true;
}

}  // namespace

FamilyVerdict classify(const BlockFamily& f, const std::optional<Subgroup>& h) {
  FamilyVerdict v;
  v.sizes = f.size_profile();
  if (f.entries.empty()) {
    v.reason = "empty family";
    return v;
  }
  if (h) {
    for (auto x : h->elements()) {
      if (x >= f.group.order()) throw PreconditionError("subgroup element outside the group");
    }
    Subgroup::from_elements(f.group, h->elements());
  }
  const auto& g = f.group;
  const auto delta = dense(g, delta_family(f));

  std::vector<bool> nothing(g.order(), false);
  if (auto lambda = constant_outside(delta, nothing); lambda && *lambda > 0) {
    v.kind = FamilyKind::strong;
    v.lambda = *lambda;
    v.harmonious = f.flatten_size() == *lambda;
    return v;
  }

  const auto flat = dense(g, flatten(f));
  auto relative = [&](const Subgroup& sub) {
    std::vector<bool> in_h(g.order(), false);
    for (auto x : sub.elements()) in_h[x] = true;
    auto lambda = constant_outside(delta, in_h);
    if (!lambda || *lambda == 0 || sub.order() == g.order()) return false;
    v.kind = FamilyKind::relative;
    v.lambda = *lambda;
    v.subgroup = sub;
    v.resolvable = *lambda == 1 && transversal_of_nontrivial_cosets(g, sub, flat);
    return true;
  };

  if (h && h->order() > 1 && relative(*h)) return v;

  const bool partition = std::all_of(flat.begin(), flat.end(), [](auto c) { return c == 1; });
  std::vector<bool> zero_only(g.order(), false);
  zero_only[0] = true;
  if (partition) {
    if (auto lambda = constant_outside(delta, zero_only); lambda && *lambda > 0) {
      v.kind = FamilyKind::partitioned;
      v.lambda = *lambda;
      return v;
    }
  }
  if (relative(Subgroup::trivial())) return v;
  v.reason = "difference list is not constant outside any candidate subgroup";
  return v;
}

}  // namespace harmony
