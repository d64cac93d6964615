#include "harmony/constructors.hpp"

#include <algorithm>

#include "harmony/errors.hpp"

namespace harmony {

namespace {

Block whole_group(const AbelianGroup& g) {
  Multiset m;
  for (Index x = 0; x < g.order(); ++x) m[x] = 1;
  return Block(std::move(m));
}

void require_order(const AbelianGroup& g, std::uint64_t n, const std::string& what) {
  if (g.order() != n) {
    throw PreconditionError(what + " needs a group of order " + std::to_string(n) + ", got " + g.describe());
  }
}

// Integer partitions of n in non-increasing order.
void partitions(std::uint64_t n, std::uint64_t max_part, std::vector<std::uint64_t>& cur,
                std::vector<std::vector<std::uint64_t>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (std::uint64_t p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

BlockFamily classic_sdf(const AbelianGroup& g) {
  const auto k = g.order() + 1;
  BlockFamily f{g, {}};
  f.entries.push_back({Block::constant(0, k), 1});
  f.entries.push_back({whole_group(g).joined(Block::constant(0, 1)), k});
  return f;
}

std::vector<std::string> fixture_names() { return {"z9_a", "z9_b", "z2_pairs", "order4_a", "order4_b", "doubled"}; }

BlockFamily fixture(const std::string& name, const std::optional<AbelianGroup>& given) {
  if (name == "z9_a" || name == "z9_b") {
    const auto g = given.value_or(AbelianGroup::cyclic(9));
    if (!(g == AbelianGroup::cyclic(9))) throw PreconditionError(name + " is defined over Z9 only");
    BlockFamily f{g, {}};
    if (name == "z9_a") {
      f.entries.push_back({Block::of({0, 0, 0, 1}), 1});
      f.entries.push_back({Block::of({0, 0, 0, 1, 2, 2, 3, 4, 5, 6, 6, 7}), 1});
    } else {
      f.entries.push_back({Block::of({0, 0, 0, 1, 4, 7}), 1});
      f.entries.push_back({Block::constant(0, 3).joined(whole_group(g)), 1});
    }
    return f;
  }
  if (name == "z2_pairs") {
    const auto g = given.value_or(AbelianGroup::cyclic(2));
    if (!(g == AbelianGroup::cyclic(2))) throw PreconditionError("z2_pairs is defined over Z2 only");
    return BlockFamily{g, {{Block::of({0, 0}), 2}, {Block::of({0, 0, 1, 1}), 1}}};
  }
  if (name == "order4_a" || name == "order4_b") {
    const auto g = given.value_or(AbelianGroup({2, 2}));
    require_order(g, 4, name);
    // nonzero elements 1, a, b are the indices 1, 2, 3
    BlockFamily f{g, {}};
    f.entries.push_back({Block::constant(0, 3), 1});
    if (name == "order4_a") {
      f.entries.push_back({Block::of({0, 0, 1, 2, 3}), 1});
      f.entries.push_back({Block::of({1, 1, 2, 2, 3, 3}), 1});
    } else {
      f.entries.push_back({Block::of({1, 2, 3}), 1});
      f.entries.push_back({Block::of({0, 0, 0, 1, 2, 3}), 2});
    }
    return f;
  }
  if (name == "doubled") {
    const auto g = given.value_or(AbelianGroup::cyclic(3));
    const auto k = g.order();
    if (k < 3) throw PreconditionError("doubled needs |G| >= 3");
    const auto all = whole_group(g);
    return BlockFamily{g, {{Block::constant(0, k), 2}, {all, 2 * k - 4}, {all.joined(all), 1}}};
  }
  throw PreconditionError("unknown fixture '" + name + "'");
}

BlockFamily fund_sdf(const AbelianGroup& g, std::uint64_t h) {
  const auto k = g.order();
  if (h <= k + 1) {
    throw PreconditionError("fund needs h > |G| + 1 (h = " + std::to_string(h) + ", |G| = " + std::to_string(k) + ")");
  }
  const auto all = whole_group(g);
  BlockFamily f{g, {}};
  f.entries.push_back({Block::constant(0, k), h - k});
  f.entries.push_back({all, h * h - h * k - 2 * h + k});
  f.entries.push_back({Block::constant(0, h - k).joined(all), k});
  return f;
}

BlockFamily union_sdfs(const std::vector<BlockFamily>& families) {
  if (families.empty()) throw PreconditionError("union of no families");
  BlockFamily out{families.front().group, {}};
  for (const auto& f : families) {
    if (!(f.group == out.group)) throw PreconditionError("union of families over different groups");
    const auto v = classify(f);
    if (v.kind != FamilyKind::strong || !v.harmonious) throw PreconditionError("union input is not a harmonious SDF");
    out.entries.insert(out.entries.end(), f.entries.begin(), f.entries.end());
  }
  return out;
}

Assembly assemble_for_k(const std::set<std::uint64_t>& k, const std::optional<AbelianGroup>& given) {
  if (k.size() < 2) throw PreconditionError("K needs at least two sizes");
  if (*k.begin() == 0) throw PreconditionError("block sizes must be positive");
  const std::vector<std::uint64_t> sizes(k.begin(), k.end());
  const auto g = given.value_or(AbelianGroup::cyclic(sizes[0]));
  require_order(g, sizes[0], "assembly");
  std::vector<BlockFamily> parts;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (i == 1 && sizes[1] == sizes[0] + 1) {
      parts.push_back(classic_sdf(g));
    } else {
      parts.push_back(fund_sdf(g, sizes[i]));
    }
  }
  Assembly a{g, union_sdfs(parts), 0};
  a.lambda = a.family.flatten_size();
  return a;
}

std::vector<AbelianGroup> abelian_groups_of_order(std::uint64_t n) {
  if (n == 0) throw PreconditionError("group order must be positive");
  std::vector<std::vector<std::uint64_t>> options{{}};
  for (auto p : prime_factors(n)) {
    std::uint64_t e = 0;
    for (auto m = n; m % p == 0; m /= p) ++e;
    std::vector<std::vector<std::uint64_t>> parts;
    std::vector<std::uint64_t> cur;
    partitions(e, e, cur, parts);
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& base : options) {
      for (const auto& part : parts) {
        auto f = base;
        for (auto x : part) {
          std::uint64_t q = 1;
          for (std::uint64_t i = 0; i < x; ++i) q *= p;
          f.push_back(q);
        }
        next.push_back(std::move(f));
      }
    }
    options = std::move(next);
  }
  std::vector<AbelianGroup> out;
  for (auto& f : options) out.emplace_back(std::move(f));
  return out;
}

std::vector<SdfRecipe> sdf_catalog() {
  std::vector<SdfRecipe> out;
  for (std::uint64_t n = 1; n <= 8; ++n) {
    for (const auto& g : abelian_groups_of_order(n)) {
      const auto k = n + 1;
      out.push_back({"classic", g, "k=" + std::to_string(k), {{k, k + 1}}, k * k + k, [g] { return classic_sdf(g); }});
    }
  }
  const auto z9 = AbelianGroup::cyclic(9);
  out.push_back({"z9_a", z9, "", {{4, 1}, {12, 1}}, 16, [] { return fixture("z9_a"); }});
  out.push_back({"z9_b", z9, "", {{6, 1}, {12, 1}}, 18, [] { return fixture("z9_b"); }});
  out.push_back({"z2_pairs", AbelianGroup::cyclic(2), "", {{2, 2}, {4, 1}}, 8, [] { return fixture("z2_pairs"); }});
  for (const auto& g : abelian_groups_of_order(4)) {
    out.push_back({"order4_a", g, "", {{3, 1}, {5, 1}, {6, 1}}, 14, [g] { return fixture("order4_a", g); }});
    out.push_back({"order4_b", g, "", {{3, 2}, {6, 2}}, 18, [g] { return fixture("order4_b", g); }});
  }
  for (std::uint64_t k = 3; k <= 6; ++k) {
    for (const auto& g : abelian_groups_of_order(k)) {
      out.push_back({"doubled", g, "k=" + std::to_string(k), {{k, 2 * k - 2}, {2 * k, 1}}, 2 * k * k,
                     [g] { return fixture("doubled", g); }});
    }
  }
  return out;
}

}  // namespace harmony
