#pragma once

// Harmonious strong difference families: the small fixture catalog, the
// two-size "fund" family, unions, and the assembly for an arbitrary size set.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "harmony/families.hpp"

namespace harmony {

/// {O_k, (G u {0})^k} with k = |G| + 1; lambda = k^2 + k.
BlockFamily classic_sdf(const AbelianGroup& g);

/// Named fixtures: z9_a, z9_b (over Z9), z2_pairs ({0,0}^2, {0,0,1,1} over Z2),
/// order4_a, order4_b (either group of order 4) and doubled (|G| >= 3).
/// Blocks are listed in the order the examples are usually written.
BlockFamily fixture(const std::string& name, const std::optional<AbelianGroup>& g = std::nullopt);
std::vector<std::string> fixture_names();

/// X = O_k repeated h-k times, Y = G repeated h^2-hk-2h+k times and
/// Z = O_{h-k} u G repeated k times, where k = |G| and h > k+1.
BlockFamily fund_sdf(const AbelianGroup& g, std::uint64_t h);

/// Concatenation of harmonious SDFs over one group.
BlockFamily union_sdfs(const std::vector<BlockFamily>& families);

struct Assembly {
  AbelianGroup group;
  BlockFamily family;
  std::uint64_t lambda = 0;
};

/// Harmonious SDF over a group of order min(K) whose block sizes, together
/// with min(K), give exactly K. The group defaults to Z_{min K}.
Assembly assemble_for_k(const std::set<std::uint64_t>& k, const std::optional<AbelianGroup>& g = std::nullopt);

/// A named way to build an SDF together with the signature it must have.
struct SdfRecipe {
  std::string name;
  AbelianGroup group;
  std::string parameters;
  std::map<std::uint64_t, std::uint64_t> sizes;  // expected K with multiplicities
  std::uint64_t lambda = 0;
  std::function<BlockFamily()> build;
};

/// classic for |G| <= 8, the named fixtures over every group they accept,
/// doubled for 3 <= |G| <= 6.
std::vector<SdfRecipe> sdf_catalog();

/// One representative of each abelian group of order n, written as a product
/// of cyclic prime-power factors.
std::vector<AbelianGroup> abelian_groups_of_order(std::uint64_t n);

}  // namespace harmony
