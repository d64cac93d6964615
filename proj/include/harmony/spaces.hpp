#pragma once

// Resolved linear spaces from partitioned difference families: the base
// parallel class of a resolvable relative DF, its development under
// translation, and exhaustive checks of the linear-space, resolution and
// harmonious-action properties.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "harmony/families.hpp"

namespace harmony {

struct ParallelClassPdf {
  AbelianGroup group;
  Subgroup subgroup;
  std::uint64_t lambda = 0;
  /// Translates B + h (h outer, in subgroup order), then H itself.
  std::vector<Block> blocks;
  /// H = {0}: the class is F plus the singleton {0}.
  bool degenerate = false;

  BlockFamily family() const;
};

/// P = {B + h : B in F, h in H} u {H}. Throws PreconditionError unless F is
/// a resolvable relative DF with index 1, VerificationError if the result
/// does not classify as a PDF with index |H|.
ParallelClassPdf pdf_from_rdf(const BlockFamily& f, const Subgroup& h);

/// Points are group indices 0..v-1. Blocks are stored flat, each sorted,
/// blocks sorted inside their class; classes keep their order.
class ResolvedSpace {
 public:
  ResolvedSpace() = default;
  ResolvedSpace(AbelianGroup group, const std::vector<std::vector<std::vector<Index>>>& classes);

  const AbelianGroup& group() const { return group_; }
  std::uint64_t v() const { return group_.order(); }
  std::size_t block_count() const { return block_start_.size() - 1; }
  std::size_t class_count() const { return class_start_.size() - 1; }
  std::span<const std::uint32_t> block(std::size_t b) const;
  /// Blocks [first, last) of class c.
  std::pair<std::size_t, std::size_t> class_blocks(std::size_t c) const { return {class_start_[c], class_start_[c + 1]}; }
  std::vector<std::vector<std::vector<Index>>> classes() const;

 private:
  AbelianGroup group_;
  std::vector<std::uint32_t> points_;
  std::vector<std::size_t> block_start_{0};
  std::vector<std::size_t> class_start_{0};
};

/// Translations fixing the block set of a partition of G, by exhaustion.
std::vector<Index> partition_stabilizer(const AbelianGroup& g, const std::vector<Block>& blocks);

/// Classes P + s for s in the transversal of H made of coset minima.
/// Throws VerificationError when the stabilizer of P is not H.
ResolvedSpace develop(const ParallelClassPdf& p);

std::map<std::uint64_t, std::uint64_t> count_blocks(const ResolvedSpace& s);

/// Above this many points pair coverage is sampled.
inline constexpr std::uint64_t exhaustive_point_limit = 10000;

struct SpaceCertificate {
  std::uint64_t v = 0;
  std::uint64_t classes = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // block size -> number of blocks
  bool linear = false;      // every pair of points in exactly one block
  bool resolved = false;    // every class partitions the points
  bool exhaustive = false;  // pair coverage checked on all pairs
  std::uint64_t pairs_checked = 0;
  std::string defect;

  std::set<std::uint64_t> sizes() const;
  bool ok() const { return linear && resolved; }
};

struct SpaceCheckOptions {
  std::uint64_t exhaustive_limit = exhaustive_point_limit;
  std::uint64_t sample_pairs = 2000000;
  std::uint64_t seed = 1;
};

SpaceCertificate verify_space(const ResolvedSpace& s, const SpaceCheckOptions& options = {});

bool pair_coverage_check(const ResolvedSpace& s);

struct HarmonyCertificate {
  std::uint64_t acting_order = 0;
  bool point_regular = false;         // sharply transitive on points
  bool preserves_resolution = false;  // blocks to blocks, classes to classes
  bool class_transitive = false;
  std::vector<Index> stabilizer;      // of class 0 in the acting group
  /// class_maps[i][c]: image of class c under generator i.
  std::vector<std::vector<std::size_t>> class_maps;
  std::string defect;

  bool harmonious() const { return point_regular && preserves_resolution && class_transitive; }
};

/// Generators of the translation group acting on the space's points (the
/// unit vectors of every cyclic factor).
std::vector<Index> standard_generators(const AbelianGroup& g);

/// Translation action of the subgroup generated by `generators`. Throws
/// PreconditionError when the group order differs from the point count.
HarmonyCertificate verify_harmonious(const ResolvedSpace& s, const AbelianGroup& group,
                                     const std::vector<Index>& generators);
inline HarmonyCertificate verify_harmonious(const ResolvedSpace& s, const AbelianGroup& group) {
  return verify_harmonious(s, group, standard_generators(group));
}

}  // namespace harmony
