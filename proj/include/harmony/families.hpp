#pragma once

// Multisets over a finite abelian group, their difference lists, and the
// classification of block families (strong, relative, partitioned DFs).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harmony/algebra.hpp"

namespace harmony {

/// Sparse multiset of group elements: element index -> multiplicity.
using Multiset = std::map<Index, std::uint64_t>;

std::uint64_t multiset_size(const Multiset& m);

/// A block is a multiset of group elements with total multiplicity >= 1.
/// Positions (for liftings and plans) enumerate elements in index order,
/// each repeated by its multiplicity.
class Block {
 public:
  Block() = default;
  explicit Block(Multiset counts);
  static Block of(std::initializer_list<Index> elements);
  static Block of(const std::vector<Index>& elements);
  /// O_n: the element 0 with multiplicity n.
  static Block constant(Index element, std::uint64_t n);

  const Multiset& counts() const { return counts_; }
  std::uint64_t size() const;
  /// Elements in position order.
  std::vector<Index> elements() const;
  Block translated(const AbelianGroup& g, Index by) const;
  /// Union of multisets (multiplicities add).
  Block joined(const Block& other) const;

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block& a, const Block& b) { return a.counts_ <=> b.counts_; }

 private:
  Multiset counts_;
};

struct FamilyEntry {
  Block block;
  std::uint64_t repeat = 1;
};

/// A sequence of blocks over one group. Repeated blocks are stored once with
/// a repetition count, mirroring exponential notation.
struct BlockFamily {
  AbelianGroup group;
  std::vector<FamilyEntry> entries;

  std::uint64_t block_count() const;
  /// Every block, repeats expanded, in listing order.
  std::vector<Block> blocks() const;
  /// size -> number of blocks of that size.
  std::map<std::uint64_t, std::uint64_t> size_profile() const;
  std::uint64_t flatten_size() const;
};

/// Multiset of ordered differences b_i - b_j over distinct positions.
Multiset delta_block(const AbelianGroup& g, const Block& b);
Multiset delta_family(const BlockFamily& f);
Multiset flatten(const BlockFamily& f);

/// A subgroup given by its sorted element list.
class Subgroup {
 public:
  static Subgroup trivial();
  static Subgroup generated(const AbelianGroup& g, const std::vector<Index>& generators);
  /// Throws PreconditionError unless the elements form a subgroup.
  static Subgroup from_elements(const AbelianGroup& g, std::vector<Index> elements);
  /// A x {0} inside A x B, where `tail_order` = |B|.
  static Subgroup head(const AbelianGroup& full, std::uint64_t tail_order);

  const std::vector<Index>& elements() const { return elements_; }
  std::uint64_t order() const { return elements_.size(); }
  bool contains(Index x) const;

  friend bool operator==(const Subgroup&, const Subgroup&) = default;

 private:
  std::vector<Index> elements_{0};
};

enum class FamilyKind { none, strong, relative, partitioned };

std::string to_string(FamilyKind k);

struct FamilyVerdict {
  FamilyKind kind = FamilyKind::none;
  std::uint64_t lambda = 0;
  bool harmonious = false;   // strong only: sizes sum to lambda
  bool resolvable = false;   // relative only: flatten is a transversal of the nontrivial cosets of H
  Subgroup subgroup;         // the H the relative verdict refers to
  std::map<std::uint64_t, std::uint64_t> sizes;
  std::string reason;        // why the family is none of the kinds
};

/// Counts the difference list exhaustively. Order of tests: strong; relative
/// to `h` when a nontrivial h is given; partitioned; relative to {0}.
FamilyVerdict classify(const BlockFamily& f, const std::optional<Subgroup>& h = std::nullopt);

}  // namespace harmony
