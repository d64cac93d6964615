#pragma once

// Exact arithmetic for finite abelian groups (products of cyclic factors),
// finite fields GF(p^m), cyclotomic classes and CRT isomorphisms.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace harmony {

/// Position of an element inside the mixed-radix enumeration of a group.
/// The first factor is the most significant digit, so index order is the
/// lexicographic order of coordinate tuples.
using Index = std::uint64_t;

struct GroupElement {
  std::vector<std::int64_t> coords;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Z_{n_1} x ... x Z_{n_t}. The empty product is the trivial group.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  explicit AbelianGroup(std::vector<std::uint64_t> factors);

  static AbelianGroup cyclic(std::uint64_t n) { return AbelianGroup({n}); }
  static AbelianGroup trivial() { return AbelianGroup(); }

  const std::vector<std::uint64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  Index order() const { return order_; }

  /// Reduces every coordinate into [0, n_i) first.
  Index index_of(const GroupElement& g) const;
  GroupElement element(Index i) const;
  std::vector<std::uint64_t> digits(Index i) const;

  Index add(Index a, Index b) const;
  Index sub(Index a, Index b) const;
  Index neg(Index a) const;
  Index times(Index a, std::uint64_t n) const;
  std::uint64_t element_order(Index a) const;

  /// this x other; an element (a, b) has index a * |other| + b.
  AbelianGroup product(const AbelianGroup& other) const;
  Index pair_index(Index left, Index right, const AbelianGroup& right_group) const {
    return left * right_group.order() + right;
  }

  std::string describe() const;

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<std::uint64_t> factors_;
  std::vector<std::uint64_t> strides_;
  Index order_ = 1;
};

/// Closure of `generators` under addition, sorted by index.
std::vector<Index> generated_subgroup(const AbelianGroup& g, std::span<const Index> generators);

/// Cosets H + x of a subgroup, each sorted, listed by smallest member.
std::vector<std::vector<Index>> cosets(const AbelianGroup& g, std::span<const Index> subgroup);

struct GroupSplit {
  std::vector<Index> involutions;  // G_0: 2g = 0, zero included
  std::vector<Index> plus;         // G+: the smaller member of each {g, -g}
  std::vector<Index> minus;        // G-: -G+, aligned with `plus`
};

GroupSplit group_split(const AbelianGroup& g);

/// Isomorphism Z_{n_1} x ... x Z_{n_t} -> Z_N for pairwise coprime n_i,
/// (x_1, ..., x_t) -> sum a_i x_i mod N.
class CrtMap {
 public:
  /// Standard idempotent coefficients (a_i = 1 mod n_i, 0 mod n_j).
  static CrtMap canonical(const AbelianGroup& g);
  static CrtMap with_coefficients(const AbelianGroup& g, std::vector<std::int64_t> coefficients);

  std::uint64_t modulus() const { return modulus_; }
  const std::vector<std::int64_t>& coefficients() const { return coefficients_; }
  const AbelianGroup& group() const { return group_; }

  std::uint64_t to_cyclic(Index i) const;
  Index from_cyclic(std::uint64_t y) const;

 private:
  CrtMap(AbelianGroup g, std::vector<std::int64_t> coefficients);

  AbelianGroup group_;
  std::vector<std::int64_t> coefficients_;
  std::vector<std::uint64_t> inverse_units_;
  std::uint64_t modulus_ = 1;
};

// ---------------------------------------------------------------------------
// Finite fields

/// Packed polynomial coefficients: value = sum c_i p^i, c_0 the constant term.
struct FieldElement {
  std::uint32_t value = 0;

  friend auto operator<=>(FieldElement, FieldElement) = default;
};

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
/// (p, m) with q = p^m, or nullopt when q is not a prime power.
std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q);

/// GF(p^m) realized as Z_p[x]/(f) for a primitive f. The canonical generator
/// is the class of x (m > 1) or the smallest primitive root (m = 1). Copies
/// share the immutable arithmetic tables.
class FiniteField {
 public:
  /// `modulus` is low-degree-first with m+1 entries; a non-monic polynomial
  /// is normalized to the monic one with the same roots. Without a modulus
  /// the lexicographically smallest primitive polynomial is chosen.
  FiniteField(std::uint32_t p, std::uint32_t m,
              std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  /// GF(q) with the default modulus.
  static FiniteField of_order(std::uint64_t q);

  std::uint32_t characteristic() const;
  std::uint32_t degree() const;
  std::uint64_t order() const;
  const std::vector<std::uint32_t>& modulus() const;
  FieldElement generator() const;

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }
  FieldElement element(std::uint64_t value) const;
  FieldElement from_integer(std::int64_t n) const;
  FieldElement from_coefficients(std::span<const std::int64_t> coefficients) const;
  std::vector<std::uint32_t> coefficients(FieldElement x) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement inv(FieldElement a) const;
  FieldElement pow(FieldElement a, std::int64_t e) const;

  /// generator^k, k taken mod q-1.
  FieldElement exp(std::uint64_t k) const;
  /// Discrete log base the canonical generator. Throws for 0.
  std::uint64_t log(FieldElement x) const;

  std::string describe() const;

  friend bool operator==(const FiniteField& a, const FiniteField& b);

 private:
  struct Tables;
  std::shared_ptr<const Tables> t_;
};

/// Image of every element of `small` inside `big` (indexed by value) under
/// the embedding sending small's generator to a root of small's modulus.
std::vector<FieldElement> subfield_embedding(const FiniteField& small, const FiniteField& big);

// ---------------------------------------------------------------------------
// Cyclotomy

/// The class C_i^e of x: log(x) mod e.
std::uint64_t cyclotomic_index(const FiniteField& f, std::uint64_t e, FieldElement x);

/// r^i C^e, listed by increasing discrete log.
std::vector<FieldElement> cyclotomic_class(const FiniteField& f, std::uint64_t e, std::uint64_t i);

/// True iff xs has exactly one element in each of the e classes of order e.
bool is_transversal(const FiniteField& f, std::uint64_t e, std::span<const FieldElement> xs);

/// <x> in the multiplicative group.
std::vector<FieldElement> cyclic_subgroup(const FiniteField& f, FieldElement x);

/// The additive group of f as Z_p^m. Coordinates run from the highest
/// coefficient down, so the index of an element equals its packed value.
AbelianGroup additive_group(const FiniteField& f);

}  // namespace harmony
