#pragma once

// Liftings of harmonious SDFs from G to G x F_q: verification of the good and
// perfect conditions, the Q(e,n) bound, the cyclotomic construction with its
// position/triple plan, expansion into a relative difference family, field
// extension, and composition through difference matrices.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "harmony/families.hpp"

namespace harmony {

struct LiftedPoint {
  Index g = 0;
  FieldElement c;

  friend auto operator<=>(const LiftedPoint&, const LiftedPoint&) = default;
};

/// One lifted block per block of `base` (repeats expanded, listing order);
/// the i-th point of a lifted block sits over the i-th position of the base block.
struct Lifting {
  BlockFamily base;
  FiniteField field;
  std::vector<std::vector<LiftedPoint>> blocks;
  std::vector<FieldElement> companion;
};

struct LiftingCertificate {
  bool well_formed = false;
  std::string defect;                          // first problem found, empty if none
  std::uint64_t lambda = 0;                    // index of the base SDF
  std::vector<std::vector<FieldElement>> deltas;  // Delta_g for every g in G
  std::vector<FieldElement> projection;        // pi(L)
  bool good = false;
  bool perfect = false;
};

/// Exhaustive differencing and product enumeration; never throws on a bad lifting.
LiftingCertificate verify_lifting(const Lifting& l);

// ---------------------------------------------------------------------------
// Q(e, n) = (U + sqrt(U^2 + 4 n e^(n-1)))^2 / 4

struct QBound {
  using Int = boost::multiprecision::cpp_int;
  using Real = boost::multiprecision::cpp_bin_float_100;

  std::uint64_t e = 0;
  std::uint64_t n = 0;
  Int u;          // sum_{h=1}^{n} C(n,h) (e-1)^h (h-1)
  Int d;          // u^2 + 4 n e^(n-1)
  Int threshold;  // ceil(Q), exact

  /// q > Q, decided in integers.
  bool exceeded_by(const Int& q) const;
  Real value() const;
};

QBound q_bound(std::uint64_t e, std::uint64_t n);

// ---------------------------------------------------------------------------
// Cyclotomic construction

/// Bookkeeping for the cyclotomic lifting: phi numbers the positions (h, i),
/// psi[h][i][j] assigns a class to every ordered pair of distinct positions.
struct LiftingPlan {
  std::uint64_t lambda = 0;
  std::vector<std::vector<Index>> elements;           // b_{h,i}
  std::vector<std::vector<std::uint64_t>> phi;        // phi[h][i]
  std::vector<std::vector<std::vector<std::int64_t>>> psi;  // psi[h][i][j], -1 on the diagonal
  GroupSplit split;
  std::vector<std::uint64_t> half;                    // Z'_lambda = {0, ..., lambda/2 - 1}

  struct Triple {
    std::size_t h, i, j;
    friend auto operator<=>(const Triple&, const Triple&) = default;
  };
  /// T_g for every g, triples in (h, i, j) order.
  std::vector<std::vector<Triple>> triples;
};

/// Requires a harmonious SDF (its index is even).
LiftingPlan make_lifting_plan(const BlockFamily& sdf);

enum class Strategy { lex, random };

struct GenericLiftingOptions {
  Strategy strategy = Strategy::lex;
  std::uint64_t seed = 0;
  bool greedy = false;           // first candidate only, no backtracking
  std::uint64_t max_nodes = 0;   // 0 = unlimited
};

struct GenericLiftingResult {
  std::optional<Lifting> lifting;
  std::uint64_t nodes = 0;
  bool node_limit_hit = false;
  std::optional<std::size_t> failed_block;
};

/// Picks c_{h,1} in C_{phi(h,1)} and every later c_{h,i} in the set X_{h,i}
/// of elements of C_{phi(h,i)} whose differences with the earlier c_{h,j}
/// lie in C_{psi(h,i,j)}, all classes of order lambda. Blocks are independent,
/// so each is searched on its own. The companion is C^lambda.
/// Needs q = lambda + 1 (mod 2 lambda).
GenericLiftingResult generic_perfect_lifting(const BlockFamily& sdf, const FiniteField& f,
                                             const GenericLiftingOptions& options = {});

/// Expands a good lifting with every s in the companion (s outermost) into a
/// family over G x F_q, where (g, c) has index g * q + c. Throws unless good.
BlockFamily expand(const Lifting& l);

/// The group G x F_q hosting expanded blocks, and its subgroup G x {0}.
AbelianGroup lifted_group(const Lifting& l);

/// Lifting over G x F_{q^k}: each block L becomes L_t for t in
/// {G^j : 0 <= j < (q^k-1)/(q-1)} (G the big field's generator), base repeats
/// grow by that factor, and the companion is embedded unchanged.
Lifting extend_field(const Lifting& l, std::uint32_t k,
                     const std::optional<std::vector<std::uint32_t>>& big_modulus = std::nullopt);

// ---------------------------------------------------------------------------
// Difference matrices and composition

struct DifferenceMatrix {
  AbelianGroup group;
  std::vector<std::vector<Index>> rows;

  bool is_difference_matrix() const;
  bool is_homogeneous() const;
};

/// Rows r^0 x, r^1 x, ..., r^(k-1) x with x running over the field by value.
DifferenceMatrix field_dm(const FiniteField& f, std::uint64_t k);

/// From resolvable DFs over G x X and G x Y (relative to G x {0}) and a
/// homogeneous DM over Y, the family {B o M^c} u {B-bar} over G x X x Y.
/// Row r of M goes with the r-th element of each block in index order.
BlockFamily compose(const AbelianGroup& g, const BlockFamily& fx, const BlockFamily& fy, const DifferenceMatrix& m);

}  // namespace harmony
