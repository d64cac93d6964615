#pragma once

// Searches for the small tuples that fix a lifting of a fixture SDF: every
// list of linear forms in the tuple must hit each cyclotomic class of order e
// exactly once.
//
//   quad   (a,b,c,d)        over z2_pairs,  e = 4, q = 1 mod 8, q > 9
//   quad17 (a,b,c,d)        over z2_pairs,  e = 4, the alternative form used for q = 17
//   quint  (a,b,c,d,e)      over doubled(Z3), e = 6, q = 19 mod 36
//   sept   (a,b,c,d,e,f,g)  over order4_a(Z2 x Z2), e = 7, q = 1 mod 14

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harmony/lifting.hpp"

namespace harmony {

/// sum coefficient * x_var + constant
struct LinearForm {
  std::vector<std::pair<std::size_t, FieldElement>> terms;
  FieldElement constant;
};

struct TupleShape {
  std::string name;
  FiniteField field;
  std::uint64_t e = 0;
  std::vector<std::string> variables;
  std::vector<std::string> list_names;
  std::vector<std::vector<LinearForm>> lists;
  /// Scaling a good tuple by any unit gives a good tuple.
  bool homogeneous = false;
  /// Primitive cube root of unity r^((q-1)/3), quint only.
  std::optional<FieldElement> epsilon;
};

std::vector<std::string> shape_names();

/// Throws PreconditionError when q is outside the shape's congruence class.
TupleShape make_shape(const std::string& name, const FiniteField& f);

FieldElement evaluate(const TupleShape& s, const LinearForm& form, const std::vector<FieldElement>& tuple);

/// Every list is a transversal of the classes of order e (and no form is 0).
bool tuple_is_good(const TupleShape& s, const std::vector<FieldElement>& tuple);

struct SearchOptions {
  Strategy strategy = Strategy::lex;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// Fix the first variable to 1 for homogeneous shapes.
  bool normalize = true;
  /// Count every good tuple instead of stopping at the first.
  bool count_all = false;
};

struct SearchResult {
  std::optional<std::vector<FieldElement>> witness;
  std::uint64_t nodes = 0;
  /// Number of good tuples (count_all), including the scalar multiples
  /// removed by normalization.
  std::uint64_t count = 0;
};

/// Depth-first search over the variables in order, values by increasing
/// discrete log (lex) or in a seeded random order. The value of the first
/// free variable splits the space into shards handed to `jobs` workers; the
/// witness from the smallest successful shard wins, so the result does not
/// depend on `jobs`.
SearchResult search_tuple(const TupleShape& s, const SearchOptions& options = {});

/// The companion used with the shape: a transversal of {1,-1} in C^e (quad,
/// quad17, sept) or of <epsilon> in C^6 (quint), smallest value per coset.
std::vector<FieldElement> shape_companion(const TupleShape& s);

/// The lifting of the shape's fixture SDF determined by the tuple.
Lifting lifting_from_tuple(const TupleShape& s, const std::vector<FieldElement>& tuple);

/// Base SDF of the shape.
BlockFamily shape_base(const std::string& name);

}  // namespace harmony
