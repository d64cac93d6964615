#include <string>

#include "harmony/algebra.hpp"
#include "harmony/errors.hpp"

namespace harmony {

namespace {

void require_order(const FiniteField& f, std::uint64_t e) {
  if (e == 0 || (f.order() - 1) % e != 0) {
    throw PreconditionError("cyclotomic order " + std::to_string(e) + " does not divide q-1 = " +
                            std::to_string(f.order() - 1));
  }
}

}  // namespace

std::uint64_t cyclotomic_index(const FiniteField& f, std::uint64_t e, FieldElement x) {
  require_order(f, e);
  if (x == f.zero()) throw PreconditionError("zero lies in no cyclotomic class");
  return f.log(x) % e;
}

std::vector<FieldElement> cyclotomic_class(const FiniteField& f, std::uint64_t e, std::uint64_t i) {
  require_order(f, e);
  if (i >= e) throw PreconditionError("class index out of range");
  const auto size = (f.order() - 1) / e;
  std::vector<FieldElement> members;
  members.reserve(size);
  for (std::uint64_t t = 0; t < size; ++t) members.push_back(f.exp(i + e * t));
  return members;
}

bool is_transversal(const FiniteField& f, std::uint64_t e, std::span<const FieldElement> xs) {
  require_order(f, e);
  if (xs.size() != e) throw PreconditionError("a transversal of order " + std::to_string(e) + " needs exactly that many elements");
  std::vector<bool> hit(e, false);
  for (auto x : xs) {
    const auto i = cyclotomic_index(f, e, x);
    if (hit[i]) return false;
    hit[i] = true;
  }
  return true;
}

std::vector<FieldElement> cyclic_subgroup(const FiniteField& f, FieldElement x) {
  if (x == f.zero()) throw PreconditionError("zero generates no multiplicative subgroup");
  std::vector<FieldElement> members{f.one()};
  for (auto y = x; y != f.one(); y = f.mul(y, x)) members.push_back(y);
  return members;
}

AbelianGroup additive_group(const FiniteField& f) {
  return AbelianGroup(std::vector<std::uint64_t>(f.degree(), f.characteristic()));
}

}  // namespace harmony
