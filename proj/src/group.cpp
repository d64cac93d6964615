#include <algorithm>
#include <numeric>
#include <sstream>

#include "harmony/algebra.hpp"
#include "harmony/errors.hpp"
#include "number_theory.hpp"

namespace harmony {

AbelianGroup::AbelianGroup(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
  strides_.assign(factors_.size(), 1);
  order_ = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    if (factors_[i] == 0) throw PreconditionError("cyclic factor must be >= 1");
    strides_[i] = order_;
    if (order_ > (std::uint64_t{1} << 62) / factors_[i]) throw PreconditionError("group order too large");
    order_ *= factors_[i];
  }
}

Index AbelianGroup::index_of(const GroupElement& g) const {
  if (g.coords.size() != factors_.size()) {
    throw PreconditionError("element has " + std::to_string(g.coords.size()) + " coordinates, group has rank " +
                            std::to_string(factors_.size()));
  }
  Index result = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto n = static_cast<std::int64_t>(factors_[i]);
    const auto r = ((g.coords[i] % n) + n) % n;
    result += static_cast<Index>(r) * strides_[i];
  }
  return result;
}

GroupElement AbelianGroup::element(Index i) const {
  GroupElement g;
  g.coords.resize(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    g.coords[k] = static_cast<std::int64_t>(i % factors_[k]);
    i /= factors_[k];
  }
  return g;
}

std::vector<std::uint64_t> AbelianGroup::digits(Index i) const {
  std::vector<std::uint64_t> d(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    d[k] = i % factors_[k];
    i /= factors_[k];
  }
  return d;
}

Index AbelianGroup::add(Index a, Index b) const {
  Index result = 0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto n = factors_[k];
    result += ((a % n) + (b % n)) % n * strides_[k];
    a /= n;
    b /= n;
  }
  return result;
}

Index AbelianGroup::neg(Index a) const {
  Index result = 0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto n = factors_[k];
    result += (n - a % n) % n * strides_[k];
    a /= n;
  }
  return result;
}

Index AbelianGroup::sub(Index a, Index b) const {
  Index result = 0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto n = factors_[k];
    result += ((a % n) + n - (b % n)) % n * strides_[k];
    a /= n;
    b /= n;
  }
  return result;
}

Index AbelianGroup::times(Index a, std::uint64_t m) const {
  Index result = 0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto n = factors_[k];
    result += detail::mulmod(a % n, m % n, n) * strides_[k];
    a /= n;
  }
  return result;
}

std::uint64_t AbelianGroup::element_order(Index a) const {
  std::uint64_t result = 1;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto n = factors_[k];
    const auto d = a % n;
    result = std::lcm(result, n / std::gcd(d, n));
    a /= n;
  }
  return result;
}

AbelianGroup AbelianGroup::product(const AbelianGroup& other) const {
  auto f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return AbelianGroup(std::move(f));
}

std::string AbelianGroup::describe() const {
  if (factors_.empty()) return "Z1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? " x Z" : "Z") << factors_[i];
  return os.str();
}

std::vector<Index> generated_subgroup(const AbelianGroup& g, std::span<const Index> generators) {
  std::vector<bool> seen(g.order(), false);
  std::vector<Index> members{0};
  seen[0] = true;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (auto gen : generators) {
      if (gen >= g.order()) throw PreconditionError("generator outside the group");
      const auto next = g.add(members[head], gen);
      if (!seen[next]) {
        seen[next] = true;
        members.push_back(next);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<std::vector<Index>> cosets(const AbelianGroup& g, std::span<const Index> subgroup) {
  std::vector<bool> seen(g.order(), false);
  std::vector<std::vector<Index>> result;
  for (Index x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    std::vector<Index> coset;
    coset.reserve(subgroup.size());
    for (auto h : subgroup) {
      const auto y = g.add(h, x);
      if (seen[y]) throw PreconditionError("coset enumeration: input is not a subgroup");
      seen[y] = true;
      coset.push_back(y);
    }
    std::sort(coset.begin(), coset.end());
    result.push_back(std::move(coset));
  }
  return result;
}

GroupSplit group_split(const AbelianGroup& g) {
  GroupSplit split;
  std::vector<bool> taken(g.order(), false);
  for (Index x = 0; x < g.order(); ++x) {
    if (taken[x]) continue;
    const auto minus = g.neg(x);
    taken[x] = taken[minus] = true;
    if (minus == x) {
      split.involutions.push_back(x);
    } else {
      split.plus.push_back(x);
      split.minus.push_back(minus);
    }
  }
  return split;
}

CrtMap::CrtMap(AbelianGroup g, std::vector<std::int64_t> coefficients)
    : group_(std::move(g)), coefficients_(std::move(coefficients)), modulus_(group_.order()) {
  const auto& f = group_.factors();
  if (coefficients_.size() != f.size()) throw PreconditionError("one CRT coefficient per factor is required");
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (std::gcd(f[i], f[j]) != 1) throw PreconditionError("CRT flattening needs pairwise coprime factors");
    }
  }
  const auto n = static_cast<std::int64_t>(modulus_);
  inverse_units_.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto a = ((coefficients_[i] % n) + n) % n;
    const auto cofactor = static_cast<std::int64_t>(modulus_ / f[i]);
    if (a % cofactor != 0) {
      throw PreconditionError("CRT coefficient " + std::to_string(coefficients_[i]) + " is not a multiple of " +
                              std::to_string(cofactor));
    }
    const auto unit = static_cast<std::uint64_t>(a) % f[i];
    const auto inverse = detail::inverse_mod(unit, f[i]);
    if (!inverse) throw PreconditionError("CRT coefficients do not define a bijection");
    inverse_units_[i] = *inverse;
  }
}

CrtMap CrtMap::canonical(const AbelianGroup& g) {
  const auto n = g.order();
  std::vector<std::int64_t> coefficients;
  for (auto f : g.factors()) {
    const auto cofactor = n / f;
    const auto inverse = detail::inverse_mod(cofactor % f, f);
    if (!inverse) throw PreconditionError("CRT flattening needs pairwise coprime factors");
    coefficients.push_back(static_cast<std::int64_t>(detail::mulmod(cofactor, *inverse, n)));
  }
  return CrtMap(g, std::move(coefficients));
}

CrtMap CrtMap::with_coefficients(const AbelianGroup& g, std::vector<std::int64_t> coefficients) {
  return CrtMap(g, std::move(coefficients));
}

std::uint64_t CrtMap::to_cyclic(Index i) const {
  const auto d = group_.digits(i);
  const auto n = static_cast<std::int64_t>(modulus_);
  std::uint64_t y = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto a = static_cast<std::uint64_t>(((coefficients_[k] % n) + n) % n);
    y = (y + detail::mulmod(a, d[k], modulus_)) % modulus_;
  }
  return y;
}

Index CrtMap::from_cyclic(std::uint64_t y) const {
  y %= modulus_;
  GroupElement g;
  const auto& f = group_.factors();
  for (std::size_t k = 0; k < f.size(); ++k) {
    g.coords.push_back(static_cast<std::int64_t>(detail::mulmod(y % f[k], inverse_units_[k], f[k])));
  }
  return group_.index_of(g);
}

}  // namespace harmony
