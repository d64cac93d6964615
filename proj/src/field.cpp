#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "harmony/algebra.hpp"
#include "harmony/errors.hpp"
#include "number_theory.hpp"

namespace harmony {

namespace {

// Full exp/log tables up to this order; baby-step giant-step beyond.
constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 20;

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> result;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      result.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) result.push_back(n);
  return result;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  const auto f = prime_factors(q);
  if (f.size() != 1 || f[0] > 0xffffffffu) return std::nullopt;
  std::uint32_t m = 0;
  while (q > 1) {
    q /= f[0];
    ++m;
  }
  return std::make_pair(static_cast<std::uint32_t>(f[0]), m);
}

struct FiniteField::Tables {
  std::uint32_t p = 0;
  std::uint32_t m = 0;
  std::uint64_t q = 0;
  std::vector<std::uint32_t> modulus;  // monic, low-degree first
  std::vector<std::uint64_t> p_powers;
  std::uint32_t generator = 0;

  bool tabulated = false;
  std::vector<std::uint32_t> exp_table;  // size q-1
  std::vector<std::uint32_t> log_table;  // size q, entry 0 unused

  std::uint64_t giant = 0;  // baby-step count
  std::unordered_map<std::uint32_t, std::uint32_t> baby;
  std::uint32_t giant_factor = 0;  // generator^-giant

  std::vector<std::uint32_t> unpack(std::uint32_t v) const {
    std::vector<std::uint32_t> c(m);
    for (std::uint32_t i = 0; i < m; ++i) {
      c[i] = v % p;
      v /= p;
    }
    return c;
  }

  std::uint32_t pack(const std::vector<std::uint64_t>& c) const {
    std::uint64_t v = 0;
    for (std::uint32_t i = m; i-- > 0;) v = v * p + c[i] % p;
    return static_cast<std::uint32_t>(v);
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (m == 1) return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p);
    if (p == 2) return a ^ b;
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < m; ++i) {
      v += ((a % p) + (b % p)) % p * p_powers[i];
      a /= p;
      b /= p;
    }
    return static_cast<std::uint32_t>(v);
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (m == 1) return static_cast<std::uint32_t>((p - a % p) % p);
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < m; ++i) {
      v += (p - a % p) % p * p_powers[i];
      a /= p;
    }
    return static_cast<std::uint32_t>(v);
  }

  // Product in Z_p[x]/(modulus) without tables.
  std::uint32_t mul_direct(std::uint32_t a, std::uint32_t b) const {
    if (m == 1) return static_cast<std::uint32_t>(detail::mulmod(a, b, p));
    const auto ca = unpack(a);
    const auto cb = unpack(b);
    std::vector<std::uint64_t> r(2 * m - 1, 0);
    for (std::uint32_t i = 0; i < m; ++i) {
      if (!ca[i]) continue;
      for (std::uint32_t j = 0; j < m; ++j) r[i + j] = (r[i + j] + std::uint64_t{ca[i]} * cb[j]) % p;
    }
    for (std::uint32_t k = 2 * m - 1; k-- > m;) {
      const auto c = r[k];
      if (!c) continue;
      for (std::uint32_t i = 0; i < m; ++i) r[k - m + i] = (r[k - m + i] + (p - c) * modulus[i]) % p;
      r[k] = 0;
    }
    r.resize(m);
    return pack(r);
  }

  std::uint32_t pow_direct(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t result = 1;
    while (e) {
      if (e & 1) result = mul_direct(result, a);
      a = mul_direct(a, a);
      e >>= 1;
    }
    return result;
  }

  // Multiplicative order q-1 in Z_p[x]/(modulus); also rules out reducible moduli.
  bool has_full_order(std::uint32_t g) const {
    if (g == 0) return false;
    const auto n = q - 1;
    if (pow_direct(g, n) != 1) return false;
    for (auto r : prime_factors(n)) {
      if (pow_direct(g, n / r) == 1) return false;
    }
    return true;
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    if (tabulated) {
      auto k = std::uint64_t{log_table[a]} + log_table[b];
      if (k >= q - 1) k -= q - 1;
      return exp_table[k];
    }
    return mul_direct(a, b);
  }
};

FiniteField::FiniteField(std::uint32_t p, std::uint32_t m, std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
  if (m == 0) throw PreconditionError("field degree must be >= 1");
  auto t = std::make_shared<Tables>();
  t->p = p;
  t->m = m;
  t->q = 1;
  t->p_powers.push_back(1);
  for (std::uint32_t i = 0; i < m; ++i) {
    if (t->q > 0xffffffffull / p) throw PreconditionError("field order exceeds 2^32");
    t->q *= p;
    t->p_powers.push_back(t->q);
  }
  const auto q = t->q;

  auto root_of = [&](const std::vector<std::uint32_t>& f) -> std::uint32_t {
    // m = 1: root of x + f0; otherwise the class of x.
    return m == 1 ? (p - f[0] % p) % p : p;
  };

  if (modulus) {
    auto f = *modulus;
    if (f.size() != m + 1) throw PreconditionError("modulus must have degree exactly m");
    for (auto& c : f) c %= p;
    if (f[m] == 0) throw PreconditionError("modulus leading coefficient vanishes mod p");
    const auto lead_inv = *detail::inverse_mod(f[m], p);
    for (auto& c : f) c = static_cast<std::uint32_t>(detail::mulmod(c, lead_inv, p));
    t->modulus = f;
    t->generator = root_of(f);
    if (!t->has_full_order(t->generator)) throw PreconditionError("supplied modulus is not primitive");
  } else if (m == 1) {
    std::uint32_t g = 1;
    t->modulus = {0, 1};
    for (;; ++g) {
      t->modulus[0] = (p - g) % p;
      if (t->has_full_order(g)) break;
    }
    t->generator = g;
  } else {
    // Lexicographic in (c_0, c_1, ..., c_{m-1}) with c_0 most significant.
    bool found = false;
    std::vector<std::uint32_t> f(m + 1, 0);
    f[m] = 1;
    for (std::uint64_t code = 0; code < q && !found; ++code) {
      auto rest = code;
      for (std::uint32_t i = m; i-- > 0;) {
        f[i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      if (f[0] == 0) continue;
      t->modulus = f;
      found = t->has_full_order(p);
    }
    if (!found) throw PreconditionError("no primitive polynomial found");
    t->generator = p;
  }

  if (q <= kTableLimit) {
    t->tabulated = true;
    t->exp_table.resize(q - 1);
    t->log_table.assign(q, 0);
    std::uint32_t x = 1;
    for (std::uint64_t k = 0; k + 1 < q; ++k) {
      t->exp_table[k] = x;
      t->log_table[x] = static_cast<std::uint32_t>(k);
      x = t->mul_direct(x, t->generator);
    }
  } else {
    t->giant = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(q - 1))));
    std::uint32_t x = 1;
    for (std::uint64_t j = 0; j < t->giant; ++j) {
      t->baby.emplace(x, static_cast<std::uint32_t>(j));
      x = t->mul_direct(x, t->generator);
    }
    // generator^-giant = generator^(q-1-giant)
    t->giant_factor = t->pow_direct(t->generator, (q - 1) - (t->giant % (q - 1)));
  }
  t_ = std::move(t);
}

FiniteField FiniteField::of_order(std::uint64_t q) {
  const auto pm = prime_power(q);
  if (!pm) throw PreconditionError(std::to_string(q) + " is not a prime power");
  return FiniteField(pm->first, pm->second);
}

std::uint32_t FiniteField::characteristic() const { return t_->p; }
std::uint32_t FiniteField::degree() const { return t_->m; }
std::uint64_t FiniteField::order() const { return t_->q; }
const std::vector<std::uint32_t>& FiniteField::modulus() const { return t_->modulus; }
FieldElement FiniteField::generator() const { return {t_->generator}; }

FieldElement FiniteField::element(std::uint64_t value) const {
  if (value >= t_->q) throw PreconditionError("value " + std::to_string(value) + " outside GF(" + std::to_string(t_->q) + ")");
  return {static_cast<std::uint32_t>(value)};
}

FieldElement FiniteField::from_integer(std::int64_t n) const {
  const auto p = static_cast<std::int64_t>(t_->p);
  return {static_cast<std::uint32_t>(((n % p) + p) % p)};
}

FieldElement FiniteField::from_coefficients(std::span<const std::int64_t> coefficients) const {
  if (coefficients.size() > t_->m) throw PreconditionError("too many coefficients for GF(" + std::to_string(t_->q) + ")");
  const auto p = static_cast<std::int64_t>(t_->p);
  std::vector<std::uint64_t> c(t_->m, 0);
  for (std::size_t i = 0; i < coefficients.size(); ++i) c[i] = static_cast<std::uint64_t>(((coefficients[i] % p) + p) % p);
  return {t_->pack(c)};
}

std::vector<std::uint32_t> FiniteField::coefficients(FieldElement x) const { return t_->unpack(x.value); }

FieldElement FiniteField::add(FieldElement a, FieldElement b) const { return {t_->add(a.value, b.value)}; }
FieldElement FiniteField::neg(FieldElement a) const { return {t_->neg(a.value)}; }
FieldElement FiniteField::sub(FieldElement a, FieldElement b) const { return {t_->add(a.value, t_->neg(b.value))}; }
FieldElement FiniteField::mul(FieldElement a, FieldElement b) const { return {t_->mul(a.value, b.value)}; }

FieldElement FiniteField::inv(FieldElement a) const {
  if (a.value == 0) throw PreconditionError("zero has no inverse");
  return exp((t_->q - 1) - log(a));
}

FieldElement FiniteField::pow(FieldElement a, std::int64_t e) const {
  if (a.value == 0) {
    if (e < 0) throw PreconditionError("zero has no inverse");
    return {e == 0 ? 1u : 0u};
  }
  const auto n = static_cast<std::int64_t>(t_->q - 1);
  const auto l = static_cast<std::int64_t>(log(a));
  const auto k = static_cast<std::int64_t>(detail::mulmod(static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(((e % n) + n) % n),
                                                          static_cast<std::uint64_t>(n)));
  return exp(static_cast<std::uint64_t>(k));
}

FieldElement FiniteField::exp(std::uint64_t k) const {
  k %= t_->q - 1;
  if (t_->tabulated) return {t_->exp_table[k]};
  return {t_->pow_direct(t_->generator, k)};
}

std::uint64_t FiniteField::log(FieldElement x) const {
  if (x.value == 0) throw PreconditionError("discrete log of zero");
  if (x.value >= t_->q) throw PreconditionError("not an element of this field");
  if (t_->tabulated) return t_->log_table[x.value];
  auto y = x.value;
  for (std::uint64_t i = 0; i <= t_->giant; ++i) {
    const auto it = t_->baby.find(y);
    if (it != t_->baby.end()) return (i * t_->giant + it->second) % (t_->q - 1);
    y = t_->mul_direct(y, t_->giant_factor);
  }
  throw VerificationError("discrete log not found; generator is not primitive");
}

std::string FiniteField::describe() const {
  std::ostringstream os;
  os << "GF(" << t_->q << ")";
  if (t_->m > 1) {
    os << " = Z_" << t_->p << "[x]/(";
    bool first = true;
    for (std::uint32_t i = t_->m + 1; i-- > 0;) {
      const auto c = t_->modulus[i];
      if (!c) continue;
      if (!first) os << "+";
      first = false;
      if (i == 0 || c != 1) os << c;
      if (i >= 1) os << "x";
      if (i >= 2) os << "^" << i;
    }
    os << ")";
  }
  return os.str();
}

bool operator==(const FiniteField& a, const FiniteField& b) {
  return a.t_ == b.t_ || (a.t_->p == b.t_->p && a.t_->m == b.t_->m && a.t_->modulus == b.t_->modulus);
}

std::vector<FieldElement> subfield_embedding(const FiniteField& small, const FiniteField& big) {
  if (small.characteristic() != big.characteristic() || big.degree() % small.degree() != 0) {
    throw PreconditionError(small.describe() + " is not a subfield of " + big.describe());
  }
  std::vector<FieldElement> image(small.order());
  if (small.degree() == 1) {
    for (std::uint64_t a = 0; a < small.order(); ++a) image[a] = big.from_integer(static_cast<std::int64_t>(a));
    return image;
  }
  const auto q = small.order();
  const auto cofactor = (big.order() - 1) / (q - 1);
  const auto& f = small.modulus();
  auto evaluate = [&](FieldElement y) {
    FieldElement acc = big.zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = big.add(big.mul(acc, y), big.from_integer(f[i]));
    return acc;
  };
  std::optional<FieldElement> root;
  for (std::uint64_t j = 1; j < q - 1 + 1 && !root; ++j) {
    if (std::gcd(j, q - 1) != 1) continue;
    const auto candidate = big.exp(cofactor * j);
    if (evaluate(candidate) == big.zero()) root = candidate;
  }
  if (!root) throw VerificationError("no root of the subfield modulus in the extension");
  image[0] = big.zero();
  const auto root_log = big.log(*root);
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    image[small.exp(k).value] = big.exp(detail::mulmod(root_log, k, big.order() - 1));
  }
  return image;
}

}  // namespace harmony
