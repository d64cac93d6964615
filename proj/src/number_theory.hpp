#pragma once

#include <cstdint>
#include <optional>

namespace harmony::detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (e) {
    if (e & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    e >>= 1;
  }
  return result;
}

/// Inverse of a modulo n, if gcd(a, n) = 1.
inline std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t n) {
  if (n == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(a % n), r = static_cast<std::int64_t>(n);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const auto q = old_r / r;
    const auto tr = old_r - q * r;
    old_r = r;
    r = tr;
    const auto ts = old_s - q * s;
    old_s = s;
    s = ts;
  }
  if (old_r != 1) return std::nullopt;
  const auto m = static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(((old_s % m) + m) % m);
}

}  // namespace harmony::detail
