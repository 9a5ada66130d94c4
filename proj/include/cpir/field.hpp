// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "cpir/error.hpp"

namespace cpir {

using Elem = std::uint64_t;

bool is_prime(std::uint64_t n);

/// Least prime strictly greater than `n`.
std::uint64_t smallest_prime_gt(std::uint64_t n);

/// Prime field F_p. Elements are plain integers in [0, p); every operation
/// returns a reduced value.
class Field {
 public:
  /// Throws kBadArgument if `modulus` is not prime.
  explicit Field(std::uint64_t modulus);

  std::uint64_t modulus() const noexcept { return p_; }

  Elem reduce(std::uint64_t x) const noexcept { return x % p_; }
  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;
    return (s >= p_ || s < a) ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_);
  }
  Elem pow(Elem base, std::uint64_t exp) const noexcept;
  /// Throws kDivisionByZero for a == 0.
  Elem inv(Elem a) const;

  bool contains(Elem a) const noexcept { return a < p_; }

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

}  // namespace cpir
