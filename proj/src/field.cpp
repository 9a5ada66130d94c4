// SPDX-License-Identifier: Apache-2.0

#include "cpir/field.hpp"

#include <string>

namespace cpir {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t smallest_prime_gt(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) {
    if (c == UINT64_MAX) fail(ErrorCode::kBadArgument, "no 64-bit prime above " + std::to_string(n));
    ++c;
  }
  return c;
}

Field::Field(std::uint64_t modulus) : p_(modulus) {
  if (!is_prime(modulus)) {
    fail(ErrorCode::kBadArgument, "field modulus " + std::to_string(modulus) + " is not prime");
  }
}

Elem Field::pow(Elem base, std::uint64_t exp) const noexcept { return powmod(base, exp, p_); }

Elem Field::inv(Elem a) const {
  if (a % p_ == 0) fail(ErrorCode::kDivisionByZero, "inverse of zero");
  return powmod(a, p_ - 2, p_);
}

}  // namespace cpir
