// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpir/report.hpp"

namespace cpir {

/// Exact rational in lowest terms with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Integer parameters of the optimal scheme for M records on N servers
/// under an [N,K] MDS code.
///
/// alpha[j-1] / beta[j-1] are the number of sums of each j-element type
/// handed to each of the first N-K servers / each of the last K servers.
struct SchemeParams {
  std::int64_t m = 0, n_servers = 0, k_code = 0;
  std::int64_t d = 0;  // gcd(N, K)
  std::int64_t n = 0;  // N / d
  std::int64_t k = 0;  // K / d
  std::int64_t ltilde = 0;
  std::int64_t l = 0;
  std::vector<std::int64_t> alpha, beta;
  std::int64_t download = 0;  // D
  std::int64_t omega = 0;     // access number
  Rational capacity;

  /// Sums per server of each type of size j (1-based j).
  std::int64_t gamma(std::int64_t server0, std::int64_t j) const {
    return server0 < n_servers - k_code ? alpha.at(j - 1) : beta.at(j - 1);
  }
  /// Number of distinct sums of one type of size j over all servers,
  /// ((N-K) alpha_j + K beta_j) / K.
  std::int64_t pool(std::int64_t j) const {
    return ((n_servers - k_code) * alpha.at(j - 1) + k_code * beta.at(j - 1)) / k_code;
  }
  bool wide_regime() const { return n_servers >= 2 * k_code; }
};

/// Throws kUnsupportedRegime unless M >= 2 and N > K >= 1.
SchemeParams derive_params(std::int64_t m, std::int64_t n_servers, std::int64_t k_code);

/// Checks the linear constraints alpha/beta must satisfy for the
/// distribution functions to exist, plus the derived identities.
Report verify_constraints(const SchemeParams& p);

/// (1 + K/N + ... + (K/N)^{M-1})^{-1}, for M >= 1 and N >= K >= 1.
Rational capacity(std::int64_t m, std::int64_t n_servers, std::int64_t k_code);

std::int64_t ipow(std::int64_t base, std::int64_t exp);

}  // namespace cpir
