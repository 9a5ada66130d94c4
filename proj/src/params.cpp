// SPDX-License-Identifier: Apache-2.0

#include "cpir/params.hpp"

#include <numeric>

#include "cpir/error.hpp"

namespace cpir {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) fail(ErrorCode::kTooLarge, "scheme parameter overflows 64 bits");
  return static_cast<std::int64_t>(v);
}

i128 pow128(i128 base, std::int64_t exp) {
  i128 r = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > (static_cast<i128>(1) << 100) || r < -(static_cast<i128>(1) << 100)) {
      fail(ErrorCode::kTooLarge, "scheme parameter overflows");
    }
  }
  return r;
}

std::int64_t binom(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  i128 v = 1;
  for (std::int64_t i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return narrow(v);
}

}  // namespace

std::int64_t ipow(std::int64_t base, std::int64_t exp) { return narrow(pow128(base, exp)); }

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::kDivisionByZero, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational capacity(std::int64_t m, std::int64_t n_servers, std::int64_t k_code) {
  if (m < 1 || k_code < 1 || n_servers < k_code) {
    fail(ErrorCode::kBadArgument, "capacity needs M >= 1 and N >= K >= 1");
  }
  const std::int64_t d = std::gcd(n_servers, k_code);
  const std::int64_t n = n_servers / d, k = k_code / d;
  // 1 / sum_{i<M} (k/n)^i = n^{M-1} / sum_{i<M} n^{M-1-i} k^i
  i128 denom = 0;
  for (std::int64_t i = 0; i < m; ++i) denom += pow128(n, m - 1 - i) * pow128(k, i);
  return Rational::make(narrow(pow128(n, m - 1)), narrow(denom));
}

SchemeParams derive_params(std::int64_t m, std::int64_t n_servers, std::int64_t k_code) {
  if (m < 2 || k_code < 1 || n_servers <= k_code) {
    fail(ErrorCode::kUnsupportedRegime,
         "the scheme needs a nontrivial instance: M > 1 and N > K >= 1 (got M=" + std::to_string(m) +
             ", N=" + std::to_string(n_servers) + ", K=" + std::to_string(k_code) + ")");
  }
  SchemeParams p;
  p.m = m;
  p.n_servers = n_servers;
  p.k_code = k_code;
  p.d = std::gcd(n_servers, k_code);
  p.n = n_servers / p.d;
  p.k = k_code / p.d;
  p.ltilde = ipow(p.n, m - 1);
  p.l = narrow(static_cast<i128>(k_code) * p.ltilde);
  p.alpha.resize(m);
  p.beta.resize(m);

  const i128 n = p.n, k = p.k;
  for (std::int64_t j = 1; j <= m; ++j) {
    i128 a, b;
    if (p.wide_regime()) {
      // Seeded by alpha_1 = 0, beta_1 = k^{M-1}.
      a = (pow128(n - k, j - 1) - pow128(-k, j - 1)) / n * pow128(k, m - j + 1);
      b = j == 1 ? pow128(k, m - 1)
                 : (pow128(n - k, j - 2) - pow128(-k, j - 2)) / n * (n - k) * pow128(k, m - j + 1);
    } else {
      // Seeded by alpha_M = 0, beta_M = (n-k)^{M-1}.
      a = (pow128(k, m - j) - pow128(k - n, m - j)) / n * k * pow128(n - k, j - 1);
      b = (pow128(k, m - j + 1) - pow128(k - n, m - j + 1)) / n * pow128(n - k, j - 1);
    }
    p.alpha[j - 1] = narrow(a);
    p.beta[j - 1] = narrow(b);
  }

  p.download = narrow(static_cast<i128>(k_code) * (pow128(n, m) - pow128(k, m)) / (n - k));
  p.omega = narrow(static_cast<i128>(m) * k_code * p.ltilde);
  p.capacity = capacity(m, n_servers, k_code);
  return p;
}

Report verify_constraints(const SchemeParams& p) {
  Report r;
  const std::int64_t m = p.m, nn = p.n_servers, kk = p.k_code, n = p.n, k = p.k;
  auto at = [](const std::vector<std::int64_t>& v, std::int64_t j) { return v.at(j - 1); };
  auto weighted = [&](std::int64_t j) -> i128 {
    return static_cast<i128>(nn - kk) * at(p.alpha, j) + static_cast<i128>(kk) * at(p.beta, j);
  };

  bool shape = p.alpha.size() == static_cast<std::size_t>(m) && p.beta.size() == static_cast<std::size_t>(m) &&
               m >= 2 && nn > kk && kk >= 1;
  r.add("shape", shape, "M >= 2, N > K >= 1, |alpha| = |beta| = M");
  if (!shape) return r;

  bool nonneg = true;
  for (std::int64_t j = 1; j <= m; ++j) nonneg = nonneg && at(p.alpha, j) >= 0 && at(p.beta, j) >= 0;
  r.add("nonnegative", nonneg, "alpha_j, beta_j are nonnegative integers");

  bool c1 = true;
  for (std::int64_t j = 1; j <= m; ++j) c1 = c1 && weighted(j) % kk == 0;
  r.add("C1", c1, "K | (N-K) alpha_j + K beta_j for all j");

  bool c2 = c1;
  for (std::int64_t j = 1; c1 && j < m; ++j) {
    const i128 pool = weighted(j) / kk;
    c2 = c2 && at(p.alpha, j + 1) + at(p.alpha, j) == pool && at(p.beta, j + 1) + at(p.beta, j) == pool;
  }
  r.add("C2", c2, "alpha_{j+1} + alpha_j = beta_{j+1} + beta_j = ((N-K) alpha_j + K beta_j) / K");

  bool g1 = true;
  for (std::int64_t j = 1; j < m; ++j) {
    g1 = g1 && static_cast<i128>(k) * at(p.beta, j + 1) == static_cast<i128>(n - k) * at(p.alpha, j);
    g1 = g1 && static_cast<i128>(k) * at(p.alpha, j + 1) ==
                   static_cast<i128>(k) * at(p.beta, j) + static_cast<i128>(n - 2 * k) * at(p.alpha, j);
  }
  r.add("G1", g1, "beta_{j+1} = (n-k)/k alpha_j and alpha_{j+1} = beta_j + (n-2k)/k alpha_j");

  const bool g1_div = (static_cast<i128>(n - k) * at(p.alpha, m)) % k == 0;
  r.add("G1-divisibility", g1_div, "k | (n-k) alpha_M");

  bool series = true;
  for (std::int64_t j = 1; j < m; ++j) {
    const i128 lhs = static_cast<i128>(n - k) * at(p.alpha, j + 1) + static_cast<i128>(k) * at(p.beta, j + 1);
    const i128 rhs = static_cast<i128>(n - k) * at(p.alpha, j) + static_cast<i128>(k) * at(p.beta, j);
    series = series && k * lhs == (n - k) * rhs;
    series = series && at(p.alpha, j + 1) - at(p.beta, j + 1) == -(at(p.alpha, j) - at(p.beta, j));
  }
  r.add("geometric-series", series, "(n-k) alpha + k beta grows by (n-k)/k; alpha - beta alternates sign");

  bool eqeq = c1;
  for (std::int64_t j = 1; c1 && j <= m; ++j) eqeq = eqeq && weighted(j) / kk == pow128(n - k, j - 1) * pow128(k, m - j);
  r.add("pool-size", eqeq, "((N-K) alpha_j + K beta_j) / K = (n-k)^{j-1} k^{M-j}");

  r.add("subpacketization", p.ltilde == ipow(n, m - 1) && p.l == kk * p.ltilde,
        "Ltilde = n^{M-1}, L = K Ltilde");

  // Columns of the desired record consumed vs columns of any other record.
  i128 desired_cols = 0, other_cols = 0;
  if (c1) {
    for (std::int64_t s = 0; s < m; ++s) desired_cols += static_cast<i128>(binom(m - 1, s)) * (weighted(s + 1) / kk);
    for (std::int64_t s = 1; s < m; ++s) other_cols += static_cast<i128>(binom(m - 2, s - 1)) * (weighted(s) / kk);
  }
  r.add("desired-columns", c1 && desired_cols == pow128(n, m - 1), "desired columns used = n^{M-1}");
  r.add("undesired-columns", c1 && other_cols == static_cast<i128>(k) * pow128(n, m - 2) && other_cols <= desired_cols,
        "each other record uses k n^{M-2} <= n^{M-1} columns");

  i128 download = 0, access = 0;
  for (std::int64_t j = 1; j <= m; ++j) {
    download += static_cast<i128>(binom(m, j)) * weighted(j);
    access += static_cast<i128>(binom(m, j)) * j * weighted(j);
  }
  const i128 d_closed = static_cast<i128>(kk) * (pow128(n, m) - pow128(k, m)) / (n - k);
  r.add("download", download == d_closed && p.download == d_closed, "D = K (n^M - k^M) / (n - k)");
  r.add("access", access == static_cast<i128>(m) * kk * pow128(n, m - 1) && p.omega == access,
        "omega = M K n^{M-1}");
  r.add("capacity", p.download > 0 && Rational::make(p.l, p.download) == p.capacity &&
                        p.capacity == capacity(m, nn, kk),
        "L / D equals the capacity");
  r.add("N|L", p.l % nn == 0, "N divides L");
  r.add("K|D-L", (p.download - p.l) % kk == 0, "K divides D - L");
  return r;
}

}  // namespace cpir
