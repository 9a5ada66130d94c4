// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "cpir/error.hpp"
#include "cpir/params.hpp"

using namespace cpir;

namespace {

// Exact fraction over __int128, only what the recurrence oracle needs.
struct Frac {
  __int128 num = 0, den = 1;
  static Frac of(__int128 n, __int128 d = 1) {
    if (d < 0) n = -n, d = -d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a == 0) a = 1;
    return {n / a, d / a};
  }
  Frac operator+(Frac o) const { return of(num * o.den + o.num * den, den * o.den); }
  Frac operator-(Frac o) const { return of(num * o.den - o.num * den, den * o.den); }
  Frac operator*(Frac o) const { return of(num * o.num, den * o.den); }
  Frac operator/(Frac o) const { return of(num * o.den, den * o.num); }
  bool operator==(const Frac&) const = default;
};

// Runs the (G1) recurrence from the published seeds instead of using the
// closed forms.
std::pair<std::vector<Frac>, std::vector<Frac>> recurrence(std::int64_t m, std::int64_t nn, std::int64_t kk) {
  const std::int64_t d = std::gcd(nn, kk), n = nn / d, k = kk / d;
  std::vector<Frac> a(static_cast<std::size_t>(m)), b(a.size());
  const Frac r1 = Frac::of(n - k, k), r2 = Frac::of(n - 2 * k, k);
  if (nn >= 2 * kk) {
    a[0] = Frac::of(0);
    b[0] = Frac::of(ipow(k, m - 1));
    for (std::size_t j = 0; j + 1 < a.size(); ++j) {
      b[j + 1] = r1 * a[j];
      a[j + 1] = b[j] + r2 * a[j];
    }
  } else {
    a.back() = Frac::of(0);
    b.back() = Frac::of(ipow(n - k, m - 1));
    for (std::size_t j = a.size() - 1; j > 0; --j) {
      a[j - 1] = b[j] / r1;
      b[j - 1] = a[j] - r2 * a[j - 1];
    }
  }
  return {a, b};
}

Rational capacity_by_series(std::int64_t m, std::int64_t nn, std::int64_t kk) {
  Frac sum = Frac::of(0), term = Frac::of(1);
  for (std::int64_t i = 0; i < m; ++i) {
    sum = sum + term;
    term = term * Frac::of(kk, nn);
  }
  const Frac inv = Frac::of(1) / sum;
  return {static_cast<std::int64_t>(inv.num), static_cast<std::int64_t>(inv.den)};
}

}  // namespace

TEST_CASE("worked examples") {
  const auto e1 = derive_params(2, 3, 2);
  CHECK(e1.l == 6);
  CHECK(e1.download == 10);
  CHECK(e1.omega == 12);
  CHECK(e1.capacity == Rational{3, 5});
  CHECK(e1.alpha == std::vector<std::int64_t>{2, 0});
  CHECK(e1.beta == std::vector<std::int64_t>{1, 1});

  const auto e2 = derive_params(3, 3, 2);
  CHECK(e2.l == 18);
  CHECK(e2.download == 38);
  CHECK(e2.omega == 54);
  CHECK(e2.capacity == Rational{9, 19});
  CHECK(e2.alpha == std::vector<std::int64_t>{2, 2, 0});
  CHECK(e2.beta == std::vector<std::int64_t>{3, 1, 1});

  const auto e3 = derive_params(2, 5, 2);
  CHECK(e3.l == 10);
  CHECK(e3.download == 14);
  CHECK(e3.omega == 20);
  CHECK(e3.capacity == Rational{5, 7});
  CHECK(e3.alpha == std::vector<std::int64_t>{0, 2});
  CHECK(e3.beta == std::vector<std::int64_t>{2, 0});
}

TEST_CASE("unsupported regimes") {
  for (auto [m, n, k] : {std::tuple{1, 3, 2}, {2, 3, 3}, {2, 3, 4}, {2, 3, 0}, {0, 3, 1}}) {
    try {
      derive_params(m, n, k);
      FAIL("expected UnsupportedRegime");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnsupportedRegime);
    }
  }
}

TEST_CASE("verify_constraints") {
  const auto p = derive_params(2, 3, 2);
  const auto r = verify_constraints(p);
  CHECK(r.all_pass());
  for (const char* name : {"C1", "C2", "G1", "G1-divisibility", "pool-size", "nonnegative"}) CHECK(r.passed(name));

  auto broken = p;
  broken.beta[0] -= 1;
  CHECK_FALSE(verify_constraints(broken).passed("G1"));

  const auto q = derive_params(3, 4, 2);
  CHECK(q.n == 2);
  CHECK(q.k == 1);
  CHECK(verify_constraints(q).all_pass());

  auto negative = q;
  negative.alpha[1] = -negative.alpha[1];
  CHECK_FALSE(verify_constraints(negative).passed("nonnegative"));
}

TEST_CASE("capacity") {
  CHECK(capacity(2, 3, 2) == Rational{3, 5});
  CHECK(capacity(3, 3, 2) == Rational{9, 19});
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) CHECK(capacity(1, n, k) == Rational{1, 1});
  CHECK(capacity(4, 4, 4) == Rational{1, 4});
}

TEST_CASE("sweep: closed forms match the recurrence and every invariant holds") {
  for (std::int64_t m = 2; m <= 5; ++m)
    for (std::int64_t nn = 2; nn <= 8; ++nn)
      for (std::int64_t kk = 1; kk < nn; ++kk) {
        CAPTURE(m);
        CAPTURE(nn);
        CAPTURE(kk);
        const auto p = derive_params(m, nn, kk);
        const auto [a, b] = recurrence(m, nn, kk);
        for (std::size_t j = 0; j < a.size(); ++j) {
          REQUIRE(a[j] == Frac::of(p.alpha[j]));
          REQUIRE(b[j] == Frac::of(p.beta[j]));
        }
        const auto r = verify_constraints(p);
        for (const auto& c : r.checks) {
          CAPTURE(c.name);
          CHECK(c.pass);
        }
        CHECK(p.d == std::gcd(nn, kk));
        CHECK(p.l == kk * ipow(p.n, m - 1));
        CHECK(p.omega == m * kk * ipow(p.n, m - 1));
        CHECK(p.download * (p.n - p.k) == kk * (ipow(p.n, m) - ipow(p.k, m)));
        CHECK(Rational::make(p.l, p.download) == capacity(m, nn, kk));
        CHECK(capacity(m, nn, kk) == capacity_by_series(m, nn, kk));
        CHECK(p.l % nn == 0);
        CHECK((p.download - p.l) % kk == 0);

        // gcd(n^{M-1}, sum n^{M-1-i} k^i) = 1
        std::int64_t series = 0;
        for (std::int64_t i = 0; i < m; ++i) series += ipow(p.n, m - 1 - i) * ipow(p.k, i);
        CHECK(std::gcd(ipow(p.n, m - 1), series) == 1);
        CHECK(p.k * ipow(p.n, m - 2) <= ipow(p.n, m - 1));
      }
}
