// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cpir/error.hpp"
#include "cpir/mds.hpp"
#include "oracles.hpp"

using namespace cpir;

TEST_CASE("vandermonde generator") {
  const Field f7(7);
  CHECK(Generator::vandermonde(3, 1, f7).matrix() == Matrix(f7, 1, 3, {1, 1, 1}));
  CHECK(Generator::vandermonde(3, 2, f7).matrix() == Matrix(f7, 2, 3, {1, 1, 1, 1, 2, 3}));

  const Field f257(257);
  const auto g = Generator::vandermonde(6, 3, f257);
  CHECK(oracle::mds_brute(g.matrix()));

  try {
    Generator::vandermonde(7, 2, f7);
    FAIL("expected FieldTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFieldTooSmall);
  }
}

TEST_CASE("vandermonde is MDS for every N <= 12") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const Field f(smallest_prime_gt(std::max<std::size_t>(n, 256)));
    for (std::size_t k = 1; k <= n; ++k) CHECK(check_mds(Generator::vandermonde(n, k, f).matrix()));
  }
}

TEST_CASE("check_mds") {
  const Field f257(257);
  CHECK(check_mds(Generator::vandermonde(5, 2, f257).matrix()));
  CHECK_FALSE(check_mds(Matrix(f257, 2, 3, {1, 1, 5, 2, 2, 7})));
  CHECK_THROWS_AS(Generator(Matrix(f257, 2, 3, {1, 1, 5, 2, 2, 7})), Error);

  const Field f7(7);
  Rng rng(11);
  int agree = 0, mds = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng.below(3), n = k + rng.below(4);
    const Matrix g = oracle::random_matrix(f7, k, n, rng);
    const bool want = oracle::mds_brute(g);
    agree += check_mds(g) == want;
    mds += want;
  }
  CHECK(agree == 300);
  CHECK(mds > 0);
  CHECK(mds < 300);
}

TEST_CASE("encode") {
  const Field f(257);
  const auto g1 = Generator::vandermonde(3, 1, f);
  const Database db1 = random_database(f, 2, 1, 4, 9);
  for (const auto& share : encode(db1, g1))
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < 4; ++t) CHECK(share.rows(j, t) == db1.records[j](0, t));

  const auto g = Generator::vandermonde(3, 2, f);
  Database zero{{Matrix(f, 2, 3), Matrix(f, 2, 3)}};
  for (const auto& share : encode(zero, g)) CHECK(share.rows == Matrix(f, 2, 3));

  const Database db = random_database(f, 2, 2, 3, 10);
  const auto shares = encode(db, g);
  for (const std::vector<std::size_t> servers : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 2}}) {
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t c = 0; c < 3; ++c) {
        const std::vector<Elem> proj{shares[servers[0]].rows(j, c), shares[servers[1]].rows(j, c)};
        const auto v = erasure_decode(g, servers, proj);
        CHECK(v[0] == db.records[j](0, c));
        CHECK(v[1] == db.records[j](1, c));
      }
  }
}

TEST_CASE("erasure_decode") {
  const Field f7(7);
  const auto g7 = Generator::vandermonde(3, 2, f7);
  const std::vector<std::size_t> s01{0, 1};
  const std::vector<Elem> proj{3, 5};
  CHECK(erasure_decode(g7, s01, proj) == std::vector<Elem>{1, 2});

  const Field f(257);
  const auto gk1 = Generator::vandermonde(4, 1, f);
  const std::vector<std::size_t> s2{2};
  const std::vector<Elem> p1{42};
  CHECK(erasure_decode(gk1, s2, p1) == std::vector<Elem>{42});

  const auto g = Generator::vandermonde(5, 2, f);
  const std::vector<Elem> v{123, 45};
  const std::vector<std::size_t> s13{1, 3};
  std::vector<Elem> fwd;
  for (auto i : s13) fwd.push_back(f.add(f.mul(g.at(0, i), v[0]), f.mul(g.at(1, i), v[1])));
  CHECK(erasure_decode(g, s13, fwd) == v);

  const std::vector<std::size_t> dup{1, 1};
  try {
    erasure_decode(g, dup, fwd);
    FAIL("expected BadIndexSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBadIndexSet);
  }
}

TEST_CASE("every K-subset decodes every column") {
  const Field f(257);
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t k = 1; k < n; ++k) {
      const auto g = Generator::vandermonde(n, k, f);
      const Database db = random_database(f, 2, k, 3, n * 10 + k);
      const auto shares = encode(db, g);
      std::vector<bool> pick(n, false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        std::vector<std::size_t> servers;
        for (std::size_t i = 0; i < n; ++i)
          if (pick[i]) servers.push_back(i);
        for (std::size_t j = 0; j < 2; ++j)
          for (std::size_t c = 0; c < 3; ++c) {
            std::vector<Elem> proj;
            for (auto i : servers) proj.push_back(shares[i].rows(j, c));
            const auto v = erasure_decode(g, servers, proj);
            for (std::size_t a = 0; a < k; ++a) REQUIRE(v[a] == db.records[j](a, c));
          }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
}
