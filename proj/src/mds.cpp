// SPDX-License-Identifier: Apache-2.0

#include "cpir/mds.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cpir/rng.hpp"

namespace cpir {

Generator::Generator(Matrix g) : g_(std::move(g)) {
  if (g_.rows() == 0 || g_.rows() > g_.cols()) {
    fail(ErrorCode::kBadArgument, "generator must be K x N with 1 <= K <= N");
  }
  if (!check_mds(g_)) fail(ErrorCode::kBadArgument, "generator is not MDS");
}

Generator Generator::vandermonde(std::size_t n, std::size_t k, const Field& field) {
  if (k < 1 || k > n) fail(ErrorCode::kBadArgument, "need 1 <= K <= N");
  if (n >= field.modulus()) {
    fail(ErrorCode::kFieldTooSmall, "N=" + std::to_string(n) + " needs a field larger than p=" +
                                        std::to_string(field.modulus()));
  }
  Matrix g(field, k, n);
  for (std::size_t i = 0; i < n; ++i) {
    Elem x = 1;
    for (std::size_t r = 0; r < k; ++r) {
      g(r, i) = x;
      x = field.mul(x, static_cast<Elem>(i + 1));
    }
  }
  return Generator(std::move(g), true);
}

bool check_mds(const Matrix& g) {
  const std::size_t k = g.rows(), n = g.cols();
  if (k == 0 || k > n) return false;
  std::vector<bool> pick(n, false);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(k), pick.end(), true);
  std::vector<std::size_t> cols;
  do {
    cols.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) cols.push_back(i);
    if (rank(g.select_columns(cols)) != k) return false;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return true;
}

Database random_database(const Field& field, std::size_t m, std::size_t k, std::size_t ltilde,
                         std::uint64_t seed) {
  Rng rng(seed);
  Database db;
  db.records.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Elem> data(k * ltilde);
    for (auto& e : data) e = rng.below(field.modulus());
    db.records.emplace_back(field, k, ltilde, std::move(data));
  }
  return db;
}

std::vector<ShareTable> encode(const Database& db, const Generator& g) {
  if (db.records.empty()) fail(ErrorCode::kDimError, "empty database");
  const std::size_t k = db.k(), lt = db.ltilde();
  if (k != g.k()) fail(ErrorCode::kDimError, "record height differs from generator K");
  const Field& f = g.field();
  for (const auto& w : db.records) {
    if (w.rows() != k || w.cols() != lt) fail(ErrorCode::kDimError, "records differ in shape");
    if (!(w.field() == f)) fail(ErrorCode::kDimError, "record field differs from generator field");
  }
  std::vector<ShareTable> shares;
  shares.reserve(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    const Matrix gi_t = g.matrix().column(i).transpose();
    Matrix rows(f, db.record_count(), lt);
    for (std::size_t j = 0; j < db.record_count(); ++j) {
      const Matrix c = mat_mul(gi_t, db.records[j]);
      for (std::size_t t = 0; t < lt; ++t) rows(j, t) = c(0, t);
    }
    shares.push_back({i, std::move(rows)});
  }
  return shares;
}

std::vector<Elem> erasure_decode(const Generator& g, std::span<const std::size_t> servers,
                                 std::span<const Elem> proj) {
  const std::size_t k = g.k();
  if (servers.size() != k || proj.size() != k) {
    fail(ErrorCode::kBadIndexSet, "erasure_decode needs exactly K=" + std::to_string(k) + " servers");
  }
  std::vector<std::size_t> sorted(servers.begin(), servers.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::kBadIndexSet, "repeated server index");
  }
  if (sorted.back() >= g.n()) fail(ErrorCode::kBadIndexSet, "server index out of range");
  const Field& f = g.field();
  Matrix a(f, k, k);
  Matrix b(f, k, 1);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) a(r, c) = g.at(c, servers[r]);
    b(r, 0) = f.reduce(proj[r]);
  }
  const Matrix x = solve_square(a, b);
  std::vector<Elem> v(k);
  for (std::size_t r = 0; r < k; ++r) v[r] = x(r, 0);
  return v;
}

}  // namespace cpir
