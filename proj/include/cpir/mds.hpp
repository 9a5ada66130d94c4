// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpir/matrix.hpp"

namespace cpir {

/// K x N generator of an [N,K] MDS code; column i is the coding vector g_i of
/// server i (servers are 0-based here).
class Generator {
 public:
  /// Wraps an arbitrary K x N matrix. Throws kBadArgument if it is not MDS.
  explicit Generator(Matrix g);

  /// Vandermonde generator with column i = (1, x, ..., x^{K-1}), x = i + 1.
  /// Throws kFieldTooSmall when N >= p.
  static Generator vandermonde(std::size_t n, std::size_t k, const Field& field);

  const Matrix& matrix() const noexcept { return g_; }
  const Field& field() const noexcept { return g_.field(); }
  std::size_t k() const noexcept { return g_.rows(); }
  std::size_t n() const noexcept { return g_.cols(); }
  Elem at(std::size_t row, std::size_t server) const { return g_(row, server); }

 private:
  Generator(Matrix g, bool /*trusted*/) : g_(std::move(g)) {}
  Matrix g_;
};

/// True iff every K-subset of the columns is invertible.
bool check_mds(const Matrix& g);

/// M records, each a K x Ltilde matrix.
struct Database {
  std::vector<Matrix> records;

  std::size_t record_count() const noexcept { return records.size(); }
  std::size_t k() const { return records.front().rows(); }
  std::size_t ltilde() const { return records.front().cols(); }
};

/// Uniformly random database drawn from a seeded generator.
Database random_database(const Field& field, std::size_t m, std::size_t k, std::size_t ltilde,
                         std::uint64_t seed);

/// What server `server` stores: row j is g_server^T * W_j.
struct ShareTable {
  std::size_t server = 0;
  Matrix rows;  // M x Ltilde
};

std::vector<ShareTable> encode(const Database& db, const Generator& g);

/// Solves g_i^T v = proj_i for i in `servers` (|servers| = K, distinct).
std::vector<Elem> erasure_decode(const Generator& g, std::span<const std::size_t> servers,
                                 std::span<const Elem> proj);

}  // namespace cpir
