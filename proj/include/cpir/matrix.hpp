// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cpir/field.hpp"

namespace cpir {

/// Dense row-major matrix over a prime field.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols);
  /// `entries` is row-major and must hold rows*cols values; each is reduced mod p.
  Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);

  static Matrix identity(Field field, std::size_t n);
  static Matrix from_rows(Field field, const std::vector<std::vector<Elem>>& rows);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> entries() const noexcept { return data_; }

  Matrix column(std::size_t c) const;
  Matrix transpose() const;
  /// Columns `indices` (in the given order) as a new matrix.
  Matrix select_columns(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_add(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, Elem k);

/// Row rank over F_p (Gaussian elimination, first-nonzero pivoting).
std::size_t rank(const Matrix& a);

/// Solves a*x = b for square invertible `a`. Throws kSingularError otherwise.
Matrix solve_square(const Matrix& a, const Matrix& b);

Matrix kron(const Matrix& a, const Matrix& b);

/// Row-major flattening into a 1 x (rows*cols) row vector.
Matrix vec(const Matrix& a);

/// Sparse vector as (index, value) pairs sorted by index, values nonzero.
using SparseVec = std::vector<std::pair<std::size_t, Elem>>;

/// Incremental echelon basis over sparse vectors. Each stored vector is
/// normalised so that its leading (smallest-index) coefficient is 1.
class SparseBasis {
 public:
  explicit SparseBasis(Field field) : field_(field) {}

  /// Reduces `v` against the basis; returns true if it was independent (and
  /// has been added).
  bool insert(SparseVec v);
  std::size_t rank() const noexcept { return pivots_.size(); }

 private:
  Field field_;
  std::map<std::size_t, SparseVec> pivots_;  // keyed by leading index
};

/// Rank of the span of `columns`.
std::size_t sparse_rank(const Field& field, std::span<const SparseVec> columns);

}  // namespace cpir
