// SPDX-License-Identifier: Apache-2.0

#include "cpir/matrix.hpp"

#include <algorithm>
#include <string>

namespace cpir {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_field(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) fail(ErrorCode::kDimError, "operands live in different fields");
}

// In-place reduction to row echelon form; returns the rank. When `rhs` is
// given, the same row operations are applied to it (used by solve_square,
// which then needs full reduction, hence `reduce_above`).
std::size_t eliminate(Matrix& a, Matrix* rhs, bool reduce_above) {
  const Field& f = a.field();
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r) {
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(piv, k), a(r, k));
      if (rhs) {
        for (std::size_t k = 0; k < rhs->cols(); ++k) std::swap((*rhs)(piv, k), (*rhs)(r, k));
      }
    }
    const Elem inv = f.inv(a(r, c));
    for (std::size_t k = c; k < a.cols(); ++k) a(r, k) = f.mul(a(r, k), inv);
    if (rhs) {
      for (std::size_t k = 0; k < rhs->cols(); ++k) (*rhs)(r, k) = f.mul((*rhs)(r, k), inv);
    }
    for (std::size_t i = reduce_above ? 0 : r + 1; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Elem factor = a(i, c);
      for (std::size_t k = c; k < a.cols(); ++k) a(i, k) = f.sub(a(i, k), f.mul(factor, a(r, k)));
      if (rhs) {
        for (std::size_t k = 0; k < rhs->cols(); ++k) {
          (*rhs)(i, k) = f.sub((*rhs)(i, k), f.mul(factor, (*rhs)(r, k)));
        }
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    fail(ErrorCode::kDimError, "matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                                   " given " + std::to_string(data_.size()) + " entries");
  }
  for (Elem& e : data_) e = field_.reduce(e);
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Field field, const std::vector<std::vector<Elem>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<Elem> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) fail(ErrorCode::kDimError, "ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(field, rows.size(), cols, std::move(data));
}

Matrix Matrix::column(std::size_t c) const {
  Matrix out(field_, rows_, 1);
  for (std::size_t r = 0; r < rows_; ++r) out(r, 0) = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
  Matrix out(field_, rows_, indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= cols_) fail(ErrorCode::kDimError, "column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) out(r, k) = (*this)(r, indices[k]);
  }
  return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) fail(ErrorCode::kDimError, "mat_mul " + shape(a) + " by " + shape(b));
  const Field& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Elem x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(k, j)));
    }
  }
  return out;
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kDimError, "mat_add " + shape(a) + " and " + shape(b));
  }
  Matrix out(a);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().add(a(r, c), b(r, c));
  return out;
}

Matrix scale(const Matrix& a, Elem k) {
  Matrix out(a);
  k = a.field().reduce(k);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().mul(a(r, c), k);
  return out;
}

std::size_t rank(const Matrix& a) {
  Matrix work(a);
  return eliminate(work, nullptr, false);
}

Matrix solve_square(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != a.cols()) fail(ErrorCode::kDimError, "solve_square needs a square matrix, got " + shape(a));
  if (b.rows() != a.rows()) fail(ErrorCode::kDimError, "solve_square rhs " + shape(b) + " for " + shape(a));
  Matrix work(a);
  Matrix x(b);
  if (eliminate(work, &x, true) != a.rows()) fail(ErrorCode::kSingularError, "matrix is singular");
  return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  const Field& f = a.field();
  Matrix out(f, a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Elem x = a(i, j);
      if (x == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = f.mul(x, b(k, l));
    }
  return out;
}

Matrix vec(const Matrix& a) {
  return Matrix(a.field(), 1, a.rows() * a.cols(), std::vector<Elem>(a.entries().begin(), a.entries().end()));
}

bool SparseBasis::insert(SparseVec v) {
  const Field& f = field_;
  std::sort(v.begin(), v.end());
  std::erase_if(v, [](const auto& e) { return e.second == 0; });
  while (!v.empty()) {
    auto it = pivots_.find(v.front().first);
    if (it == pivots_.end()) break;
    const Elem factor = v.front().second;
    const SparseVec& b = it->second;
    SparseVec merged;
    merged.reserve(v.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < v.size() || j < b.size()) {
      if (j == b.size() || (i < v.size() && v[i].first < b[j].first)) {
        merged.push_back(v[i++]);
      } else if (i == v.size() || b[j].first < v[i].first) {
        merged.emplace_back(b[j].first, f.neg(f.mul(factor, b[j].second)));
        ++j;
      } else {
        const Elem x = f.sub(v[i].second, f.mul(factor, b[j].second));
        if (x != 0) merged.emplace_back(v[i].first, x);
        ++i;
        ++j;
      }
    }
    v = std::move(merged);
  }
  if (v.empty()) return false;
  const Elem inv = f.inv(v.front().second);
  for (auto& e : v) e.second = f.mul(e.second, inv);
  const std::size_t lead = v.front().first;
  pivots_.emplace(lead, std::move(v));
  return true;
}

std::size_t sparse_rank(const Field& field, std::span<const SparseVec> columns) {
  SparseBasis basis(field);
  for (const auto& c : columns) basis.insert(c);
  return basis.rank();
}

}  // namespace cpir
