#pragma once

#include <stdexcept>
#include <vector>

#include "wrht/sparsevec.hpp"

namespace wrht {

// Row-major sparse matrix over Q.  Rows are SparseVecs (sorted support, no
// explicit zeros), so the representation of a given matrix is unique.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void set(int r, int c, const Rational& v) {
    check_index(r, c);
    if (is_zero(v)) {
      row_[r].erase(c);
    } else {
      row_[r][c] = v;
    }
  }

  void add(int r, int c, const Rational& v) {
    check_index(r, c);
    vec_add_scaled(row_[r], c, v);
  }

  Rational at(int r, int c) const {
    check_index(r, c);
    return vec_coeff(row_[r], c);
  }

  const SparseVec& row(int r) const { return row_.at(r); }
  SparseVec& row_mut(int r) { return row_.at(r); }

  void set_row(int r, SparseVec v) {
    if (r < 0 || r >= rows_) throw std::out_of_range("row index");
    for (const auto& [c, x] : v) {
      if (c < 0 || c >= cols_) throw std::out_of_range("column index in row");
      (void)x;
    }
    row_[r] = std::move(v);
  }

  int nonzero_count() const {
    int n = 0;
    for (const auto& r : row_) n += static_cast<int>(r.size());
    return n;
  }

  // y = m * x
  SparseVec apply(const SparseVec& x) const {
    SparseVec y;
    for (int r = 0; r < rows_; ++r) {
      Rational acc(0);
      for (const auto& [c, v] : row_[r]) {
        auto it = x.find(c);
        if (it != x.end()) acc += v * it->second;
      }
      if (!is_zero(acc)) y.emplace(r, acc);
    }
    return y;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (const auto& [c, v] : row_[r]) t.row_[c].emplace(r, v);
    return t;
  }

  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && row_ == o.row_;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matmul shape mismatch");
    SparseMatrix out(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (const auto& [k, v] : a.row_[r]) vec_add_scaled(out.row_[r], b.row_[k], v);
    return out;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matadd shape mismatch");
    SparseMatrix out = a;
    for (int r = 0; r < b.rows_; ++r) vec_add_scaled(out.row_[r], b.row_[r], Rational(1));
    return out;
  }

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<SparseVec> row_;
};

}  // namespace wrht
