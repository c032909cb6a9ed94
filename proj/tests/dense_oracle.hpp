#pragma once

// Dense rational linear algebra, kept deliberately naive and separate from
// the sparse pipeline under test, for use as an independent oracle.

#include <vector>

#include "wrht/grading.hpp"

namespace oracle {

inline int dense_rank(std::vector<std::vector<wrht::Rational>> m) {
  if (m.empty()) return 0;
  const size_t rows = m.size(), cols = m[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && wrht::is_zero(m[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(m[rank], m[piv]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || wrht::is_zero(m[r][c])) continue;
      wrht::Rational f = m[r][c] / m[rank][c];
      for (size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// Rank of the degree block n -> n+1 of d in slice coordinates.
inline int block_rank(const wrht::GradedSlice& slice, const wrht::SparseMatrix& d, int n) {
  std::vector<int> src = slice.degree_indices(n);
  std::vector<int> dst = slice.degree_indices(n + 1);
  if (src.empty() || dst.empty()) return 0;
  std::vector<std::vector<wrht::Rational>> dense(dst.size(),
                                                 std::vector<wrht::Rational>(src.size()));
  for (size_t j = 0; j < src.size(); ++j)
    for (size_t i = 0; i < dst.size(); ++i) dense[i][j] = d.at(dst[i], src[j]);
  return dense_rank(std::move(dense));
}

// dim H^n by the classical formula dim ker - dim im = dim - rank_n - rank_{n-1}.
inline int h_dim(const wrht::GradedSlice& slice, const wrht::SparseMatrix& d, int n) {
  int dim_n = static_cast<int>(slice.degree_indices(n).size());
  return dim_n - block_rank(slice, d, n) - block_rank(slice, d, n - 1);
}

}  // namespace oracle
