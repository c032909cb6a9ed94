#pragma once

#include <optional>
#include <vector>

#include "wrht/sparse_matrix.hpp"

namespace wrht {

struct RowReduction {
  int rank = 0;
  std::vector<int> pivots;  // pivot columns, strictly increasing
  SparseMatrix rref;        // unit pivots, pivot columns cleared, zero rows trailing
};

// Gaussian elimination run fraction-free on gcd-normalized integer rows.
// Pivot choice: smallest absolute numerator among candidate rows for the
// current column, ties broken by (column, row).  The output RREF has unit
// pivots and is therefore the canonical reduced echelon form of the row span.
RowReduction row_reduce(const SparseMatrix& m);

// Basis of { x : m x = 0 }, one vector per free column of the RREF, ordered
// by free column index.
std::vector<SparseVec> kernel_basis(const SparseMatrix& m);

// Representatives of Q^ambient_dim modulo the row span of `subspace`:
// the standard basis vectors at the non-pivot columns of RREF(subspace).
std::vector<SparseVec> quotient_representatives(const SparseMatrix& subspace, int ambient_dim);

// Representatives of span(cycles) modulo span(boundaries), both given as row
// collections inside Q^dim.  Each representative is a cycle row reduced
// against RREF(boundaries), the set self-reduced; deterministic.
std::vector<SparseVec> quotient_basis(const std::vector<SparseVec>& cycles,
                                      const std::vector<SparseVec>& boundaries, int dim);

int rank_of_rows(const std::vector<SparseVec>& rows, int dim);

// Reduces v against the pivot rows of a RREF; the result has no support on
// pivot columns.  Returns zero vector iff v lies in the row span.
SparseVec reduce_against(const RowReduction& red, const SparseVec& v);

// One-shot consistent-system solver for A x = b; nullopt when inconsistent.
// Free variables are set to zero, so the solution is deterministic.
class RrefSolver {
 public:
  explicit RrefSolver(const SparseMatrix& a);
  std::optional<SparseVec> solve(const SparseVec& b) const;
  int rank() const { return red_.rank; }

 private:
  int rows_;
  int cols_;
  RowReduction red_;        // RREF of [A | I]
};

std::optional<SparseVec> solve_linear(const SparseMatrix& a, const SparseVec& b);

}  // namespace wrht
