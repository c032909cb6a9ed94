#pragma once

#include <map>
#include <utility>

#include "wrht/cga.hpp"
#include "wrht/grading.hpp"

namespace wrht {

// Finite-dimensional weight-graded dg algebra given by structure constants
// on a chosen basis.  Absent product entries mean the product is zero (a
// degree/weight block with no basis elements is the zero space).
struct FdAlgebra {
  GradedSlice space;
  int unit = -1;  // basis index of 1, or -1 when non-unital
  bool commutative = true;
  std::map<std::pair<int, int>, SparseVec> product;  // (i,j) -> coords of e_i * e_j
  SparseMatrix d{0, 0};

  int dim() const { return space.dim(); }
  SparseVec multiply(int i, int j) const;
  SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
  void set_product(int i, int j, SparseVec value);
};

// Structural validation: grading discipline of d and the products, d^2 = 0,
// Leibniz, associativity, graded commutativity (when flagged), unit laws.
CheckReport check_fdalgebra(const FdAlgebra& a);

// The windowed CGA as structure constants on its monomial basis.
FdAlgebra fd_from_cga(const CgaBasis& basis);

}  // namespace wrht
