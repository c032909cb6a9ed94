#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wrht/linalg.hpp"
#include "wrht/sparse_matrix.hpp"

namespace wrht {

// All graded data lives inside an explicit degree window.  Nothing is ever
// extrapolated outside it: a block that is not materialized does not exist.
struct DegreeWindow {
  int min_degree = 0;
  int max_degree = 0;

  bool contains(int n) const { return min_degree <= n && n <= max_degree; }
  bool contains(const DegreeWindow& o) const {
    return min_degree <= o.min_degree && o.max_degree <= max_degree;
  }
  int span() const { return max_degree - min_degree; }
};

struct BasisElement {
  std::string label;
  int degree = 0;
  int weight = 0;

  bool operator==(const BasisElement&) const = default;
};

// A named algebra generator; free algebras carry both a degree and a weight
// per generator.  Shared by the CDGA and DGLA presentations.
struct Generator {
  std::string name;
  int degree = 0;
  int weight = 0;
};

// Outcome of a structural validation: ok unless some rule failed, with one
// message per violation.
struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(const std::string& msg) {
    ok = false;
    failures.push_back(msg);
  }
};

using Bidegree = std::pair<int, int>;  // (degree, weight)

// Finite bigraded basis.  Index order is the canonical order of the slice;
// blocks group indices by (degree, weight).
struct GradedSlice {
  DegreeWindow window{0, 0};
  std::vector<BasisElement> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  int degree(int i) const { return basis.at(i).degree; }
  int weight(int i) const { return basis.at(i).weight; }

  std::vector<int> block(int degree, int weight) const;
  std::vector<int> degree_indices(int degree) const;
  std::vector<Bidegree> bidegrees() const;
  std::vector<int> weights_in_degree(int degree) const;
  int block_dim(int degree, int weight) const { return static_cast<int>(block(degree, weight).size()); }

  // Throws if some basis element falls outside the window.
  void validate() const;
};

GradedSlice shift(const GradedSlice& s, int k);   // degree n -> n - k, weights unchanged
GradedSlice dualize(const GradedSlice& s);        // (n, p) -> (-n, -p), same index order
GradedSlice tensor(const GradedSlice& a, const GradedSlice& b,
                   std::vector<std::pair<int, int>>* factor_pairs = nullptr);

// Degree/weight-homogeneous linear map between slices, stored as one sparse
// matrix (rows = target indices, cols = source indices) whose support is
// required to respect the shifts blockwise.
struct LinearMapSlice {
  GradedSlice source;
  GradedSlice target;
  int degree_shift = 0;
  int weight_shift = 0;
  SparseMatrix matrix;

  void validate() const;  // throws on a block-discipline violation
  SparseVec apply(const SparseVec& v) const { return matrix.apply(v); }
};

LinearMapSlice compose(const LinearMapSlice& g, const LinearMapSlice& f);  // g after f

// Extracts the block of `m` sending (degree, weight) into
// (degree + degree_shift, weight + weight_shift), together with the source
// and target index lists that give the block its coordinates.
struct MatrixBlock {
  std::vector<int> source_indices;
  std::vector<int> target_indices;
  SparseMatrix matrix;
};
MatrixBlock extract_block(const GradedSlice& source, const GradedSlice& target,
                          const SparseMatrix& m, int degree, int weight, int degree_shift,
                          int weight_shift);

struct CohomologyEntry {
  int degree = 0;
  int weight = 0;
  int dim = 0;
  std::vector<SparseVec> representatives;  // cocycles in slice coordinates
};

struct CohomologyReport {
  DegreeWindow window{0, 0};
  std::map<Bidegree, CohomologyEntry> entries;  // only nonzero blocks

  int dim(int degree, int weight) const;
  int total_dim(int degree) const;
  std::vector<Bidegree> support() const;
};

// Blockwise cohomology of (space, d) where d has degree +1 and weight 0.
// The caller must request a window whose blocks have complete incoming and
// outgoing differentials inside `space` (one degree of slack on each side).
CohomologyReport cohomology(const GradedSlice& space, const SparseMatrix& d,
                            const DegreeWindow& request);

// Blockwise comparison of two cohomology reports through a chain map given
// as a matrix `f` (upstairs coordinates -> downstairs coordinates, where
// downstairs boundaries come from `d_target` over `target` indices): equal
// block dimensions, and the images of the upstairs representatives must
// span the downstairs cohomology over its boundaries.
void compare_cohomology(const CohomologyReport& upstairs, const CohomologyReport& downstairs,
                        const SparseMatrix& f, const GradedSlice& target,
                        const SparseMatrix& d_target, CheckReport& report);

}  // namespace wrht
