#pragma once

#include "wrht/grading.hpp"
#include "wrht/oo.hpp"
#include "wrht/rational.hpp"

namespace wrht {

// Homotopy transfer along a retract onto cohomology.
//
// A HomotopyRetract presents the cohomology of the complex underlying `big`:
// p and i are weight-preserving chain maps of degree 0 with p i = id and
// id - i p = d h + h d, the small side carries the zero differential
// (d i = 0 and p d = 0), and the side conditions h i = 0, p h = 0 and
// h h = 0 all hold.  build_retract produces such a retract blockwise, one
// (degree, weight) block at a time, so every map is weight-homogeneous by
// construction and the side conditions are arranged rather than checked in.
//
// transfer_structure pushes the operations of `big` onto the small slice by
// the tree formula.  In the bar picture the recursion is sign-free once the
// homotopy enters as u = -h: with Z on a single input equal to i and
//
//   Q_m = sum_{k>=2} b_k (Z (x) ... (x) Z)        (compositions of m for
//                                                  assoc/comm, set partitions
//                                                  with Koszul grouping signs
//                                                  for lie),
//   Z_m = u Q_m,
//
// the transferred operation is eta_m = p Q_m and the quasi-isomorphism
// i_infinity has components i and Z_m.  All composite operators Z have bar
// degree 0, so passing them over inputs never creates signs; the Koszul
// grouping sign over bar degrees is the only sign in the lie sum.

struct HomotopyRetract {
  OoStructure big;    // carries the slice, the differential, and the operations
  GradedSlice small;  // one basis element per cohomology class of big
  LinearMapSlice p;   // big -> small, degree 0, weight 0
  LinearMapSlice i;   // small -> big, degree 0, weight 0
  LinearMapSlice h;   // big -> big, degree -1, weight 0
};

// Blockwise decomposition C = B (+) H' (+) A of every (degree, weight) block:
// B the boundaries, H' chosen cocycle representatives, A a complement of the
// cycles on which d is injective.  h inverts d from B back into A and kills
// H' (+) A, which forces h i = 0, p h = 0, h h = 0.  The result is verified
// before it is returned.
HomotopyRetract build_retract(const OoStructure& big);

// Validates every retract invariant: shapes and shifts, p i = id, d i = 0,
// p d = 0, i p + d h + h d = id, and the three side conditions.
CheckReport check_retract(const HomotopyRetract& r);

struct TransferredStructure {
  OoStructure structure;  // minimal: mu_1 = 0
  OoMorphism i_infinity;  // quasi-isomorphism small -> big extending i
};

// Homotopy transfer up to the given arity bound.  Requires the retract's
// small side to carry the zero differential; the relations of `big` must
// hold up to arity_bound + 1 on its slice (not re-verified here; supply an
// adequate window).
TransferredStructure transfer_structure(const HomotopyRetract& r, int arity_bound);

// Minimal model pipelines: convert, retract onto cohomology, transfer.
TransferredStructure minimal_oo_model(const CgaBasis& basis, int arity_bound);
TransferredStructure minimal_oo_model(const DglaBasis& basis, int arity_bound);
TransferredStructure minimal_oo_model(const FdAlgebra& a, int arity_bound);

// For a minimal structure whose slice is (alpha, k)-segmented -- every basis
// element at (n, p) satisfies alpha n <= p <= alpha (n + k) with alpha > 0 --
// the operations mu_m with m > k + 2 vanish for weight reasons: the inputs
// force weight >= alpha * (sum of degrees) on the output while segmentation
// caps its block at alpha * (output degree + k), an empty range once
// m > k + 2.  Checks that every stored operation above arity k + 2 is zero
// and certifies, tuple by tuple, that the target block is empty.  Throws
// invalid_argument when the structure is not minimal or some basis element
// breaks the segmentation bounds (naming the offending class).
CheckReport vanishing_from_segmentation(const OoStructure& s, const Rational& alpha, int k);

// Uniqueness of minimal models, verified by solving: given two minimal
// structures and an invertible weight-preserving f1 that strictly
// intertwines the binary operations, solves the arity-3 morphism relation
// for f2 (f3 drops out because both differentials vanish) and returns the
// resulting infinity-isomorphism up to arity 3.  Throws invalid_argument on
// a malformed f1 and logic_error if no solution exists.
OoMorphism solve_minimal_iso(const OoStructure& source, const OoStructure& target,
                             const LinearMapSlice& f1);

}  // namespace wrht
