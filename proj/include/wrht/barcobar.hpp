#pragma once

#include <vector>

#include "wrht/cga.hpp"
#include "wrht/fdalgebra.hpp"
#include "wrht/lie.hpp"
#include "wrht/oo.hpp"

namespace wrht {

// Chevalley-Eilenberg and Quillen constructions, windowed.
//
// Both constructions dualize slice-wise against the chosen bases: dualizing
// negates degree and weight, so the generator dual to s^{-1}x for x of
// bidegree (d, w) sits at (1 - d, -w), and the generator s(e^vee) for a
// basis element e of bidegree (d, w) sits at (1 - d, -w) as well.  Dual
// generators inherit the primal labels, so either construction can be read
// back against its input.
//
// The sign conventions in the differentials are fixed once here (suspension
// acting from the left, Koszul signs over bar degrees) and validated by
// d^2 = 0 on the windowed basis rather than matched symbol-for-symbol
// against any display; check_presentation / check_dgla run before either
// construction returns, and a failure throws.

// Free CGA on the duals of s^{-1}L, L a dgla or lie-flavoured OoStructure
// concentrated in non-positive degrees.  primal_index[j] is the index into
// L's slice of the basis element x with generator(j) dual to s^{-1}x.
struct CeAlgebra {
  CdgaPresentation presentation;
  std::vector<int> primal_index;
};

// The differential on the generator dual to s^{-1}x_j collects every stored
// operation with output x_j: an m-ary bracket contributes a degree-m
// monomial (the duals of its inputs), so a dgla input yields d linear plus
// quadratic and an L-infinity input adds one term per higher bracket.
// Closing d on a generator of degree n requires primal data through degree
// n + 1; with lo the lowest L-degree in the window the top generator sits
// at 1 - lo, so the construction refuses any window with max < 2 - lo.
CeAlgebra ce_algebra(const DglaPresentation& l, const DegreeWindow& window);
CeAlgebra ce_algebra(const OoStructure& l, const DegreeWindow& window);

// Free dgla on s applied to the duals of the augmentation ideal of A.
// primal_index[j] is the index into A's space of the basis element e with
// generator(j) = s(e^vee).
struct QuillenDgla {
  DglaPresentation presentation;
  std::vector<int> primal_index;
};

// Requires A unital, connected (degree 0 spanned by the unit, nothing
// below) and simply connected (no degree-1 basis elements), so every
// generator lands in degree <= -1.  The window must contain every
// generator, i.e. [1 - top degree of A, -1].
QuillenDgla quillen_dgla(const FdAlgebra& a, const DegreeWindow& window);

// Counit checks for the bar-cobar adjunction, windowed.
//
// The lie-side counit q: L*(C_CE(L)) -> L sends the length-one word on the
// generator dual to s^{-1}x to -x and kills longer words, extended as a
// dgla map; the algebra-side counit q: A_CE(L(A)) -> A sends the generator
// dual to s^{-1}(s e^vee) to -e and kills longer monomials, extended
// multiplicatively.  Each check materializes the two-sided composite over a
// window wide enough to close both differentials (refusing when the input
// window leaves too little slack), verifies the counit is a weight-
// preserving chain map (and an algebra map on the cdga side), and compares
// windowed cohomology blockwise: equal dimensions and the requirement that
// the image of the composite's cocycles spans L's cohomology.

// q_l over degrees [window.min, window.max]; needs L presented on at least
// [window.min - 1, -1] and window.max <= -1.
CheckReport counit_quasiiso_check(const DglaPresentation& l, const DegreeWindow& window);

// q_a over degrees [0, window.max]; needs A's space to cover
// [0, window.max + 1] and window.min == 0.
CheckReport counit_quasiiso_check(const FdAlgebra& a, const DegreeWindow& window);

}  // namespace wrht
