#pragma once

#include <map>
#include <utility>
#include <vector>

#include "wrht/barcobar.hpp"
#include "wrht/fdalgebra.hpp"
#include "wrht/grading.hpp"
#include "wrht/oo.hpp"

namespace wrht {

// Tensor L-infinity algebra A (x) L of a connected cdga and a lie-kind
// structure, on the basis of pairs a_i (x) x_j whose total degree lies in
// the requested window.  Weights add.  The structure is exact in every
// block whose contributing lie blocks sit inside l's own window; the caller
// chooses the window with enough slack for the degrees to be compared.
struct TensorLinfty {
  OoStructure structure;
  FdAlgebra algebra;                              // the cdga tensor factor
  std::vector<std::pair<int, int>> pairs;         // tensor index -> (algebra, lie)
  std::map<std::pair<int, int>, int> pair_index;  // inverse of `pairs`
};

// Requires a connected (degree 0 spanned by the unit, no negative degrees)
// commutative algebra and a degree-wise nilpotent lie-kind structure; the
// nilpotency is certified through the gamma filtration and the call throws
// when the window cannot certify it.
TensorLinfty tensor_linfty(const FdAlgebra& a, const OoStructure& l, const DegreeWindow& window);

// A degree-1 element satisfying sum_m b_m(tau,..,tau)/m! = 0; weight_zero
// records whether every term carries weight zero.
struct MCElement {
  SparseVec element;
  bool weight_zero = false;
};

// Checks the Maurer-Cartan equation for tau, certifying that the series
// stabilizes in the output degree before trusting the windowed sum.  Throws
// with a witness term when the equation fails.
MCElement verify_mc(const OoStructure& s, const SparseVec& tau);

// The Maurer-Cartan element of a cdga map out of the Chevalley-Eilenberg
// algebra of the lie factor, given by its values on the dual generators
// (ce generator id -> element of t.algebra).  The images must form a chain
// map; multiplicativity is automatic from the generator-level data.  The
// element is weight zero exactly when the map preserves weights.
MCElement mc_from_cdga_map(const CeAlgebra& ce, const TensorLinfty& t,
                           const std::vector<SparseVec>& gen_images);

// Inverse readout of the correspondence: the generator images of the cdga
// map attached to tau.  Round trip: mc_from_cdga_map o phi_from_mc = id.
std::vector<SparseVec> phi_from_mc(const CeAlgebra& ce, const TensorLinfty& t,
                                   const MCElement& tau);

// The tau-twisted structure b_i^tau(x..) = sum_k b_{k+i}(tau^k (x) x..)/k!.
// tau must be weight zero (a twist by mixed weights leaves the weight-graded
// category these structures model).  Each output degree is certified via the
// gamma filtration before the series is trusted; twist(s, 0) returns s.
OoStructure twist(const OoStructure& s, const MCElement& tau);

// The n-connected cover: degrees < n kept, degree n replaced by ker(b_1),
// degrees > n dropped.  Structure maps are restrictions; the call verifies
// closure and throws if an operation leaves the cover.
OoStructure connected_cover(const OoStructure& s, int n);

// The mapping-space model (A (x) L)^tau<0> for the component of tau.
OoStructure mapping_space_model(const TensorLinfty& t, const MCElement& tau);

}  // namespace wrht
