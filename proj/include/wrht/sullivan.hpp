#pragma once

#include <string>
#include <vector>

#include "wrht/cga.hpp"
#include "wrht/fdalgebra.hpp"
#include "wrht/lie.hpp"
#include "wrht/oo.hpp"

namespace wrht {

// Weight-graded Sullivan minimal model of a simply connected algebra,
// together with the quasi-isomorphism into the (materialized) input: one
// image per model generator, in target coordinates.  Generator names are
// deterministic, "v{degree}_{weight}_{counter}".
struct MinimalModel {
  CdgaPresentation model;
  FdAlgebra target;                // the algebra the model maps into
  std::vector<SparseVec> images;   // generator id -> element of target
};

// Stagewise construction through `max_degree`, for a unital commutative
// weight-graded input with H^0 = Q (weight 0) and H^1 = 0.  At stage n the
// construction adds generators covering the cokernel of H^n(M) -> H^n(A)
// (closed, mapping to the missing classes) and generators killing the
// kernel of H^{n+1}(M) -> H^{n+1}(A) (differential = the dying cocycle,
// image = a primitive of its image).  Since generators appear in
// non-decreasing degree, kernel cocycles are automatically decomposable
// and the output is minimal.  Weights ride along blockwise: when the
// input's cohomology weights are positive, so are the model's.
//
// The FdAlgebra overload needs the input presented through max_degree + 1;
// the presentation overload needs window headroom through max_degree + 2
// (one degree of slack for honest cohomology at the top) and materializes
// the presentation as the target.
MinimalModel minimal_model(const FdAlgebra& a, int max_degree);
MinimalModel minimal_model(const CdgaPresentation& p, int max_degree);

// Validates a claimed model: minimality (every differential lands in
// products of two or more generators), homogeneity of the images, the
// chain rule, and a blockwise cohomology comparison over `request`
// (dimension equality plus spanning of the induced images).
CheckReport minimal_model_check(const MinimalModel& mm, const DegreeWindow& request);

// The formality rule w(x) = |x| on a cohomology algebra; requires a zero
// differential.  The result is (1, 0)-segmented by construction.
FdAlgebra assign_formality_weights(const FdAlgebra& h);

// Sign classification of a weight decomposition: positive means weight 0
// in degree 0 and strictly positive weights elsewhere; negative likewise
// with strictly negative weights.  Both flags hold vacuously for a trivial
// scope; `neither` is the case where both fail.
struct WeightSignReport {
  bool positive = true;
  bool negative = true;
  std::vector<std::string> notes;  // witnesses breaking either sign

  bool neither() const { return !positive && !negative; }
};

// The classification is run separately on the generators (resp. basis
// slice) and on the windowed cohomology, since a model may be signed on
// generators while its cohomology is not, and vice versa.
struct PositivityReport {
  WeightSignReport generators;
  WeightSignReport cohomology;
};

PositivityReport positivity_check(const CdgaPresentation& p);
PositivityReport positivity_check(const DglaPresentation& p);
PositivityReport positivity_check(const OoStructure& s);

// (alpha, k)-segmentation of a cohomology support: every nonzero block
// (n, p) must satisfy alpha*n <= p <= alpha*(n + k).
struct SegmentationReport {
  bool ok = false;
  Rational alpha = Rational(0);
  int k = 0;
  std::vector<Bidegree> support;        // the (degree, weight) witness blocks
  std::vector<std::string> failures;    // blocks breaking the inequalities
};

// Minimal k for the given alpha (> 0); ok = false when some block sits
// below the lower bound, which no k can repair.
SegmentationReport segmentation(const CohomologyReport& h, const Rational& alpha);

// Searches alpha over the support ratios {p/n : H^n_p != 0, n != 0} and
// returns the pair minimizing k, ties broken by smaller alpha; a support
// concentrated in degree 0 at weight 0 is pure, reported as (1, 0).
SegmentationReport segmentation(const CohomologyReport& h);

// The strict inequality w(x) < |x| on every windowed basis element (the
// unit excluded): satisfied by formality weights on Quillen models and by
// coformality weights on Sullivan models, broken (by equality) on pure
// cohomology itself.
CheckReport weight_degree_inequality_check(const CdgaPresentation& p);
CheckReport weight_degree_inequality_check(const DglaPresentation& p);

}  // namespace wrht
