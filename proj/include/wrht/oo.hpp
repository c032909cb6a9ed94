#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wrht/cga.hpp"
#include "wrht/fdalgebra.hpp"
#include "wrht/grading.hpp"
#include "wrht/lie.hpp"

namespace wrht {

// Homotopy algebra structures on a finite weight-graded slice.
//
// Conventions.  An OoStructure holds the operations of an A-infinity,
// C-infinity or L-infinity algebra on `space`.  Internally every operation is
// stored in the desuspended ("bar") picture: the arity-m operation b_m acts on
// m-tuples of basis elements, has degree +1 with respect to the bar degree
// bar(x) = deg(x) - 1, and preserves weight.  In this picture all structure
// relations take a uniform sign-free shape, with Koszul signs over bar degrees
// as the only sign input:
//
//   assoc/comm:  sum_{r+s+t=m} b_{r+1+t} (1^r (x) b_s (x) 1^t) = 0,
//   lie:         sum_{i+j=m+1} sum_{(i,m-i)-unshuffles}
//                    eps(sigma) b_j(b_i(x_sigma...), x_sigma...) = 0,
//
// and for the comm kind additionally the vanishing of every b_m on (p,q)-
// shuffle sums, 0 < p < m.  For the lie kind the b_m are graded symmetric in
// bar degrees and are stored on weakly increasing index tuples only.
//
// The classical operations mu_m (degree 2-m; for lie this is the usual
// antisymmetric convention l_m) are exposed through op()/set_op(), which
// differ from the stored values by the suspension sign
// (-1)^{sum_j (m-j)(deg(x_j)-1)}.
//
// The slice is treated as the entire underlying space: a degree/weight block
// with no basis elements is the zero space, and operations landing there
// vanish.  Callers converting from windowed presentations must supply windows
// large enough that this reading is exact.

enum class OpKind { assoc, comm, lie };

std::string op_kind_name(OpKind kind);

// Parity of the sign relating mu_m to its bar-picture form on inputs of the
// given (unsuspended) degrees: sum_j (m-j)(d_j - 1) mod 2.
int susp_sign_parity(const std::vector<int>& degrees);

class OoStructure {
 public:
  OoStructure(OpKind kind, GradedSlice space, int arity_bound);

  OpKind kind() const { return kind_; }
  const GradedSlice& space() const { return space_; }
  int arity_bound() const { return arity_bound_; }
  int dim() const { return space_.dim(); }
  int bar_degree(int i) const { return space_.degree(i) - 1; }
  const std::string& label(int i) const { return space_.basis[i].label; }

  // Bar-picture access.  set_bar_op validates homogeneity (bar degree +1,
  // weight 0) and, for the lie kind, canonicalizes the tuple.  Operations of
  // arity above the bound are declared zero: reading them yields the zero
  // vector, setting them nonzero throws.
  void set_bar_op(int arity, const std::vector<int>& inputs, const SparseVec& value);
  SparseVec bar_op(int arity, const std::vector<int>& inputs) const;
  const std::map<std::vector<int>, SparseVec>& bar_ops(int arity) const;

  // Classical operations of degree 2-m (antisymmetric convention for lie).
  void set_op(int arity, const std::vector<int>& inputs, const SparseVec& value);
  SparseVec op(int arity, const std::vector<int>& inputs) const;

  // Multilinear extension of b_m to sparse-vector inputs.
  SparseVec eval_bar(int arity, const std::vector<SparseVec>& inputs) const;

  // mu_1 assembled as a dim x dim matrix on the slice.
  SparseMatrix d_matrix() const;

  bool arity_used(int arity) const;

 private:
  friend CheckReport check_relations(const OoStructure&, int);

  // Sort a lie tuple into weakly increasing order, tracking the Koszul sign
  // over bar degrees.  nullopt when the tuple repeats an index of odd bar
  // degree (the symmetric power collapses it to zero).
  std::optional<std::pair<std::vector<int>, int>> canonical(std::vector<int> inputs) const;

  OpKind kind_;
  GradedSlice space_;
  int arity_bound_;
  std::vector<std::map<std::vector<int>, SparseVec>> ops_;
};

// Exhaustive relation check over all basis tuples up to the given arity
// (weakly increasing tuples for lie).  Reports the first failing relation
// with its witness inputs.  For the comm kind this includes the shuffle
// vanishing; at arity <= 2 with only mu_1, mu_2 present the whole check
// reduces to d^2 = 0, Leibniz, associativity/Jacobi (+ commutativity).
CheckReport check_relations(const OoStructure& s, int up_to_arity);

class OoMorphism {
 public:
  OoMorphism(OoStructure source, OoStructure target, int arity_bound);

  const OoStructure& source() const { return source_; }
  const OoStructure& target() const { return target_; }
  int arity_bound() const { return arity_bound_; }

  // Components in the bar picture: f_m has bar degree 0 and weight 0, so no
  // signs arise when components pass inputs.  The classical component has
  // degree 1-m; component()/set_component() apply the suspension sign.
  void set_bar_component(int arity, const std::vector<int>& inputs, const SparseVec& value);
  SparseVec bar_component(int arity, const std::vector<int>& inputs) const;
  const std::map<std::vector<int>, SparseVec>& bar_components(int arity) const;
  void set_component(int arity, const std::vector<int>& inputs, const SparseVec& value);
  SparseVec component(int arity, const std::vector<int>& inputs) const;

  SparseVec eval_bar(int arity, const std::vector<SparseVec>& inputs) const;

  // f_1 assembled as a target_dim x source_dim matrix.
  SparseMatrix f1_matrix() const;

 private:
  std::optional<std::pair<std::vector<int>, int>> canonical(std::vector<int> inputs) const;

  OoStructure source_;
  OoStructure target_;
  int arity_bound_;
  std::vector<std::map<std::vector<int>, SparseVec>> components_;
};

// Infinity-morphism relations over all basis tuples up to the given arity;
// the arity-1 case is the chain-map condition for f_1.
CheckReport check_morphism(const OoMorphism& f, int up_to_arity);

// Whether f_1 induces an isomorphism on cohomology, blockwise over the full
// slice (exact under the whole-space reading of the slices).
bool induces_cohomology_iso(const OoMorphism& f);

OoMorphism identity_oo_morphism(const OoStructure& s);
OoMorphism compose_oo(const OoMorphism& g, const OoMorphism& f);

// Inverse of an infinity-isomorphism (f_1 invertible blockwise), built arity
// by arity from (g o f)_m = 0 for m >= 2.  Throws when f_1 is not invertible.
OoMorphism invert_oo_isomorphism(const OoMorphism& f);

// Conversions from strict structures.  Monomial bases and brackets are read
// off the presentations; the caller's window is taken at face value (quotient
// semantics at the truncated end keeps the relations exact).
OoStructure oo_from_cdga(const CgaBasis& basis, int arity_bound);
OoStructure oo_from_dgla(const DglaBasis& basis, int arity_bound);
OoStructure oo_from_fdalgebra(const FdAlgebra& a, int arity_bound);

// Strict morphism (f_1 only); f1 must have degree and weight shift 0.
OoMorphism strict_oo_morphism(OoStructure source, OoStructure target, const LinearMapSlice& f1,
                              int arity_bound);

// Gamma filtration of an L-infinity structure: Gamma^1 = L, and Gamma^k for
// k >= 2 is the joint fixpoint of span{ b_j(xi_1..xi_j) : j >= 2,
// xi_i in Gamma^{a_i}, sum a_i >= k } with nesting Gamma^{k+1} <= Gamma^k.
// Returns a basis of the degree-n piece of Gamma^k in slice coordinates.
std::vector<SparseVec> oo_gamma_filtration(const OoStructure& s, int k, int degree);

}  // namespace wrht
