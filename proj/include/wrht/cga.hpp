#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wrht/grading.hpp"

namespace wrht {

// Free graded-commutative algebra Lambda(V) on weighted generators of
// strictly positive degree, with a derivation differential.  Monomials are
// sorted generator-id lists; generator ids follow the canonical generator
// order (degree ascending, then name), so sorted ids = canonical form.
using CgaGenerator = Generator;

using CgaMonomial = std::vector<int>;  // sorted generator ids; empty = unit

struct CgaElement {
  std::map<CgaMonomial, Rational> terms;

  bool is_zero() const { return terms.empty(); }
  void add_term(const CgaMonomial& m, const Rational& c);
  CgaElement& operator+=(const CgaElement& other);
  CgaElement& operator*=(const Rational& c);
  bool operator==(const CgaElement&) const = default;
};

class CdgaPresentation {
 public:
  // Generators are sorted into canonical order; differentials start at zero.
  CdgaPresentation(std::vector<CgaGenerator> generators, DegreeWindow window);

  int generator_count() const { return static_cast<int>(gens_.size()); }
  const CgaGenerator& generator(int id) const { return gens_.at(id); }
  const std::vector<CgaGenerator>& generators() const { return gens_; }
  std::optional<int> generator_index(const std::string& name) const;
  const DegreeWindow& window() const { return window_; }

  void set_differential(int id, CgaElement value);
  const CgaElement& differential(int id) const { return d_of_.at(id); }

  bool is_simply_connected() const;  // all generators in degree >= 2

  int mono_degree(const CgaMonomial& m) const;
  int mono_weight(const CgaMonomial& m) const;
  std::string mono_label(const CgaMonomial& m) const;

  // Product of monomials with Koszul signs; nullopt when the product is zero
  // (repeated odd generator).  The result ignores the window.
  std::optional<std::pair<CgaMonomial, int>> multiply_monomials(const CgaMonomial& a,
                                                                const CgaMonomial& b) const;

  // Window-truncated operations (degrees above window.max are dropped; this
  // is the quotient by the ideal of high degrees, legitimate because all
  // generators have positive degree).
  CgaElement multiply(const CgaElement& a, const CgaElement& b) const;
  CgaElement scalar_multiple(const CgaElement& a, const Rational& c) const;

  // Extends generator values to a derivation of the stated degree/weight
  // shift and applies it to x.
  CgaElement apply_derivation(const std::vector<CgaElement>& values, int degree_shift,
                              const CgaElement& x) const;
  CgaElement apply_d(const CgaElement& x) const;

  CheckReport check_presentation() const;

 private:
  std::vector<CgaGenerator> gens_;
  std::vector<CgaElement> d_of_;
  DegreeWindow window_;
};

// Materialized monomial basis of a presentation inside its window, plus the
// structure matrices downstream modules need.
class CgaBasis {
 public:
  explicit CgaBasis(const CdgaPresentation& p);

  const CdgaPresentation& presentation() const { return *p_; }
  const std::vector<CgaMonomial>& monomials() const { return monomials_; }
  int dim() const { return static_cast<int>(monomials_.size()); }
  std::optional<int> index_of(const CgaMonomial& m) const;
  const GradedSlice& slice() const { return slice_; }

  SparseVec coords(const CgaElement& x) const;     // window-truncated
  CgaElement element(const SparseVec& v) const;

  SparseMatrix differential_matrix() const;
  // Matrix of the derivation extending `values` (degree shift as stated).
  SparseMatrix derivation_matrix(const std::vector<CgaElement>& values, int degree_shift) const;
  // The unique derivation with the stated shifts taking generator i to
  // values[i], as a validated map slice.  Throws if some value is not
  // homogeneous of degree gen.degree + degree_shift and weight
  // gen.weight + weight_shift (zero values are always fine).
  LinearMapSlice extend_derivation(const std::vector<CgaElement>& values, int degree_shift,
                                   int weight_shift) const;

  int unit_index() const { return unit_index_; }

 private:
  const CdgaPresentation* p_;
  std::vector<CgaMonomial> monomials_;
  std::map<CgaMonomial, int> index_;
  GradedSlice slice_;
  int unit_index_ = -1;
};

// Cohomology of the presentation on `request`; requires one degree of slack
// at the top of the presentation window (throws otherwise).
CohomologyReport cga_cohomology(const CdgaPresentation& p, const DegreeWindow& request);

// Matrix of the algebra morphism source -> target fixed multiplicatively by
// `values` (one target element per source generator, in canonical generator
// order), truncated in the target window.  Each value must be homogeneous of
// its generator's degree and weight; chain-map-ness is not assumed here.
LinearMapSlice cdga_map_matrix(const CgaBasis& source, const CgaBasis& target,
                               const std::vector<CgaElement>& values);

}  // namespace wrht
