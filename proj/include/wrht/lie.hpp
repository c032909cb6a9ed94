#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wrht/grading.hpp"

namespace wrht {

// Basis element of the free graded Lie algebra: a Lyndon word over the
// generator alphabet bracketed by its standard factorization, or the
// self-bracket [b(w), b(w)] when b(w) has odd degree ("square" words, which
// the super-Lyndon basis keeps as independent elements).
struct LieWord {
  std::vector<int> word;  // Lyndon word of generator ids
  bool square = false;    // true: stands for [b(word), b(word)]

  auto operator<=>(const LieWord&) const = default;
};

struct LieElement {
  std::map<LieWord, Rational> terms;

  bool is_zero() const { return terms.empty(); }
  void add_term(const LieWord& w, const Rational& c);
  LieElement& operator+=(const LieElement& other);
  LieElement& operator*=(const Rational& c);
  bool operator==(const LieElement&) const = default;
};

using TensorWord = std::vector<int>;  // word in the tensor algebra on the generators
using TensorPoly = std::map<TensorWord, Rational>;

bool is_lyndon(const std::vector<int>& w);

// Free graded Lie algebra L(W) on generators of degree <= -1, materialized
// inside a degree window [min .. -1].  Brackets below the window bottom are
// truncated away (the quotient by the ideal of low degrees).  Elements are
// normalized through their images in the tensor algebra -- the char-0
// embedding [x,y] -> xy - (-1)^{|x||y|} yx -- one content multiset at a
// time, with the per-content solver cached.
class FreeLie {
 public:
  FreeLie(std::vector<Generator> generators, DegreeWindow window);

  int generator_count() const { return static_cast<int>(gens_.size()); }
  const Generator& generator(int id) const { return gens_.at(id); }
  const std::vector<Generator>& generators() const { return gens_; }
  std::optional<int> generator_index(const std::string& name) const;
  const DegreeWindow& window() const { return window_; }

  int word_degree(const LieWord& w) const;
  int word_weight(const LieWord& w) const;
  int word_length(const LieWord& w) const;  // bracket arity; squares count double
  std::string word_label(const LieWord& w) const;

  LieElement generator_element(int id) const;
  LieElement bracket(const LieElement& x, const LieElement& y) const;

  // Super-Lyndon basis words of the given degree (cached).
  const std::vector<LieWord>& basis_in_degree(int n) const;

  TensorPoly expand(const LieWord& w) const;        // image in the tensor algebra
  LieElement normalize(const TensorPoly& p) const;  // inverse, window-truncated

 private:
  // Per-content normalization data: basis words whose content is the given
  // generator multiset, coordinates on the distinct permutations of that
  // multiset, and a solver over the expansion matrix.
  struct Bucket {
    std::vector<LieWord> basis;
    std::map<TensorWord, int> tensor_index;
    RrefSolver solver;
  };

  const Bucket& bucket_for(const std::vector<int>& content) const;

  std::vector<Generator> gens_;
  DegreeWindow window_;
  mutable std::map<LieWord, TensorPoly> expand_cache_;
  mutable std::map<std::vector<int>, Bucket> buckets_;
  mutable std::map<int, std::vector<LieWord>> basis_cache_;
};

// Presentation of a dgla (L(W), d) with d determined on generators.
class DglaPresentation {
 public:
  DglaPresentation(std::vector<Generator> generators, DegreeWindow window);

  const FreeLie& lie() const { return lie_; }
  const DegreeWindow& window() const { return lie_.window(); }
  int generator_count() const { return lie_.generator_count(); }
  std::optional<int> generator_index(const std::string& name) const {
    return lie_.generator_index(name);
  }

  void set_differential(int id, LieElement value);
  const LieElement& differential(int id) const { return d_of_.at(id); }

  // Extends generator values to a derivation of the stated degree shift.
  LieElement apply_derivation(const std::vector<LieElement>& values, int degree_shift,
                              const LieElement& x) const;
  LieElement apply_d(const LieElement& x) const;

  // d degree +1 and weight-preserving on generators, d^2 = 0, and the
  // Leibniz rule for d over the bracket on all windowed basis pairs.
  CheckReport check_dgla() const;

 private:
  LieElement derive_word(const std::vector<LieElement>& values, int degree_shift,
                         const LieWord& w, std::map<LieWord, LieElement>& memo) const;

  FreeLie lie_;
  std::vector<LieElement> d_of_;
};

// Materialized basis of a dgla presentation across its window.
class DglaBasis {
 public:
  explicit DglaBasis(const DglaPresentation& p);

  const DglaPresentation& presentation() const { return *p_; }
  const std::vector<LieWord>& words() const { return words_; }
  int dim() const { return static_cast<int>(words_.size()); }
  std::optional<int> index_of(const LieWord& w) const;
  const GradedSlice& slice() const { return slice_; }

  SparseVec coords(const LieElement& x) const;  // window-truncated
  LieElement element(const SparseVec& v) const;

  SparseMatrix differential_matrix() const;
  SparseMatrix derivation_matrix(const std::vector<LieElement>& values, int degree_shift) const;
  LinearMapSlice extend_derivation(const std::vector<LieElement>& values, int degree_shift,
                                   int weight_shift) const;

 private:
  const DglaPresentation* p_;
  std::vector<LieWord> words_;
  std::map<LieWord, int> index_;
  GradedSlice slice_;
};

// Cohomology on `request`; needs one degree of slack at the bottom of the
// presentation window (the top is exact: nothing lives above degree -1).
CohomologyReport dgla_cohomology(const DglaPresentation& p, const DegreeWindow& request);

// Gamma^k in the given degree: the span of basis words using at least k
// generator inputs, as coordinate vectors in `basis`.
std::vector<SparseVec> gamma_filtration(const DglaBasis& basis, int k, int degree);

// Smallest k with Gamma^k = 0 in the given degree (free Lie algebras on
// negative-degree generators are always degreewise nilpotent in a window).
int gamma_stabilizing_k(const DglaBasis& basis, int degree);

}  // namespace wrht
