#include "wrht/barcobar.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wrht {

namespace {

int parity(int n) { return ((n % 2) + 2) % 2; }

// Product of mult! over the distinct entries of a weakly increasing tuple:
// the symmetric-power normalization between bar coefficients and monomial
// coefficients.
Rational tuple_symmetry_factor(const std::vector<int>& tuple) {
  Rational f(1);
  int run = 1;
  for (size_t i = 1; i < tuple.size(); ++i) {
    if (tuple[i] == tuple[i - 1]) {
      ++run;
      f *= run;
    } else {
      run = 1;
    }
  }
  return f;
}

// Standard factorization split of a Lyndon word (the longest proper suffix
// that is Lyndon), matching the bracketing FreeLie uses for basis words.
size_t lyndon_split(const std::vector<int>& w) {
  for (size_t i = 1; i < w.size(); ++i)
    if (is_lyndon({w.begin() + static_cast<long>(i), w.end()})) return i;
  throw std::logic_error("word has no Lyndon suffix");
}

// Image of a basis word under the Lie algebra map sending generator i to
// values[i]: leaves are replaced and the standard bracketing is re-formed
// in the target.
LieElement eval_word(const FreeLie& target, const std::vector<LieElement>& values,
                     const LieWord& w) {
  if (w.square) {
    const LieElement u = eval_word(target, values, LieWord{w.word, false});
    return target.bracket(u, u);
  }
  if (w.word.size() == 1) return values.at(w.word[0]);
  const size_t k = lyndon_split(w.word);
  const LieWord u{{w.word.begin(), w.word.begin() + static_cast<long>(k)}, false};
  const LieWord v{{w.word.begin() + static_cast<long>(k), w.word.end()}, false};
  return target.bracket(eval_word(target, values, u), eval_word(target, values, v));
}

// Quotient by the ideal of degrees above `top` (d-stable, since d raises
// degree; products landing above `top` are already zero in the quotient).
FdAlgebra truncate_above(const FdAlgebra& a, int top) {
  std::vector<int> newidx(a.dim(), -1);
  FdAlgebra out;
  out.space.window = {a.space.window.min_degree, std::min(a.space.window.max_degree, top)};
  for (int i = 0; i < a.dim(); ++i) {
    if (a.space.degree(i) > top) continue;
    newidx[i] = out.space.dim();
    out.space.basis.push_back(a.space.basis[i]);
  }
  out.unit = a.unit >= 0 ? newidx[a.unit] : -1;
  out.commutative = a.commutative;
  out.d = SparseMatrix(out.space.dim(), out.space.dim());
  for (int r = 0; r < a.dim(); ++r) {
    if (newidx[r] < 0) continue;
    for (const auto& [c, v] : a.d.row(r))
      if (newidx[c] >= 0) out.d.set(newidx[r], newidx[c], v);
  }
  for (const auto& [key, value] : a.product) {
    const auto [i, j] = key;
    if (newidx[i] < 0 || newidx[j] < 0) continue;
    SparseVec kept;
    for (const auto& [t, c] : value)
      if (newidx[t] >= 0) kept.emplace(newidx[t], c);
    if (!kept.empty()) out.set_product(newidx[i], newidx[j], std::move(kept));
  }
  return out;
}

}  // namespace

CeAlgebra ce_algebra(const OoStructure& l, const DegreeWindow& window) {
  if (l.kind() != OpKind::lie)
    throw std::invalid_argument("ce_algebra expects a lie-kind structure");
  const GradedSlice& s = l.space();
  s.validate();
  std::set<std::string> labels;
  int lo = 0;
  for (int i = 0; i < s.dim(); ++i) {
    if (s.degree(i) > -1)
      throw std::invalid_argument("ce_algebra input must live in degrees <= -1; '" +
                                  s.basis[i].label + "' sits in degree " +
                                  std::to_string(s.degree(i)));
    if (!labels.insert(s.basis[i].label).second)
      throw std::invalid_argument("duplicate basis label '" + s.basis[i].label + "'");
    lo = std::min(lo, s.degree(i));
  }
  const int need = s.dim() == 0 ? 0 : 2 - lo;
  if (window.max_degree < need)
    throw std::invalid_argument("ce window too small to close d: the dual of degree " +
                                std::to_string(lo) + " needs the window to reach degree " +
                                std::to_string(need));

  std::vector<CgaGenerator> gens;
  gens.reserve(s.dim());
  for (int i = 0; i < s.dim(); ++i)
    gens.push_back({s.basis[i].label, 1 - s.degree(i), -s.weight(i)});
  CdgaPresentation pres(std::move(gens), window);

  std::vector<int> gen_of(s.dim(), -1);
  std::vector<int> primal(s.dim(), -1);
  for (int i = 0; i < s.dim(); ++i) {
    gen_of[i] = pres.generator_index(s.basis[i].label).value();
    primal[gen_of[i]] = i;
  }

  // d collects, for each generator dual to x_j, every stored operation with
  // output x_j.  In the bar picture the coefficient is sign-free up to one
  // global factor: the monomial is the product of the input duals in tuple
  // order (the CGA product supplies the Koszul reordering sign), divided by
  // the symmetry factor of the tuple, and negated when the dual generator
  // has even degree.
  std::vector<CgaElement> d_acc(s.dim());
  for (int m = 1; m <= l.arity_bound(); ++m) {
    if (!l.arity_used(m)) continue;
    for (const auto& [tuple, value] : l.bar_ops(m)) {
      CgaElement mono;
      mono.add_term({}, Rational(1));
      for (int idx : tuple) {
        CgaElement factor;
        factor.add_term({gen_of[idx]}, Rational(1));
        mono = pres.multiply(mono, factor);
      }
      if (mono.is_zero()) continue;
      const Rational symmetry = tuple_symmetry_factor(tuple);
      for (const auto& [j, c] : value) {
        Rational coef = c / symmetry;
        if (parity(1 - s.degree(j)) == 0) coef = -coef;
        d_acc[gen_of[j]] += pres.scalar_multiple(mono, coef);
      }
    }
  }
  for (int g = 0; g < static_cast<int>(d_acc.size()); ++g)
    pres.set_differential(g, std::move(d_acc[g]));

  const CheckReport check = pres.check_presentation();
  if (!check.ok)
    throw std::invalid_argument("ce_algebra: input operations are not coherent: " +
                                check.failures.front());
  return CeAlgebra{std::move(pres), std::move(primal)};
}

CeAlgebra ce_algebra(const DglaPresentation& l, const DegreeWindow& window) {
  DglaBasis basis(l);
  return ce_algebra(oo_from_dgla(basis, 2), window);
}

QuillenDgla quillen_dgla(const FdAlgebra& a, const DegreeWindow& window) {
  const CheckReport valid = check_fdalgebra(a);
  if (!valid.ok)
    throw std::invalid_argument("quillen_dgla: input algebra is invalid: " +
                                valid.failures.front());
  if (a.unit < 0) throw std::invalid_argument("quillen_dgla needs a unital algebra");
  if (!a.commutative) throw std::invalid_argument("quillen_dgla needs a commutative algebra");
  int top = 0;
  for (int i = 0; i < a.dim(); ++i) {
    if (i == a.unit) continue;
    const int n = a.space.degree(i);
    if (n <= 0)
      throw std::invalid_argument("quillen_dgla input is not connected: '" +
                                  a.space.basis[i].label + "' sits in degree " +
                                  std::to_string(n));
    if (n == 1)
      throw std::invalid_argument("quillen_dgla input is not simply connected: '" +
                                  a.space.basis[i].label + "' sits in degree 1");
    top = std::max(top, n);
  }
  if (top > 0 && window.min_degree > 1 - top)
    throw std::invalid_argument("quillen window must reach degree " + std::to_string(1 - top) +
                                " to hold every generator");

  std::vector<Generator> gens;
  for (int i = 0; i < a.dim(); ++i) {
    if (i == a.unit) continue;
    gens.push_back({a.space.basis[i].label, 1 - a.space.degree(i), -a.space.weight(i)});
  }
  DglaPresentation pres(std::move(gens), window);
  const FreeLie& lie = pres.lie();

  std::vector<int> gid_of(a.dim(), -1);
  std::vector<int> primal(pres.generator_count(), -1);
  for (int i = 0; i < a.dim(); ++i) {
    if (i == a.unit) continue;
    gid_of[i] = pres.generator_index(a.space.basis[i].label).value();
    primal[gid_of[i]] = i;
  }

  // d(s e_i^vee) dualizes d_A and the product of A: the linear part reads
  // the matrix of d_A into e_i, the quadratic part reads every product of
  // augmentation-ideal elements landing on e_i.  Signs come from pulling
  // the suspension through the dual pairing; the 1/2 normalizes the double
  // count of each unordered pair in a commutative product table.
  std::vector<LieElement> d_acc(pres.generator_count());
  for (int i = 0; i < a.dim(); ++i) {
    if (i == a.unit) continue;
    for (const auto& [k, c] : a.d.row(i)) {
      LieElement t = lie.generator_element(gid_of.at(k));
      Rational coef = c;
      if (parity(a.space.degree(i)) != 0) coef = -coef;
      t *= coef;
      d_acc[gid_of[i]] += t;
    }
  }
  for (const auto& [key, value] : a.product) {
    const auto [j, k] = key;
    if (j == a.unit || k == a.unit) continue;
    const LieElement br =
        lie.bracket(lie.generator_element(gid_of[j]), lie.generator_element(gid_of[k]));
    if (br.is_zero()) continue;
    const int flip = parity(a.space.degree(j) * (a.space.degree(k) + 1));
    for (const auto& [i, mu] : value) {
      if (i == a.unit) continue;
      Rational coef = mu / Rational(2);
      if (flip != 0) coef = -coef;
      LieElement t = br;
      t *= coef;
      d_acc[gid_of[i]] += t;
    }
  }
  for (int g = 0; g < pres.generator_count(); ++g) pres.set_differential(g, std::move(d_acc[g]));

  const CheckReport check = pres.check_dgla();
  if (!check.ok)
    throw std::invalid_argument("quillen_dgla: construction failed validation: " +
                                check.failures.front());
  return QuillenDgla{std::move(pres), std::move(primal)};
}

CheckReport counit_quasiiso_check(const DglaPresentation& l, const DegreeWindow& window) {
  if (window.min_degree > window.max_degree)
    throw std::invalid_argument("empty comparison window");
  if (window.max_degree > -1)
    throw std::invalid_argument(
        "window slack insufficient: lie-side comparison must stay in degrees <= -1");
  const int lo = l.window().min_degree;
  if (lo > window.min_degree - 1)
    throw std::invalid_argument("window slack insufficient: comparing down to degree " +
                                std::to_string(window.min_degree) +
                                " needs the dgla presented to degree " +
                                std::to_string(window.min_degree - 1));

  // The two-sided composite: dualize the whole windowed slice, then apply
  // the Quillen construction to the resulting finite-dimensional algebra.
  // Its generators reach one degree below the window bottom; that fringe
  // exists only to close d and is excluded from the chain-rule comparison.
  const CeAlgebra ce = ce_algebra(l, DegreeWindow{0, 2 - lo});
  const CgaBasis cb(ce.presentation);
  const FdAlgebra fd = fd_from_cga(cb);
  const QuillenDgla q = quillen_dgla(fd, DegreeWindow{lo - 1, -1});

  const DglaBasis lb(l);
  const DglaBasis qb(q.presentation);

  // The counit kills the dual of every decomposable and double-desuspends
  // the dual of a single generator: s (xi_x)^vee -> -x, extended as a map
  // of Lie algebras.
  std::vector<LieElement> values(q.presentation.generator_count());
  for (int g = 0; g < q.presentation.generator_count(); ++g) {
    const CgaMonomial& mono = cb.monomials()[q.primal_index[g]];
    if (mono.size() != 1) continue;
    values[g].add_term(lb.words()[ce.primal_index[mono[0]]], Rational(-1));
  }

  CheckReport report;
  SparseMatrix counit(lb.dim(), qb.dim());
  for (int c = 0; c < qb.dim(); ++c) {
    const SparseVec col = lb.coords(eval_word(l.lie(), values, qb.words()[c]));
    for (const auto& [r, v] : col) {
      counit.set(r, c, v);
      if (lb.slice().degree(r) != qb.slice().degree(c) ||
          lb.slice().weight(r) != qb.slice().weight(c))
        report.fail("counit moves '" + q.presentation.lie().word_label(qb.words()[c]) +
                    "' across blocks");
    }
  }

  const SparseMatrix lhs = counit * qb.differential_matrix();
  const SparseMatrix rhs = lb.differential_matrix() * counit;
  for (int r = 0; r < lb.dim() && report.ok; ++r) {
    auto mismatch = [&](int c) {
      return qb.slice().degree(c) >= lo && vec_coeff(lhs.row(r), c) != vec_coeff(rhs.row(r), c);
    };
    for (const auto& [c, v] : lhs.row(r)) {
      (void)v;
      if (mismatch(c)) {
        report.fail("counit fails the chain rule on '" +
                    q.presentation.lie().word_label(qb.words()[c]) + "'");
        break;
      }
    }
    for (const auto& [c, v] : rhs.row(r)) {
      (void)v;
      if (mismatch(c)) {
        report.fail("counit fails the chain rule on '" +
                    q.presentation.lie().word_label(qb.words()[c]) + "'");
        break;
      }
    }
  }
  if (!report.ok) return report;

  const CohomologyReport h_up = dgla_cohomology(q.presentation, window);
  const CohomologyReport h_down = dgla_cohomology(l, window);
  compare_cohomology(h_up, h_down, counit, lb.slice(), lb.differential_matrix(), report);
  return report;
}

CheckReport counit_quasiiso_check(const FdAlgebra& a, const DegreeWindow& window) {
  if (window.min_degree != 0)
    throw std::invalid_argument("algebra-side comparison must start at degree 0");
  const int b = window.max_degree;
  if (b < 1) throw std::invalid_argument("algebra-side comparison needs max degree >= 1");
  if (a.space.window.min_degree > 0 || a.space.window.max_degree < b + 1)
    throw std::invalid_argument(
        "window slack insufficient: the algebra must be presented through degree " +
        std::to_string(b + 1));

  // The two-sided composite over the quotient of A by degrees above b+1
  // (invisible to cohomology through degree b).
  const FdAlgebra at = truncate_above(a, b + 1);
  const QuillenDgla q = quillen_dgla(at, DegreeWindow{-b, -1});
  const CeAlgebra ce = ce_algebra(q.presentation, DegreeWindow{0, b + 2});
  const CgaBasis cb(ce.presentation);
  const DglaBasis qb(q.presentation);

  // The counit kills the dual of every word of length >= 2 and sends the
  // dual of a single generator back to minus the primal class, extended
  // multiplicatively.
  std::vector<SparseVec> values(ce.presentation.generator_count());
  for (int g = 0; g < ce.presentation.generator_count(); ++g) {
    const LieWord& word = qb.words()[ce.primal_index[g]];
    if (word.square || word.word.size() != 1) continue;
    values[g] = vec_scale(unit_vec(q.primal_index[word.word[0]]), Rational(-1));
  }

  CheckReport report;
  SparseMatrix counit(at.dim(), cb.dim());
  for (int c = 0; c < cb.dim(); ++c) {
    SparseVec img = unit_vec(at.unit);
    for (int gid : cb.monomials()[c]) {
      if (values[gid].empty()) {
        img.clear();
        break;
      }
      img = at.multiply(img, values[gid]);
    }
    for (const auto& [r, v] : img) {
      counit.set(r, c, v);
      if (at.space.degree(r) != cb.slice().degree(c) ||
          at.space.weight(r) != cb.slice().weight(c))
        report.fail("counit moves '" + ce.presentation.mono_label(cb.monomials()[c]) +
                    "' across blocks");
    }
  }

  // Multiplicative by construction on generators; verified on basis pairs.
  for (int i = 0; i < cb.dim() && report.ok; ++i) {
    const CgaElement ei = cb.element(unit_vec(i));
    for (int j = i; j < cb.dim(); ++j) {
      const CgaElement prod = ce.presentation.multiply(ei, cb.element(unit_vec(j)));
      const SparseVec image_of_product = counit.apply(cb.coords(prod));
      const SparseVec product_of_images =
          at.multiply(counit.apply(unit_vec(i)), counit.apply(unit_vec(j)));
      if (image_of_product != product_of_images) {
        report.fail("counit is not multiplicative on " +
                    ce.presentation.mono_label(cb.monomials()[i]) + " * " +
                    ce.presentation.mono_label(cb.monomials()[j]));
        break;
      }
    }
  }
  if (!report.ok) return report;

  const SparseMatrix lhs = counit * cb.differential_matrix();
  const SparseMatrix rhs = at.d * counit;
  for (int r = 0; r < at.dim() && report.ok; ++r) {
    auto mismatch = [&](int c) { return vec_coeff(lhs.row(r), c) != vec_coeff(rhs.row(r), c); };
    for (const auto& [c, v] : lhs.row(r)) {
      (void)v;
      if (mismatch(c)) {
        report.fail("counit fails the chain rule on '" +
                    ce.presentation.mono_label(cb.monomials()[c]) + "'");
        break;
      }
    }
    for (const auto& [c, v] : rhs.row(r)) {
      (void)v;
      if (mismatch(c)) {
        report.fail("counit fails the chain rule on '" +
                    ce.presentation.mono_label(cb.monomials()[c]) + "'");
        break;
      }
    }
  }
  if (!report.ok) return report;

  const CohomologyReport h_up = cga_cohomology(ce.presentation, DegreeWindow{0, b});
  const CohomologyReport h_down = cohomology(at.space, at.d, DegreeWindow{0, b});
  compare_cohomology(h_up, h_down, counit, at.space, at.d, report);
  return report;
}

}  // namespace wrht
