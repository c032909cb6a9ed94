#include "wrht/cga.hpp"

#include <algorithm>
#include <stdexcept>

namespace wrht {

void CgaElement::add_term(const CgaMonomial& m, const Rational& c) {
  if (wrht::is_zero(c)) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
  } else {
    it->second += c;
    if (wrht::is_zero(it->second)) terms.erase(it);
  }
}

CgaElement& CgaElement::operator+=(const CgaElement& other) {
  for (const auto& [m, c] : other.terms) add_term(m, c);
  return *this;
}

CgaElement& CgaElement::operator*=(const Rational& c) {
  if (wrht::is_zero(c)) {
    terms.clear();
    return *this;
  }
  for (auto& [m, v] : terms) v *= c;
  return *this;
}

CdgaPresentation::CdgaPresentation(std::vector<CgaGenerator> generators, DegreeWindow window)
    : gens_(std::move(generators)), window_(window) {
  std::sort(gens_.begin(), gens_.end(), [](const CgaGenerator& a, const CgaGenerator& b) {
    return std::tie(a.degree, a.name) < std::tie(b.degree, b.name);
  });
  for (size_t i = 0; i + 1 < gens_.size(); ++i)
    if (gens_[i].name == gens_[i + 1].name && gens_[i].degree == gens_[i + 1].degree)
      throw std::invalid_argument("duplicate generator name: " + gens_[i].name);
  for (const auto& g : gens_)
    if (g.degree < 1)
      throw std::invalid_argument("generator '" + g.name + "' must have positive degree");
  if (window_.min_degree != 0)
    throw std::invalid_argument("cdga window must start at degree 0");
  d_of_.assign(gens_.size(), CgaElement{});
}

std::optional<int> CdgaPresentation::generator_index(const std::string& name) const {
  for (int i = 0; i < generator_count(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

void CdgaPresentation::set_differential(int id, CgaElement value) {
  d_of_.at(id) = std::move(value);
}

bool CdgaPresentation::is_simply_connected() const {
  for (const auto& g : gens_)
    if (g.degree < 2) return false;
  return true;
}

int CdgaPresentation::mono_degree(const CgaMonomial& m) const {
  int d = 0;
  for (int id : m) d += gens_.at(id).degree;
  return d;
}

int CdgaPresentation::mono_weight(const CgaMonomial& m) const {
  int w = 0;
  for (int id : m) w += gens_.at(id).weight;
  return w;
}

std::string CdgaPresentation::mono_label(const CgaMonomial& m) const {
  if (m.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < m.size();) {
    size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    if (!out.empty()) out += "*";
    out += gens_[m[i]].name;
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::optional<std::pair<CgaMonomial, int>> CdgaPresentation::multiply_monomials(
    const CgaMonomial& a, const CgaMonomial& b) const {
  CgaMonomial out = a;
  int sign = 1;
  for (int id : b) {
    const bool odd = gens_[id].degree % 2 != 0;
    auto pos = std::upper_bound(out.begin(), out.end(), id);
    if (odd) {
      if (pos != out.begin() && *(pos - 1) == id) return std::nullopt;  // odd square
      // Koszul sign: id moves left past the suffix [pos, end); only odd
      // factors crossed contribute a sign.
      int crossings = 0;
      for (auto it = pos; it != out.end(); ++it)
        if (gens_[*it].degree % 2 != 0) ++crossings;
      if (crossings % 2 != 0) sign = -sign;
    }
    out.insert(pos, id);
  }
  return std::make_pair(out, sign);
}

CgaElement CdgaPresentation::multiply(const CgaElement& a, const CgaElement& b) const {
  CgaElement out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      auto prod = multiply_monomials(ma, mb);
      if (!prod) continue;
      if (mono_degree(prod->first) > window_.max_degree) continue;  // quotient truncation
      out.add_term(prod->first, ca * cb * rat(prod->second));
    }
  return out;
}

CgaElement CdgaPresentation::scalar_multiple(const CgaElement& a, const Rational& c) const {
  CgaElement out = a;
  out *= c;
  return out;
}

CgaElement CdgaPresentation::apply_derivation(const std::vector<CgaElement>& values,
                                              int degree_shift, const CgaElement& x) const {
  if (static_cast<int>(values.size()) != generator_count())
    throw std::invalid_argument("derivation values size mismatch");
  const bool odd_shift = degree_shift % 2 != 0;
  CgaElement out;
  for (const auto& [m, c] : x.terms) {
    int prefix_degree = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      const CgaElement& theta = values[m[i]];
      if (!theta.is_zero()) {
        int sign = (odd_shift && prefix_degree % 2 != 0) ? -1 : 1;
        CgaElement piece;
        piece.add_term(CgaMonomial(m.begin(), m.begin() + i), c * rat(sign));
        piece = multiply(piece, theta);
        CgaElement suffix;
        suffix.add_term(CgaMonomial(m.begin() + i + 1, m.end()), rat(1));
        piece = multiply(piece, suffix);
        out += piece;
      }
      prefix_degree += gens_[m[i]].degree;
    }
  }
  return out;
}

CgaElement CdgaPresentation::apply_d(const CgaElement& x) const {
  return apply_derivation(d_of_, 1, x);
}

CheckReport CdgaPresentation::check_presentation() const {
  CheckReport report;
  for (int i = 0; i < generator_count(); ++i) {
    const auto& g = gens_[i];
    const CgaElement& dv = d_of_[i];
    for (const auto& [m, c] : dv.terms) {
      (void)c;
      if (mono_degree(m) != g.degree + 1)
        report.fail("d(" + g.name + ") is not homogeneous of degree " +
                    std::to_string(g.degree + 1));
      if (mono_weight(m) != g.weight)
        report.fail("d(" + g.name + ") does not preserve weight");
    }
    if (g.degree + 2 > window_.max_degree)
      continue;  // d^2 lands outside the window; nothing to check here
    CgaElement ddv = apply_d(dv);
    if (!ddv.is_zero())
      report.fail("d^2(" + g.name + ") = " + mono_label(ddv.terms.begin()->first) + " + ... != 0");
  }
  return report;
}

namespace {

void enumerate_monomials(const CdgaPresentation& p, int from_id, int degree_left,
                         CgaMonomial& current, std::vector<CgaMonomial>& out) {
  out.push_back(current);
  for (int id = from_id; id < p.generator_count(); ++id) {
    const auto& g = p.generator(id);
    if (g.degree > degree_left) continue;
    current.push_back(id);
    // Odd generators square to zero, so they may appear at most once.
    enumerate_monomials(p, g.degree % 2 != 0 ? id + 1 : id, degree_left - g.degree, current, out);
    current.pop_back();
  }
}

}  // namespace

CgaBasis::CgaBasis(const CdgaPresentation& p) : p_(&p) {
  CgaMonomial current;
  enumerate_monomials(p, 0, p.window().max_degree, current, monomials_);
  std::sort(monomials_.begin(), monomials_.end(),
            [&](const CgaMonomial& a, const CgaMonomial& b) {
              int da = p.mono_degree(a), db = p.mono_degree(b);
              if (da != db) return da < db;
              int wa = p.mono_weight(a), wb = p.mono_weight(b);
              if (wa != wb) return wa < wb;
              return a < b;
            });
  slice_.window = p.window();
  for (int i = 0; i < static_cast<int>(monomials_.size()); ++i) {
    index_.emplace(monomials_[i], i);
    slice_.basis.push_back(
        {p.mono_label(monomials_[i]), p.mono_degree(monomials_[i]), p.mono_weight(monomials_[i])});
    if (monomials_[i].empty()) unit_index_ = i;
  }
}

std::optional<int> CgaBasis::index_of(const CgaMonomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVec CgaBasis::coords(const CgaElement& x) const {
  SparseVec v;
  for (const auto& [m, c] : x.terms) {
    auto idx = index_of(m);
    if (!idx) {
      if (p_->mono_degree(m) > p_->window().max_degree) continue;  // truncated away
      throw std::runtime_error("element term not in window basis: " + p_->mono_label(m));
    }
    v[*idx] = c;
  }
  return v;
}

CgaElement CgaBasis::element(const SparseVec& v) const {
  CgaElement x;
  for (const auto& [i, c] : v) x.add_term(monomials_.at(i), c);
  return x;
}

SparseMatrix CgaBasis::differential_matrix() const {
  SparseMatrix d(dim(), dim());
  for (int j = 0; j < dim(); ++j) {
    CgaElement x;
    x.add_term(monomials_[j], rat(1));
    for (const auto& [i, c] : coords(p_->apply_d(x))) d.set(i, j, c);
  }
  return d;
}

SparseMatrix CgaBasis::derivation_matrix(const std::vector<CgaElement>& values,
                                         int degree_shift) const {
  SparseMatrix out(dim(), dim());
  for (int j = 0; j < dim(); ++j) {
    CgaElement x;
    x.add_term(monomials_[j], rat(1));
    for (const auto& [i, c] : coords(p_->apply_derivation(values, degree_shift, x)))
      out.set(i, j, c);
  }
  return out;
}

LinearMapSlice CgaBasis::extend_derivation(const std::vector<CgaElement>& values, int degree_shift,
                                           int weight_shift) const {
  if (static_cast<int>(values.size()) != p_->generator_count())
    throw std::invalid_argument("derivation values size mismatch");
  for (int i = 0; i < p_->generator_count(); ++i) {
    const auto& g = p_->generator(i);
    for (const auto& [m, c] : values[i].terms) {
      (void)c;
      if (p_->mono_degree(m) != g.degree + degree_shift ||
          p_->mono_weight(m) != g.weight + weight_shift)
        throw std::invalid_argument("derivation value for '" + g.name +
                                    "' has the wrong degree or weight");
    }
  }
  LinearMapSlice out;
  out.source = slice_;
  out.target = slice_;
  out.degree_shift = degree_shift;
  out.weight_shift = weight_shift;
  out.matrix = derivation_matrix(values, degree_shift);
  out.validate();
  return out;
}

CohomologyReport cga_cohomology(const CdgaPresentation& p, const DegreeWindow& request) {
  if (request.max_degree + 1 > p.window().max_degree)
    throw std::invalid_argument(
        "cohomology request needs one degree of slack below the presentation window top");
  if (request.min_degree < 0) throw std::invalid_argument("cohomology request below degree 0");
  CgaBasis basis(p);
  return cohomology(basis.slice(), basis.differential_matrix(), request);
}

LinearMapSlice cdga_map_matrix(const CgaBasis& source, const CgaBasis& target,
                               const std::vector<CgaElement>& values) {
  const CdgaPresentation& sp = source.presentation();
  const CdgaPresentation& tp = target.presentation();
  if (static_cast<int>(values.size()) != sp.generator_count())
    throw std::invalid_argument("morphism values size mismatch");
  for (int i = 0; i < sp.generator_count(); ++i) {
    const auto& g = sp.generator(i);
    for (const auto& [m, c] : values[i].terms) {
      (void)c;
      if (tp.mono_degree(m) != g.degree || tp.mono_weight(m) != g.weight)
        throw std::invalid_argument("morphism value for '" + g.name +
                                    "' has the wrong degree or weight");
    }
  }
  SparseMatrix m(target.dim(), source.dim());
  for (int col = 0; col < source.dim(); ++col) {
    CgaElement image;
    image.add_term({}, Rational(1));
    for (int id : source.monomials()[col]) image = tp.multiply(image, values[id]);
    for (const auto& [t, c] : target.coords(image)) m.set(t, col, c);
  }
  LinearMapSlice out;
  out.source = source.slice();
  out.target = target.slice();
  out.matrix = std::move(m);
  out.validate();
  return out;
}

}  // namespace wrht
