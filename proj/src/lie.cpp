#include "wrht/lie.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace wrht {

void LieElement::add_term(const LieWord& w, const Rational& c) {
  if (wrht::is_zero(c)) return;
  auto it = terms.find(w);
  if (it == terms.end()) {
    terms.emplace(w, c);
  } else {
    it->second += c;
    if (wrht::is_zero(it->second)) terms.erase(it);
  }
}

LieElement& LieElement::operator+=(const LieElement& other) {
  for (const auto& [w, c] : other.terms) add_term(w, c);
  return *this;
}

LieElement& LieElement::operator*=(const Rational& c) {
  if (wrht::is_zero(c)) {
    terms.clear();
    return *this;
  }
  for (auto& [w, v] : terms) v *= c;
  return *this;
}

bool is_lyndon(const std::vector<int>& w) {
  if (w.empty()) return false;
  for (size_t i = 1; i < w.size(); ++i)
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + i, w.end())) return false;
  return true;
}

namespace {

// Standard factorization w = uv of a Lyndon word of length >= 2: v is the
// longest proper suffix that is itself Lyndon (then u is Lyndon too).
size_t split_point(const std::vector<int>& w) {
  for (size_t i = 1; i < w.size(); ++i)
    if (is_lyndon({w.begin() + static_cast<long>(i), w.end()})) return i;
  throw std::logic_error("word has no Lyndon suffix");
}

void poly_add_scaled(TensorPoly& dst, const TensorPoly& src, const Rational& c) {
  if (wrht::is_zero(c)) return;
  for (const auto& [w, v] : src) {
    auto it = dst.find(w);
    if (it == dst.end()) {
      dst.emplace(w, v * c);
    } else {
      it->second += v * c;
      if (wrht::is_zero(it->second)) dst.erase(it);
    }
  }
}

TensorPoly concat(const TensorPoly& a, const TensorPoly& b) {
  TensorPoly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      TensorWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      auto it = out.find(w);
      if (it == out.end()) {
        out.emplace(std::move(w), ca * cb);
      } else {
        it->second += ca * cb;
        if (wrht::is_zero(it->second)) out.erase(it);
      }
    }
  return out;
}

}  // namespace

FreeLie::FreeLie(std::vector<Generator> generators, DegreeWindow window)
    : gens_(std::move(generators)), window_(window) {
  std::sort(gens_.begin(), gens_.end(), [](const Generator& a, const Generator& b) {
    return std::tie(a.degree, a.name) < std::tie(b.degree, b.name);
  });
  for (size_t i = 0; i + 1 < gens_.size(); ++i)
    if (gens_[i].name == gens_[i + 1].name)
      throw std::invalid_argument("duplicate generator name: " + gens_[i].name);
  for (const auto& g : gens_) {
    if (g.degree > -1)
      throw std::invalid_argument("Lie generator '" + g.name + "' must have degree <= -1");
    if (!window_.contains(g.degree))
      throw std::invalid_argument("Lie generator '" + g.name + "' falls outside the window");
  }
  if (window_.max_degree > -1 || window_.min_degree > window_.max_degree)
    throw std::invalid_argument("Lie window must be of the form [min .. -1]");
}

std::optional<int> FreeLie::generator_index(const std::string& name) const {
  for (int i = 0; i < generator_count(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

int FreeLie::word_degree(const LieWord& w) const {
  int d = 0;
  for (int id : w.word) d += gens_.at(id).degree;
  return w.square ? 2 * d : d;
}

int FreeLie::word_weight(const LieWord& w) const {
  int p = 0;
  for (int id : w.word) p += gens_.at(id).weight;
  return w.square ? 2 * p : p;
}

int FreeLie::word_length(const LieWord& w) const {
  return static_cast<int>(w.word.size()) * (w.square ? 2 : 1);
}

std::string FreeLie::word_label(const LieWord& w) const {
  // Recursive bracketing along the standard factorization.
  std::function<std::string(const std::vector<int>&)> plain =
      [&](const std::vector<int>& v) -> std::string {
    if (v.size() == 1) return gens_[v[0]].name;
    size_t k = split_point(v);
    return "[" + plain({v.begin(), v.begin() + static_cast<long>(k)}) + "," +
           plain({v.begin() + static_cast<long>(k), v.end()}) + "]";
  };
  std::string core = plain(w.word);
  return w.square ? "[" + core + "," + core + "]" : core;
}

LieElement FreeLie::generator_element(int id) const {
  if (id < 0 || id >= generator_count()) throw std::out_of_range("generator id");
  LieElement x;
  x.add_term({{id}, false}, rat(1));
  return x;
}

TensorPoly FreeLie::expand(const LieWord& w) const {
  auto it = expand_cache_.find(w);
  if (it != expand_cache_.end()) return it->second;
  TensorPoly out;
  if (w.square) {
    TensorPoly p = expand({w.word, false});
    out = concat(p, p);
    for (auto& [tw, c] : out) c *= 2;  // [x,x] = 2 x(x)x for odd x
  } else if (w.word.size() == 1) {
    out.emplace(TensorWord{w.word[0]}, rat(1));
  } else {
    size_t k = split_point(w.word);
    LieWord u{{w.word.begin(), w.word.begin() + static_cast<long>(k)}, false};
    LieWord v{{w.word.begin() + static_cast<long>(k), w.word.end()}, false};
    TensorPoly pu = expand(u), pv = expand(v);
    out = concat(pu, pv);
    bool odd = (word_degree(u) % 2 != 0) && (word_degree(v) % 2 != 0);
    poly_add_scaled(out, concat(pv, pu), rat(odd ? 1 : -1));
  }
  expand_cache_.emplace(w, out);
  return out;
}

const FreeLie::Bucket& FreeLie::bucket_for(const std::vector<int>& content) const {
  auto it = buckets_.find(content);
  if (it != buckets_.end()) return it->second;

  std::vector<LieWord> basis;
  std::vector<int> perm = content;  // content arrives sorted
  do {
    if (is_lyndon(perm)) basis.push_back({perm, false});
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Square words [b(u), b(u)] contribute when the content doubles a
  // half-content whose bracketing has odd degree.
  std::vector<int> half;
  bool doubles = true;
  for (size_t i = 0; i < content.size() && doubles;) {
    size_t j = i;
    while (j < content.size() && content[j] == content[i]) ++j;
    if ((j - i) % 2 != 0)
      doubles = false;
    else
      half.insert(half.end(), (j - i) / 2, content[i]);
    i = j;
  }
  if (doubles && !content.empty()) {
    std::vector<int> hperm = half;
    do {
      LieWord candidate{hperm, true};
      if (is_lyndon(hperm) && word_degree({hperm, false}) % 2 != 0)
        basis.push_back(candidate);
    } while (std::next_permutation(hperm.begin(), hperm.end()));
  }
  std::sort(basis.begin(), basis.end());

  std::map<TensorWord, int> tensor_index;
  perm = content;
  int row = 0;
  do {
    tensor_index.emplace(perm, row++);
  } while (std::next_permutation(perm.begin(), perm.end()));

  SparseMatrix m(row, static_cast<int>(basis.size()));
  for (int j = 0; j < static_cast<int>(basis.size()); ++j)
    for (const auto& [tw, c] : expand(basis[j])) m.set(tensor_index.at(tw), j, c);
  RrefSolver solver(m);
  if (solver.rank() != static_cast<int>(basis.size()))
    throw std::logic_error("super-Lyndon expansions are dependent in a content bucket");

  auto [pos, ok] = buckets_.emplace(content, Bucket{std::move(basis), std::move(tensor_index),
                                                    std::move(solver)});
  (void)ok;
  return pos->second;
}

LieElement FreeLie::normalize(const TensorPoly& p) const {
  std::map<std::vector<int>, TensorPoly> by_content;
  for (const auto& [w, c] : p) {
    std::vector<int> content = w;
    std::sort(content.begin(), content.end());
    by_content[content].emplace(w, c);
  }
  LieElement out;
  for (const auto& [content, poly] : by_content) {
    int degree = 0;
    for (int id : content) degree += gens_.at(id).degree;
    if (!window_.contains(degree)) continue;  // truncated below the window
    const Bucket& bucket = bucket_for(content);
    SparseVec rhs;
    for (const auto& [w, c] : poly) rhs[bucket.tensor_index.at(w)] = c;
    auto solution = bucket.solver.solve(rhs);
    if (!solution)
      throw std::invalid_argument("tensor polynomial is not in the free Lie algebra");
    for (const auto& [j, c] : *solution) out.add_term(bucket.basis.at(j), c);
  }
  return out;
}

LieElement FreeLie::bracket(const LieElement& x, const LieElement& y) const {
  TensorPoly total;
  for (const auto& [w1, c1] : x.terms)
    for (const auto& [w2, c2] : y.terms) {
      int d1 = word_degree(w1), d2 = word_degree(w2);
      if (d1 + d2 < window_.min_degree) continue;  // lands below the window
      TensorPoly p1 = expand(w1), p2 = expand(w2);
      TensorPoly t = concat(p1, p2);
      bool odd = (d1 % 2 != 0) && (d2 % 2 != 0);
      poly_add_scaled(t, concat(p2, p1), rat(odd ? 1 : -1));
      poly_add_scaled(total, t, c1 * c2);
    }
  return normalize(total);
}

const std::vector<LieWord>& FreeLie::basis_in_degree(int n) const {
  auto it = basis_cache_.find(n);
  if (it != basis_cache_.end()) return it->second;
  if (!window_.contains(n)) throw std::invalid_argument("degree outside the Lie window");

  std::vector<std::vector<int>> lyndon;
  std::vector<int> current;
  std::function<void(int)> dfs = [&](int degree_so_far) {
    if (degree_so_far == n) {
      if (is_lyndon(current)) lyndon.push_back(current);
      return;
    }
    if (degree_so_far < n) return;  // degrees only decrease; overshot
    for (int id = 0; id < generator_count(); ++id) {
      current.push_back(id);
      dfs(degree_so_far + gens_[id].degree);
      current.pop_back();
    }
  };
  dfs(0);

  std::vector<LieWord> basis;
  for (auto& w : lyndon) basis.push_back({std::move(w), false});
  if (n % 2 == 0 && (n / 2) % 2 != 0) {
    // squares [b(u), b(u)] with |b(u)| = n/2 odd
    std::vector<std::vector<int>> halves;
    std::vector<int> cur;
    std::function<void(int)> dfs_half = [&](int degree_so_far) {
      if (degree_so_far == n / 2) {
        if (is_lyndon(cur)) halves.push_back(cur);
        return;
      }
      if (degree_so_far < n / 2) return;
      for (int id = 0; id < generator_count(); ++id) {
        cur.push_back(id);
        dfs_half(degree_so_far + gens_[id].degree);
        cur.pop_back();
      }
    };
    dfs_half(0);
    for (auto& h : halves) basis.push_back({std::move(h), true});
  }
  std::sort(basis.begin(), basis.end(), [&](const LieWord& a, const LieWord& b) {
    int wa = word_weight(a), wb = word_weight(b);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  auto [pos, ok] = basis_cache_.emplace(n, std::move(basis));
  (void)ok;
  return pos->second;
}

DglaPresentation::DglaPresentation(std::vector<Generator> generators, DegreeWindow window)
    : lie_(std::move(generators), window) {
  d_of_.assign(lie_.generator_count(), LieElement{});
}

void DglaPresentation::set_differential(int id, LieElement value) {
  d_of_.at(id) = std::move(value);
}

LieElement DglaPresentation::derive_word(const std::vector<LieElement>& values, int degree_shift,
                                         const LieWord& w,
                                         std::map<LieWord, LieElement>& memo) const {
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;
  LieElement out;
  const bool odd_shift = degree_shift % 2 != 0;
  if (!w.square && w.word.size() == 1) {
    out = values.at(w.word[0]);
  } else {
    LieWord a, b;
    if (w.square) {
      a = {w.word, false};
      b = a;
    } else {
      size_t k = split_point(w.word);
      a = {{w.word.begin(), w.word.begin() + static_cast<long>(k)}, false};
      b = {{w.word.begin() + static_cast<long>(k), w.word.end()}, false};
    }
    LieElement ea, eb;
    ea.add_term(a, rat(1));
    eb.add_term(b, rat(1));
    LieElement da = derive_word(values, degree_shift, a, memo);
    LieElement db = derive_word(values, degree_shift, b, memo);
    out = lie_.bracket(da, eb);
    LieElement second = lie_.bracket(ea, db);
    if (odd_shift && lie_.word_degree(a) % 2 != 0) second *= rat(-1);
    out += second;
  }
  memo.emplace(w, out);
  return out;
}

LieElement DglaPresentation::apply_derivation(const std::vector<LieElement>& values,
                                              int degree_shift, const LieElement& x) const {
  if (static_cast<int>(values.size()) != generator_count())
    throw std::invalid_argument("derivation values size mismatch");
  std::map<LieWord, LieElement> memo;
  LieElement out;
  for (const auto& [w, c] : x.terms) {
    LieElement piece = derive_word(values, degree_shift, w, memo);
    piece *= c;
    out += piece;
  }
  return out;
}

LieElement DglaPresentation::apply_d(const LieElement& x) const {
  return apply_derivation(d_of_, 1, x);
}

CheckReport DglaPresentation::check_dgla() const {
  CheckReport report;
  for (int i = 0; i < generator_count(); ++i) {
    const auto& g = lie_.generator(i);
    for (const auto& [w, c] : d_of_[i].terms) {
      (void)c;
      if (lie_.word_degree(w) != g.degree + 1)
        report.fail("d(" + g.name + ") is not homogeneous of degree " +
                    std::to_string(g.degree + 1));
      if (lie_.word_weight(w) != g.weight)
        report.fail("d(" + g.name + ") does not preserve weight");
    }
    LieElement dd = apply_d(d_of_[i]);
    if (!dd.is_zero()) report.fail("d^2(" + g.name + ") != 0");
  }
  if (!report.ok) return report;

  // Leibniz for d over the bracket, on basis pairs whose bracket stays
  // inside the window (below it both sides are truncated inconsistently,
  // so nothing can be asserted there).
  const DegreeWindow& win = lie_.window();
  for (int n1 = win.min_degree; n1 <= win.max_degree; ++n1)
    for (int n2 = n1; n2 <= win.max_degree; ++n2) {
      if (n1 + n2 < win.min_degree) continue;
      for (const auto& w1 : lie_.basis_in_degree(n1))
        for (const auto& w2 : lie_.basis_in_degree(n2)) {
          LieElement x, y;
          x.add_term(w1, rat(1));
          y.add_term(w2, rat(1));
          LieElement lhs = apply_d(lie_.bracket(x, y));
          LieElement rhs = lie_.bracket(apply_d(x), y);
          LieElement second = lie_.bracket(x, apply_d(y));
          if (n1 % 2 != 0) second *= rat(-1);
          rhs += second;
          rhs *= rat(-1);
          lhs += rhs;
          if (!lhs.is_zero()) {
            report.fail("Leibniz fails on [" + lie_.word_label(w1) + "," + lie_.word_label(w2) +
                        "]");
            return report;
          }
        }
    }
  return report;
}

DglaBasis::DglaBasis(const DglaPresentation& p) : p_(&p) {
  const FreeLie& lie = p.lie();
  for (int n = lie.window().min_degree; n <= lie.window().max_degree; ++n)
    for (const auto& w : lie.basis_in_degree(n)) words_.push_back(w);
  std::sort(words_.begin(), words_.end(), [&](const LieWord& a, const LieWord& b) {
    int da = lie.word_degree(a), db = lie.word_degree(b);
    if (da != db) return da < db;
    int wa = lie.word_weight(a), wb = lie.word_weight(b);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  slice_.window = lie.window();
  for (int i = 0; i < static_cast<int>(words_.size()); ++i) {
    index_.emplace(words_[i], i);
    slice_.basis.push_back({lie.word_label(words_[i]), lie.word_degree(words_[i]),
                            lie.word_weight(words_[i])});
  }
}

std::optional<int> DglaBasis::index_of(const LieWord& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVec DglaBasis::coords(const LieElement& x) const {
  SparseVec v;
  for (const auto& [w, c] : x.terms) {
    auto idx = index_of(w);
    if (!idx) throw std::runtime_error("element term not in window basis");
    v[*idx] = c;
  }
  return v;
}

LieElement DglaBasis::element(const SparseVec& v) const {
  LieElement x;
  for (const auto& [i, c] : v) x.add_term(words_.at(i), c);
  return x;
}

SparseMatrix DglaBasis::differential_matrix() const {
  SparseMatrix d(dim(), dim());
  for (int j = 0; j < dim(); ++j) {
    LieElement x;
    x.add_term(words_[j], rat(1));
    for (const auto& [i, c] : coords(p_->apply_d(x))) d.set(i, j, c);
  }
  return d;
}

SparseMatrix DglaBasis::derivation_matrix(const std::vector<LieElement>& values,
                                          int degree_shift) const {
  SparseMatrix out(dim(), dim());
  for (int j = 0; j < dim(); ++j) {
    LieElement x;
    x.add_term(words_[j], rat(1));
    for (const auto& [i, c] : coords(p_->apply_derivation(values, degree_shift, x)))
      out.set(i, j, c);
  }
  return out;
}

LinearMapSlice DglaBasis::extend_derivation(const std::vector<LieElement>& values,
                                            int degree_shift, int weight_shift) const {
  if (static_cast<int>(values.size()) != p_->generator_count())
    throw std::invalid_argument("derivation values size mismatch");
  const FreeLie& lie = p_->lie();
  for (int i = 0; i < p_->generator_count(); ++i) {
    const auto& g = lie.generator(i);
    for (const auto& [w, c] : values[i].terms) {
      (void)c;
      if (lie.word_degree(w) != g.degree + degree_shift ||
          lie.word_weight(w) != g.weight + weight_shift)
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

CohomologyReport dgla_cohomology(const DglaPresentation& p, const DegreeWindow& request) {
  const DegreeWindow& win = p.window();
  if (request.min_degree - 1 < win.min_degree)
    throw std::invalid_argument(
        "cohomology request needs one degree of slack above the window bottom");
  if (request.max_degree > win.max_degree)
    throw std::invalid_argument("cohomology request exceeds the window top");
  DglaBasis basis(p);
  return cohomology(basis.slice(), basis.differential_matrix(), request);
}

std::vector<SparseVec> gamma_filtration(const DglaBasis& basis, int k, int degree) {
  std::vector<SparseVec> out;
  const FreeLie& lie = basis.presentation().lie();
  for (int i = 0; i < basis.dim(); ++i)
    if (basis.slice().degree(i) == degree && lie.word_length(basis.words()[i]) >= k)
      out.push_back(unit_vec(i));
  return out;
}

int gamma_stabilizing_k(const DglaBasis& basis, int degree) {
  int max_len = -1;
  const FreeLie& lie = basis.presentation().lie();
  for (int i = 0; i < basis.dim(); ++i)
    if (basis.slice().degree(i) == degree)
      max_len = std::max(max_len, lie.word_length(basis.words()[i]));
  return max_len + 1;  // 0 when the degree is empty
}

}  // namespace wrht
