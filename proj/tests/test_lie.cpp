#include <doctest.h>

#include <functional>
#include <random>

#include "dense_oracle.hpp"
#include "wrht/lie.hpp"

using namespace wrht;

namespace {

LieElement gen_elem(const FreeLie& lie, const std::string& name) {
  auto id = lie.generator_index(name);
  REQUIRE(id.has_value());
  return lie.generator_element(*id);
}

// --- test-local tensor algebra, independent of FreeLie::expand -----------

using Poly = std::map<std::vector<int>, Rational>;

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      std::vector<int> w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out[w] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();)
    it = is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

Poly axpy(Poly a, const Poly& b, const Rational& c) {
  for (const auto& [w, v] : b) {
    a[w] += v * c;
    if (is_zero(a[w])) a.erase(w);
  }
  return a;
}

// all fully-bracketed expansions of a word, with degrees from `deg_of`
std::vector<Poly> all_bracketings(const std::vector<int>& word,
                                  const std::vector<int>& deg_of) {
  if (word.size() == 1) return {Poly{{word, rat(1)}}};
  auto total_degree = [&](const std::vector<int>& w) {
    int d = 0;
    for (int id : w) d += deg_of[id];
    return d;
  };
  std::vector<Poly> out;
  for (size_t k = 1; k < word.size(); ++k) {
    std::vector<int> left(word.begin(), word.begin() + static_cast<long>(k));
    std::vector<int> right(word.begin() + static_cast<long>(k), word.end());
    bool odd = (total_degree(left) % 2 != 0) && (total_degree(right) % 2 != 0);
    for (const auto& pl : all_bracketings(left, deg_of))
      for (const auto& pr : all_bracketings(right, deg_of))
        out.push_back(axpy(mul(pl, pr), mul(pr, pl), rat(odd ? 1 : -1)));
  }
  return out;
}

// dim of the Lie span in a fixed degree, by brute force over all words and
// all bracketings, with a dense rank at the end
int brute_lie_dim(const std::vector<int>& deg_of, int degree) {
  std::vector<std::vector<int>> words;
  std::vector<int> cur;
  std::function<void(int)> dfs = [&](int so_far) {
    if (so_far == degree && !cur.empty()) words.push_back(cur);
    if (so_far <= degree) return;
    for (int id = 0; id < static_cast<int>(deg_of.size()); ++id) {
      cur.push_back(id);
      dfs(so_far + deg_of[id]);
      cur.pop_back();
    }
  };
  dfs(0);

  std::map<std::vector<int>, int> col_of;
  std::vector<Poly> rows;
  for (const auto& w : words)
    for (auto& p : all_bracketings(w, deg_of)) {
      for (const auto& [tw, c] : p) {
        (void)c;
        if (!col_of.count(tw)) col_of.emplace(tw, static_cast<int>(col_of.size()));
      }
      rows.push_back(std::move(p));
    }
  std::vector<std::vector<Rational>> dense(rows.size(),
                                           std::vector<Rational>(col_of.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (const auto& [tw, c] : rows[r]) dense[r][col_of.at(tw)] = c;
  return oracle::dense_rank(std::move(dense));
}

}  // namespace

TEST_SUITE("lie") {

TEST_CASE("lyndon words and labels") {
  CHECK(is_lyndon({0}));
  CHECK(is_lyndon({0, 1}));
  CHECK(!is_lyndon({1, 0}));
  CHECK(!is_lyndon({0, 0}));
  CHECK(is_lyndon({0, 0, 1}));
  CHECK(!is_lyndon({0, 1, 0}));
  CHECK(is_lyndon({0, 0, 1, 0, 1}));

  FreeLie lie({{"a", -1, -1}, {"b", -1, -1}}, {-6, -1});
  CHECK(lie.word_label({{0, 0, 1}, false}) == "[a,[a,b]]");
  CHECK(lie.word_label({{0, 1}, true}) == "[[a,b],[a,b]]");
  CHECK(lie.word_degree({{0, 1}, true}) == -4);
  CHECK(lie.word_length({{0, 1}, true}) == 4);
}

TEST_CASE("bracket normalization identities") {
  // one even and two odd generators
  FreeLie lie({{"x", -1, -2}, {"y", -3, -4}, {"u", -2, -2}}, {-10, -1});
  LieElement x = gen_elem(lie, "x"), y = gen_elem(lie, "y"), u = gen_elem(lie, "u");

  CHECK(lie.bracket(u, u).is_zero());                     // [even, even] same element
  CHECK(lie.bracket(x, lie.bracket(x, x)).is_zero());     // [v,[v,v]] = 0, odd v
  CHECK(lie.bracket(x, y) == lie.bracket(y, x));          // -(-1)^{(-1)(-3)} = +1
  CHECK(!lie.bracket(x, x).is_zero());                    // [x,x] survives for odd x

  // graded antisymmetry and Jacobi on random homogeneous elements
  std::mt19937 rng(20240813);
  auto random_element = [&](int degree) {
    LieElement out;
    for (const auto& w : lie.basis_in_degree(degree)) {
      long c = static_cast<long>(rng() % 7) - 3;
      if (c != 0) out.add_term(w, rat(c));
    }
    return out;
  };
  for (int trial = 0; trial < 40; ++trial) {
    int da = -1 - static_cast<int>(rng() % 3);
    int db = -1 - static_cast<int>(rng() % 3);
    int dc = -1 - static_cast<int>(rng() % 3);
    LieElement a = random_element(da), b = random_element(db), c = random_element(dc);

    // [a,b] + (-1)^{|a||b|}[b,a] = 0
    LieElement anti_sum = lie.bracket(a, b);
    LieElement flip = lie.bracket(b, a);
    flip *= rat((da * db) % 2 != 0 ? -1 : 1);
    anti_sum += flip;
    CHECK(anti_sum.is_zero());

    // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
    LieElement lhs = lie.bracket(a, lie.bracket(b, c));
    LieElement rhs = lie.bracket(lie.bracket(a, b), c);
    LieElement third = lie.bracket(b, lie.bracket(a, c));
    third *= rat((da * db) % 2 != 0 ? -1 : 1);
    rhs += third;
    rhs *= rat(-1);
    lhs += rhs;
    CHECK(lhs.is_zero());
  }
}

TEST_CASE("normalize round-trips basis words and rejects non-Lie input") {
  FreeLie lie({{"x", -1, -1}, {"u", -2, -2}}, {-6, -1});
  for (int n = -6; n <= -1; ++n)
    for (const auto& w : lie.basis_in_degree(n)) {
      LieElement singleton;
      singleton.add_term(w, rat(1));
      CHECK(lie.normalize(lie.expand(w)) == singleton);
    }
  TensorPoly bad;
  bad.emplace(TensorWord{0, 1}, rat(1));  // xu alone is not a Lie element
  CHECK_THROWS_AS(lie.normalize(bad), std::invalid_argument);
}

TEST_CASE("super-Lyndon basis counts match brute-force spans") {
  // one odd generator: dims 1, 1, 0, 0, 0 in degrees -1..-5
  FreeLie one({{"v", -1, -1}}, {-5, -1});
  CHECK(one.basis_in_degree(-1).size() == 1);
  CHECK(one.basis_in_degree(-2).size() == 1);
  CHECK(one.basis_in_degree(-3).empty());
  CHECK(one.basis_in_degree(-4).empty());
  CHECK(one.basis_in_degree(-5).empty());

  // two odd generators, word length up to 5
  FreeLie two({{"a", -1, -1}, {"b", -1, -2}}, {-5, -1});
  for (int n = -5; n <= -1; ++n)
    CHECK(static_cast<int>(two.basis_in_degree(n).size()) == brute_lie_dim({-1, -1}, n));

  // mixed parities: x odd (-1), u even (-2), length up to 5
  FreeLie mixed({{"x", -1, -1}, {"u", -2, -2}}, {-7, -1});
  for (int n = -7; n <= -1; ++n)
    CHECK(static_cast<int>(mixed.basis_in_degree(n).size()) == brute_lie_dim({-1, -2}, n));
}

TEST_CASE("cp^k quillen-style models pass check_dgla") {
  // L(v_1..v_k), |v_i| = 1-2i, w(v_i) = -2i, d v_i = 1/2 sum_{a+b=i} [v_a, v_b]
  for (int k = 1; k <= 3; ++k) {
    std::vector<Generator> gens;
    for (int i = 1; i <= k; ++i)
      gens.push_back({"v" + std::to_string(i), 1 - 2 * i, -2 * i});
    DglaPresentation p(gens, {-12, -1});
    for (int i = 1; i <= k; ++i) {
      LieElement dv;
      for (int a = 1; a < i; ++a) {
        int b = i - a;
        LieElement term = p.lie().bracket(gen_elem(p.lie(), "v" + std::to_string(a)),
                                          gen_elem(p.lie(), "v" + std::to_string(b)));
        term *= rat(1, 2);
        dv += term;
      }
      p.set_differential(*p.generator_index("v" + std::to_string(i)), dv);
    }
    auto report = p.check_dgla();
    CHECK(report.ok);
    if (!report.ok)
      for (const auto& f : report.failures) MESSAGE(f);
  }

  // wrong weight on v2 must be flagged
  DglaPresentation bad({{"v1", -1, -2}, {"v2", -3, -3}}, {-8, -1});
  LieElement half_sq = bad.lie().bracket(gen_elem(bad.lie(), "v1"), gen_elem(bad.lie(), "v1"));
  half_sq *= rat(1, 2);
  bad.set_differential(*bad.generator_index("v2"), half_sq);
  CHECK(!bad.check_dgla().ok);
}

TEST_CASE("dgla cohomology of sphere and projective plane models") {
  // S^2: L(v1), d = 0 -> loop homotopy in degrees -1, -2 only
  DglaPresentation s2({{"v1", -1, -2}}, {-7, -1});
  auto h = dgla_cohomology(s2, {-6, -1});
  CHECK(h.dim(-1, -2) == 1);
  CHECK(h.dim(-2, -4) == 1);
  CHECK(h.total_dim(-1) == 1);
  CHECK(h.total_dim(-2) == 1);
  for (int n = -6; n <= -3; ++n) CHECK(h.total_dim(n) == 0);

  // CP^2: L(v1, v2), d v2 = 1/2 [v1, v1] -> classes in degrees -1 and -4
  // (pi_2 and pi_5 of CP^2 seen through the based loop space)
  DglaPresentation cp2({{"v1", -1, -2}, {"v2", -3, -4}}, {-8, -1});
  LieElement half_sq = cp2.lie().bracket(gen_elem(cp2.lie(), "v1"), gen_elem(cp2.lie(), "v1"));
  half_sq *= rat(1, 2);
  cp2.set_differential(*cp2.generator_index("v2"), half_sq);
  REQUIRE(cp2.check_dgla().ok);

  auto hc = dgla_cohomology(cp2, {-7, -1});
  CHECK(hc.dim(-1, -2) == 1);
  CHECK(hc.dim(-4, -6) == 1);
  CHECK(hc.total_dim(-1) == 1);
  CHECK(hc.total_dim(-4) == 1);
  for (int n : {-2, -3, -5, -6, -7}) CHECK(hc.total_dim(n) == 0);

  // cross-check every requested degree against the dense oracle
  DglaBasis basis(cp2);
  SparseMatrix d = basis.differential_matrix();
  for (int n = -7; n <= -1; ++n) CHECK(hc.total_dim(n) == oracle::h_dim(basis.slice(), d, n));

  CHECK_THROWS(dgla_cohomology(cp2, {-8, -1}));  // no slack below the request
}

TEST_CASE("gamma filtration is word length") {
  DglaPresentation cp2({{"v1", -1, -2}, {"v2", -3, -4}}, {-8, -1});
  DglaBasis basis(cp2);

  // degree -4 is spanned by [v1,v2]: gamma^2 full, gamma^3 zero
  CHECK(gamma_filtration(basis, 0, -4).size() == 1);
  CHECK(gamma_filtration(basis, 2, -4).size() == 1);
  CHECK(gamma_filtration(basis, 3, -4).empty());
  CHECK(gamma_stabilizing_k(basis, -4) == 3);

  // nesting in a mixed degree
  for (int n = -8; n <= -1; ++n)
    for (int k = 0; k < 8; ++k)
      CHECK(gamma_filtration(basis, k, n).size() >= gamma_filtration(basis, k + 1, n).size());

  // abelian one even generator: gamma^2 = 0 everywhere
  DglaPresentation ab({{"u", -2, -2}}, {-6, -1});
  DglaBasis ab_basis(ab);
  for (int n = -6; n <= -1; ++n) CHECK(gamma_filtration(ab_basis, 2, n).empty());
  CHECK(gamma_stabilizing_k(ab_basis, -2) == 2);
  CHECK(gamma_stabilizing_k(ab_basis, -4) == 0);  // empty degree
}

TEST_CASE("extend_derivation validates and matches the differential") {
  DglaPresentation cp2({{"v1", -1, -2}, {"v2", -3, -4}}, {-8, -1});
  LieElement half_sq = cp2.lie().bracket(gen_elem(cp2.lie(), "v1"), gen_elem(cp2.lie(), "v1"));
  half_sq *= rat(1, 2);
  cp2.set_differential(*cp2.generator_index("v2"), half_sq);
  DglaBasis basis(cp2);

  std::vector<LieElement> values(2);
  values[*cp2.generator_index("v2")] = half_sq;
  LinearMapSlice d = basis.extend_derivation(values, 1, 0);
  CHECK(d.matrix == basis.differential_matrix());
  CHECK((d.matrix * d.matrix).nonzero_count() == 0);

  std::vector<LieElement> bad(2);
  bad[*cp2.generator_index("v1")] = gen_elem(cp2.lie(), "v2");  // wrong degree
  CHECK_THROWS_AS(basis.extend_derivation(bad, 1, 0), std::invalid_argument);
}

TEST_CASE("cohomology matches the dense oracle on random dglas") {
  std::mt19937 rng(20240814);
  const DegreeWindow window{-6, -1};
  for (int trial = 0; trial < 25; ++trial) {
    int ngen = 2 + static_cast<int>(rng() % 2);
    std::vector<Generator> gens;
    for (int i = 0; i < ngen; ++i) {
      int deg = (i == 0 && rng() % 2 == 0) ? -1 : -2 - static_cast<int>(rng() % 2);
      int weight = deg - 1 - static_cast<int>(rng() % 2);
      gens.push_back({"g" + std::to_string(i), deg, weight});
    }
    DglaPresentation p(gens, window);
    DglaBasis basis(p);

    // attach differentials from high degree down so d^2 = 0 by construction:
    // a cocycle in degree n+1 can only involve generators of degree > n
    std::vector<int> order(p.generator_count());
    for (int i = 0; i < p.generator_count(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return p.lie().generator(a).degree > p.lie().generator(b).degree;
    });
    for (int id : order) {
      if (rng() % 2 == 0) continue;
      const Generator& g = p.lie().generator(id);
      SparseMatrix d = basis.differential_matrix();
      auto blk = extract_block(basis.slice(), basis.slice(), d, g.degree + 1, g.weight, 1, 0);
      if (blk.source_indices.empty()) continue;
      SparseVec combo;
      for (const auto& kv : kernel_basis(blk.matrix)) {
        long c = static_cast<long>(rng() % 5) - 2;
        if (c == 0) continue;
        for (const auto& [local, v] : kv) vec_add_scaled(combo, blk.source_indices[local], v * rat(c));
      }
      if (!combo.empty()) p.set_differential(id, basis.element(combo));
    }
    REQUIRE(p.check_dgla().ok);

    SparseMatrix d = basis.differential_matrix();
    auto h = dgla_cohomology(p, {-5, -1});
    for (int n = -5; n <= -1; ++n) CHECK(h.total_dim(n) == oracle::h_dim(basis.slice(), d, n));
  }
}

}  // TEST_SUITE
