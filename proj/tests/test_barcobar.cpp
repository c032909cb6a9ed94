#include <doctest.h>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrht/barcobar.hpp"

using namespace wrht;

namespace {

int gen_id(const CdgaPresentation& p, const std::string& name) {
  auto id = p.generator_index(name);
  REQUIRE(id.has_value());
  return *id;
}

int gen_id(const DglaPresentation& p, const std::string& name) {
  auto id = p.generator_index(name);
  REQUIRE(id.has_value());
  return *id;
}

CgaElement cga_term(std::vector<int> ids, const Rational& c) {
  std::sort(ids.begin(), ids.end());
  CgaElement x;
  x.add_term(ids, c);
  return x;
}

// Truncated polynomial algebra Q[u]/u^{k+1} with its formality weights,
// presented on [0 .. top].
FdAlgebra truncated_cp(int k, int top) {
  FdAlgebra a;
  a.space.window = {0, top};
  a.space.basis.push_back({"1", 0, 0});
  for (int i = 1; i <= k; ++i)
    a.space.basis.push_back({"u^" + std::to_string(i), 2 * i, 2 * i});
  a.space.basis[1].label = "u";
  a.unit = 0;
  a.d = SparseMatrix(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      if (i + j <= k) a.set_product(i, j, unit_vec(i + j));
  return a;
}

// H^*(S^2) with formality weights, presented on [0 .. top].
FdAlgebra sphere_algebra(int top) {
  FdAlgebra a;
  a.space.window = {0, top};
  a.space.basis = {{"1", 0, 0}, {"e", 2, 2}};
  a.unit = 0;
  a.d = SparseMatrix(2, 2);
  a.set_product(0, 0, unit_vec(0));
  a.set_product(0, 1, unit_vec(1));
  a.set_product(1, 0, unit_vec(1));
  return a;
}

// H^*(S^2 x S^2): two degree-2 classes whose product spans the top.
FdAlgebra product_of_spheres() {
  FdAlgebra a;
  a.space.window = {0, 4};
  a.space.basis = {{"1", 0, 0}, {"e", 2, 2}, {"f", 2, 2}, {"e*f", 4, 4}};
  a.unit = 0;
  a.d = SparseMatrix(4, 4);
  for (int j = 0; j < 4; ++j) {
    a.set_product(0, j, unit_vec(j));
    a.set_product(j, 0, unit_vec(j));
  }
  a.set_product(1, 2, unit_vec(3));
  a.set_product(2, 1, unit_vec(3));
  return a;
}

// The degree-<=6 quotient of the sphere model Lambda(a, b), d(b) = a^2,
// with its sphere weights: a genuine differential interacting with the
// product, so the quillen construction has to cancel cross terms.
FdAlgebra truncated_sphere_cells() {
  FdAlgebra a;
  a.space.window = {0, 6};
  a.space.basis = {{"1", 0, 0},    {"a", 2, 2},   {"b", 3, 4},
                   {"a^2", 4, 4},  {"a*b", 5, 6}, {"a^3", 6, 6}};
  a.unit = 0;
  a.d = SparseMatrix(6, 6);
  a.d.set(3, 2, rat(1));  // d(b) = a^2
  a.d.set(5, 4, rat(1));  // d(a*b) = a^3
  for (int j = 0; j < 6; ++j) {
    a.set_product(0, j, unit_vec(j));
    a.set_product(j, 0, unit_vec(j));
  }
  a.set_product(1, 1, unit_vec(3));  // a * a
  a.set_product(1, 2, unit_vec(4));  // a * b
  a.set_product(2, 1, unit_vec(4));
  a.set_product(1, 3, unit_vec(5));  // a * a^2
  a.set_product(3, 1, unit_vec(5));
  return a;
}

// Quillen model of CP^2: L(v1, v2) with d(v2) = [v1,v1]/2.
DglaPresentation cp2_quillen(DegreeWindow window) {
  DglaPresentation p({{"v1", -1, -2}, {"v2", -3, -4}}, window);
  LieElement d2 = p.lie().bracket(p.lie().generator_element(*p.generator_index("v1")),
                                  p.lie().generator_element(*p.generator_index("v1")));
  d2 *= rat(1, 2);
  p.set_differential(*p.generator_index("v2"), d2);
  return p;
}

bool throws_with(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_SUITE("barcobar") {

TEST_CASE("an abelian line dualizes to an exterior line") {
  GradedSlice s;
  s.window = {-1, -1};
  s.basis = {{"x", -1, -1}};
  OoStructure l(OpKind::lie, s, 2);

  CeAlgebra ce = ce_algebra(l, {0, 3});
  REQUIRE(ce.presentation.generator_count() == 1);
  CHECK(ce.presentation.generator(0).name == "x");
  CHECK(ce.presentation.generator(0).degree == 2);
  CHECK(ce.presentation.generator(0).weight == 1);
  CHECK(ce.presentation.differential(0).is_zero());
  CHECK(ce.primal_index == std::vector<int>{0});

  // The dual of a degree -1 class needs the window to reach degree 3.
  CHECK(throws_with([&] { ce_algebra(l, {0, 2}); }, "too small to close d"));

  OoStructure not_lie(OpKind::comm, s, 2);
  CHECK_THROWS_AS(ce_algebra(not_lie, {0, 3}), std::invalid_argument);

  GradedSlice bad;
  bad.window = {-1, 0};
  bad.basis = {{"y", 0, 0}};
  OoStructure nonneg(OpKind::lie, bad, 2);
  CHECK(throws_with([&] { ce_algebra(nonneg, {0, 3}); }, "degrees <= -1"));
}

TEST_CASE("projective-space models dualize to truncated polynomial cohomology") {
  // CP^1: L(v1) with zero differential; the dual picks up d(y) = u^2 / 2
  // purely from the bracket.
  DglaPresentation l1({{"v1", -1, -2}}, {-2, -1});
  CeAlgebra ce1 = ce_algebra(l1, {0, 6});
  REQUIRE(ce1.presentation.generator_count() == 2);
  const int u = gen_id(ce1.presentation, "v1");
  const int y = gen_id(ce1.presentation, "[v1,v1]");
  CHECK(ce1.presentation.generator(u).degree == 2);
  CHECK(ce1.presentation.generator(u).weight == 2);
  CHECK(ce1.presentation.generator(y).degree == 3);
  CHECK(ce1.presentation.generator(y).weight == 4);
  CHECK(ce1.presentation.differential(u).is_zero());
  CHECK(ce1.presentation.differential(y) == cga_term({u, u}, rat(1, 2)));

  CohomologyReport h1 = cga_cohomology(ce1.presentation, {0, 5});
  CHECK(h1.dim(0, 0) == 1);
  CHECK(h1.dim(2, 2) == 1);
  for (int n : {1, 3, 4, 5}) CHECK(h1.total_dim(n) == 0);

  // CP^2: the quadratic differential of the model contributes the linear
  // term of the dual differential, next to the bracket's quadratic one.
  DglaPresentation l2 = cp2_quillen({-6, -1});
  CeAlgebra ce2 = ce_algebra(l2, {0, 8});
  REQUIRE(ce2.presentation.generator_count() == 7);
  const int u1 = gen_id(ce2.presentation, "v1");
  const int z = gen_id(ce2.presentation, "v2");
  const int w11 = gen_id(ce2.presentation, "[v1,v1]");
  const int w12 = gen_id(ce2.presentation, "[v2,v1]");  // = [v1,v2]: odd-odd swap is free
  CHECK(ce2.presentation.generator(z).degree == 4);
  CHECK(ce2.presentation.generator(z).weight == 4);
  CHECK(ce2.presentation.differential(u1).is_zero());
  CHECK(ce2.presentation.differential(z).is_zero());
  CgaElement dw11 = cga_term({z}, rat(1, 2));
  dw11 += cga_term({u1, u1}, rat(1, 2));
  CHECK(ce2.presentation.differential(w11) == dw11);
  CHECK(ce2.presentation.differential(w12) == cga_term({u1, z}, rat(1)));

  // A dgla dualizes to an at-most-quadratic differential.
  for (int g = 0; g < ce2.presentation.generator_count(); ++g)
    for (const auto& [mono, c] : ce2.presentation.differential(g).terms) {
      (void)c;
      CHECK(mono.size() >= 1);
      CHECK(mono.size() <= 2);
    }

  // Generators remember which basis word they are dual to.
  DglaBasis lb(l2);
  for (int g = 0; g < ce2.presentation.generator_count(); ++g)
    CHECK(lb.slice().basis[ce2.primal_index[g]].label == ce2.presentation.generator(g).name);

  CohomologyReport h2 = cga_cohomology(ce2.presentation, {0, 6});
  CHECK(h2.dim(0, 0) == 1);
  CHECK(h2.dim(2, 2) == 1);
  CHECK(h2.dim(4, 4) == 1);
  for (int n : {1, 3, 5, 6}) CHECK(h2.total_dim(n) == 0);
}

TEST_CASE("a ternary bracket dualizes to a cubic term") {
  GradedSlice s;
  s.window = {-4, -1};
  s.basis = {{"a", -1, -1}, {"b", -4, -3}};
  OoStructure l(OpKind::lie, s, 3);
  l.set_bar_op(3, {0, 0, 0}, unit_vec(1));

  CeAlgebra ce = ce_algebra(l, {0, 6});
  const int xa = gen_id(ce.presentation, "a");
  const int xb = gen_id(ce.presentation, "b");
  CHECK(ce.presentation.generator(xa).degree == 2);
  CHECK(ce.presentation.generator(xb).degree == 5);
  CHECK(ce.presentation.generator(xb).weight == 3);
  CHECK(ce.presentation.differential(xa).is_zero());
  CHECK(ce.presentation.differential(xb) == cga_term({xa, xa, xa}, rat(1, 6)));
}

TEST_CASE("incoherent brackets are rejected when the window can see it") {
  // b2(a,a) = b and b2(a,b) = c break the Jacobi identity: d^2 on the dual
  // of c is a nonzero multiple of (dual a)^3.
  GradedSlice s;
  s.window = {-3, -1};
  s.basis = {{"a", -1, -1}, {"b", -2, -2}, {"c", -3, -3}};
  OoStructure l(OpKind::lie, s, 2);
  l.set_bar_op(2, {0, 0}, unit_vec(1));
  l.set_bar_op(2, {0, 1}, unit_vec(2));
  CHECK(throws_with([&] { ce_algebra(l, {0, 6}); }, "not coherent"));
}

TEST_CASE("quillen duals of projective spaces carry the halved bracket differential") {
  QuillenDgla q2 = quillen_dgla(truncated_cp(2, 4), {-3, -1});
  REQUIRE(q2.presentation.generator_count() == 2);
  const FreeLie& lie2 = q2.presentation.lie();
  const int gu = gen_id(q2.presentation, "u");
  const int gu2 = gen_id(q2.presentation, "u^2");
  CHECK(lie2.generator(gu).degree == -1);
  CHECK(lie2.generator(gu).weight == -2);
  CHECK(lie2.generator(gu2).degree == -3);
  CHECK(lie2.generator(gu2).weight == -4);
  CHECK(q2.presentation.differential(gu).is_zero());
  LieElement half_uu = lie2.bracket(lie2.generator_element(gu), lie2.generator_element(gu));
  half_uu *= rat(1, 2);
  CHECK(q2.presentation.differential(gu2) == half_uu);

  QuillenDgla q3 = quillen_dgla(truncated_cp(3, 6), {-5, -1});
  REQUIRE(q3.presentation.generator_count() == 3);
  const FreeLie& lie3 = q3.presentation.lie();
  const int hu = gen_id(q3.presentation, "u");
  const int hu2 = gen_id(q3.presentation, "u^2");
  const int hu3 = gen_id(q3.presentation, "u^3");
  LieElement expect3 =
      lie3.bracket(lie3.generator_element(hu), lie3.generator_element(hu2));
  CHECK(q3.presentation.differential(hu3) == expect3);

  // Positive weights downstairs become strictly negative weights upstairs.
  for (const Generator& g : lie3.generators()) CHECK(g.weight < 0);
}

TEST_CASE("the unit algebra collapses to the zero dgla") {
  FdAlgebra a;
  a.space.window = {0, 0};
  a.space.basis = {{"1", 0, 0}};
  a.unit = 0;
  a.d = SparseMatrix(1, 1);
  a.set_product(0, 0, unit_vec(0));
  QuillenDgla q = quillen_dgla(a, {-1, -1});
  CHECK(q.presentation.generator_count() == 0);
  CHECK(DglaBasis(q.presentation).dim() == 0);
}

TEST_CASE("a product of spheres mixes its top class into one bracket") {
  QuillenDgla q = quillen_dgla(product_of_spheres(), {-3, -1});
  REQUIRE(q.presentation.generator_count() == 3);
  const FreeLie& lie = q.presentation.lie();
  const int ge = gen_id(q.presentation, "e");
  const int gf = gen_id(q.presentation, "f");
  const int gef = gen_id(q.presentation, "e*f");
  CHECK(q.presentation.differential(ge).is_zero());
  CHECK(q.presentation.differential(gf).is_zero());
  CHECK(q.presentation.differential(gef) ==
        lie.bracket(lie.generator_element(ge), lie.generator_element(gf)));
}

TEST_CASE("cross terms from a genuine differential cancel in the quillen dual") {
  QuillenDgla q = quillen_dgla(truncated_sphere_cells(), {-5, -1});
  REQUIRE(q.presentation.generator_count() == 5);
  const FreeLie& lie = q.presentation.lie();
  const int ga = gen_id(q.presentation, "a");
  const int gb = gen_id(q.presentation, "b");
  const int ga2 = gen_id(q.presentation, "a^2");
  const int gab = gen_id(q.presentation, "a*b");
  const int ga3 = gen_id(q.presentation, "a^3");

  CHECK(q.presentation.differential(ga).is_zero());
  CHECK(q.presentation.differential(gb).is_zero());

  LieElement d_a2 = lie.bracket(lie.generator_element(ga), lie.generator_element(ga));
  d_a2 *= rat(1, 2);
  d_a2 += lie.generator_element(gb);
  CHECK(q.presentation.differential(ga2) == d_a2);

  CHECK(q.presentation.differential(gab) ==
        lie.bracket(lie.generator_element(ga), lie.generator_element(gb)));

  LieElement d_a3 = lie.bracket(lie.generator_element(ga), lie.generator_element(ga2));
  d_a3 += lie.generator_element(gab);
  CHECK(q.presentation.differential(ga3) == d_a3);
}

TEST_CASE("quillen refuses inadmissible algebras") {
  FdAlgebra disconnected = sphere_algebra(7);
  disconnected.space.basis.push_back({"x0", 0, 0});
  disconnected.set_product(0, 2, unit_vec(2));
  disconnected.set_product(2, 0, unit_vec(2));
  disconnected.d = SparseMatrix(3, 3);
  CHECK(throws_with([&] { quillen_dgla(disconnected, {-6, -1}); }, "not connected"));

  FdAlgebra circle = sphere_algebra(7);
  circle.space.basis.push_back({"t", 1, 1});
  circle.set_product(0, 2, unit_vec(2));
  circle.set_product(2, 0, unit_vec(2));
  circle.d = SparseMatrix(3, 3);
  CHECK(throws_with([&] { quillen_dgla(circle, {-6, -1}); }, "not simply connected"));

  CHECK(throws_with([&] { quillen_dgla(truncated_cp(2, 4), {-2, -1}); }, "must reach degree -3"));
}

TEST_CASE("the lie-side counit is a windowed quasi-isomorphism") {
  // One even generator: the free lie algebra is one line and the composite
  // collapses back onto it.
  DglaPresentation abelian({{"x", -2, -2}}, {-3, -1});
  CheckReport r0 = counit_quasiiso_check(abelian, {-2, -1});
  CHECK(r0.ok);

  DglaPresentation cp2 = cp2_quillen({-6, -1});
  CheckReport r1 = counit_quasiiso_check(cp2, {-5, -1});
  for (const auto& f : r1.failures) MESSAGE(f);
  CHECK(r1.ok);

  // The homotopy groups of the projective plane, read off the model: one
  // class for the bottom cell and one for the Hopf-like attaching map.
  CohomologyReport hl = dgla_cohomology(cp2, {-5, -1});
  CHECK(hl.dim(-1, -2) == 1);
  CHECK(hl.dim(-4, -6) == 1);
  for (int n : {-2, -3, -5}) CHECK(hl.total_dim(n) == 0);

  CHECK(throws_with([&] { counit_quasiiso_check(cp2_quillen({-5, -1}), {-5, -1}); },
                    "window slack insufficient"));
  CHECK_THROWS_AS(counit_quasiiso_check(cp2, {-2, 0}), std::invalid_argument);
}

TEST_CASE("the algebra-side counit is a windowed quasi-isomorphism") {
  CheckReport r_sphere = counit_quasiiso_check(sphere_algebra(7), {0, 6});
  for (const auto& f : r_sphere.failures) MESSAGE(f);
  CHECK(r_sphere.ok);

  CheckReport r_cp2 = counit_quasiiso_check(truncated_cp(2, 7), {0, 6});
  for (const auto& f : r_cp2.failures) MESSAGE(f);
  CHECK(r_cp2.ok);

  CHECK(throws_with([&] { counit_quasiiso_check(truncated_cp(2, 4), {0, 6}); },
                    "window slack insufficient"));
  CHECK_THROWS_AS(counit_quasiiso_check(sphere_algebra(7), {1, 6}), std::invalid_argument);
  CHECK_THROWS_AS(counit_quasiiso_check(sphere_algebra(7), {0, 0}), std::invalid_argument);
}

}  // TEST_SUITE
