#include <doctest.h>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrht/barcobar.hpp"
#include "wrht/sullivan.hpp"

using namespace wrht;

namespace {

int gen_id(const CdgaPresentation& p, const std::string& name) {
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

// Truncated polynomial algebra Q[u]/u^{k+1} with its formality weights.
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

// The degree-<=6 quotient of the sphere model Lambda(a, b), d(b) = a^2:
// a target with a genuine differential, so the killing generator needs a
// nonzero primitive rather than zero.
FdAlgebra truncated_sphere_cells() {
  FdAlgebra a;
  a.space.window = {0, 6};
  a.space.basis = {{"1", 0, 0},   {"a", 2, 2},   {"b", 3, 4},
                   {"a^2", 4, 4}, {"a*b", 5, 6}, {"a^3", 6, 6}};
  a.unit = 0;
  a.d = SparseMatrix(6, 6);
  a.d.set(3, 2, rat(1));  // d(b) = a^2
  a.d.set(5, 4, rat(1));  // d(a*b) = a^3
  for (int j = 0; j < 6; ++j) {
    a.set_product(0, j, unit_vec(j));
    a.set_product(j, 0, unit_vec(j));
  }
  a.set_product(1, 1, unit_vec(3));
  a.set_product(1, 2, unit_vec(4));
  a.set_product(2, 1, unit_vec(4));
  a.set_product(1, 3, unit_vec(5));
  a.set_product(3, 1, unit_vec(5));
  return a;
}

// Quillen model of CP^2 with its coformality weights.
DglaPresentation cp2_quillen(DegreeWindow window) {
  DglaPresentation p({{"v1", -1, -2}, {"v2", -3, -4}}, window);
  LieElement d2 = p.lie().bracket(p.lie().generator_element(*p.generator_index("v1")),
                                  p.lie().generator_element(*p.generator_index("v1")));
  d2 *= rat(1, 2);
  p.set_differential(*p.generator_index("v2"), d2);
  return p;
}

CohomologyReport synthetic_support(const std::vector<Bidegree>& blocks) {
  CohomologyReport h;
  for (const auto& [n, p] : blocks) {
    CohomologyEntry e;
    e.degree = n;
    e.weight = p;
    e.dim = 1;
    h.entries[{n, p}] = e;
  }
  return h;
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

TEST_SUITE("sullivan") {

TEST_CASE("the sphere algebra has the classical two-generator model") {
  MinimalModel mm = minimal_model(sphere_algebra(8), 7);
  REQUIRE(mm.model.generator_count() == 2);

  const int v2 = gen_id(mm.model, "v2_2_0");
  const int v3 = gen_id(mm.model, "v3_4_0");
  CHECK(mm.model.generator(v2).degree == 2);
  CHECK(mm.model.generator(v2).weight == 2);
  CHECK(mm.model.generator(v3).degree == 3);
  CHECK(mm.model.generator(v3).weight == 4);
  CHECK(mm.model.differential(v2).is_zero());
  CHECK(mm.model.differential(v3) == cga_term({v2, v2}, rat(1)));
  CHECK(mm.images[v2] == unit_vec(1));
  CHECK(mm.images[v3].empty());  // e^2 = 0, so the primitive is zero

  const CheckReport report = minimal_model_check(mm, {0, 7});
  CHECK(report.ok);
}

TEST_CASE("the projective plane needs its generator in degree five") {
  MinimalModel mm = minimal_model(truncated_cp(2, 8), 7);
  REQUIRE(mm.model.generator_count() == 2);

  const int v2 = gen_id(mm.model, "v2_2_0");
  const int v5 = gen_id(mm.model, "v5_6_0");
  CHECK(mm.model.generator(v5).degree == 5);
  CHECK(mm.model.generator(v5).weight == 6);
  CHECK(mm.model.differential(v5) == cga_term({v2, v2, v2}, rat(1)));
  CHECK(mm.images[v2] == unit_vec(1));
  CHECK(mm.images[v5].empty());  // u^3 = 0 in the truncation

  CHECK(minimal_model_check(mm, {0, 6}).ok);

  // The construction preserves the formality weights on the nose.
  const PositivityReport signs = positivity_check(mm.model);
  CHECK(signs.generators.positive);
  CHECK_FALSE(signs.generators.negative);
  CHECK(signs.cohomology.positive);
  CHECK_FALSE(signs.generators.neither());
}

TEST_CASE("a minimal presentation is its own minimal model") {
  CdgaPresentation p({{"e2", 2, 2}, {"e3", 3, 4}}, {0, 9});
  p.set_differential(gen_id(p, "e3"),
                     cga_term({gen_id(p, "e2"), gen_id(p, "e2")}, rat(1)));

  MinimalModel mm = minimal_model(p, 7);
  REQUIRE(mm.model.generator_count() == 2);
  const int v2 = gen_id(mm.model, "v2_2_0");
  const int v3 = gen_id(mm.model, "v3_4_0");
  CHECK(mm.model.generator(v2).degree == 2);
  CHECK(mm.model.generator(v3).degree == 3);
  CHECK(mm.model.differential(v3) == cga_term({v2, v2}, rat(1)));
  CHECK(minimal_model_check(mm, {0, 7}).ok);

  // The presentation overload needs top slack for an honest materialization.
  CHECK(throws_with([&] {
    CdgaPresentation q({{"e2", 2, 2}, {"e3", 3, 4}}, {0, 8});
    minimal_model(q, 7);
  }, "window slack insufficient"));
}

TEST_CASE("a nonzero differential in the target forces a nonzero primitive") {
  MinimalModel mm = minimal_model(truncated_sphere_cells(), 5);
  REQUIRE(mm.model.generator_count() == 2);

  const int v2 = gen_id(mm.model, "v2_2_0");
  const int v3 = gen_id(mm.model, "v3_4_0");
  CHECK(mm.model.differential(v3) == cga_term({v2, v2}, rat(1)));
  CHECK(mm.images[v2] == unit_vec(1));  // a
  CHECK(mm.images[v3] == unit_vec(2));  // b, with d(b) = a^2

  CHECK(minimal_model_check(mm, {0, 4}).ok);
}

TEST_CASE("a product of spheres needs two killing generators") {
  MinimalModel mm = minimal_model(product_of_spheres(), 3);
  REQUIRE(mm.model.generator_count() == 4);

  int twos = 0;
  int threes = 0;
  for (const CgaGenerator& g : mm.model.generators()) {
    if (g.degree == 2) {
      ++twos;
      CHECK(g.weight == 2);
      CHECK(mm.model.differential(gen_id(mm.model, g.name)).is_zero());
    }
    if (g.degree == 3) {
      ++threes;
      CHECK(g.weight == 4);
    }
  }
  CHECK(twos == 2);
  CHECK(threes == 2);
  CHECK(minimal_model_check(mm, {0, 4}).ok);
}

TEST_CASE("the construction refuses ineligible inputs") {
  CHECK(throws_with([] { minimal_model(sphere_algebra(5), 7); },
                    "window slack insufficient"));

  FdAlgebra two_points = sphere_algebra(6);
  two_points.space.basis.push_back({"x", 0, 0});
  two_points.d = SparseMatrix(3, 3);
  two_points.set_product(0, 2, unit_vec(2));
  two_points.set_product(2, 0, unit_vec(2));
  two_points.set_product(2, 2, unit_vec(2));
  CHECK(throws_with([&] { minimal_model(two_points, 3); }, "not connected"));

  FdAlgebra circle = sphere_algebra(6);
  circle.space.basis.push_back({"t", 1, 1});
  circle.d = SparseMatrix(3, 3);
  circle.set_product(0, 2, unit_vec(2));
  circle.set_product(2, 0, unit_vec(2));
  circle.set_product(2, 2, {});
  CHECK(throws_with([&] { minimal_model(circle, 3); }, "not simply connected"));
}

TEST_CASE("formality weights are the cohomological degrees") {
  FdAlgebra h = truncated_cp(2, 6);
  for (BasisElement& b : h.space.basis) b.weight = 0;

  const FdAlgebra weighted = assign_formality_weights(h);
  CHECK(weighted.space.basis[0].weight == 0);
  CHECK(weighted.space.basis[1].weight == 2);
  CHECK(weighted.space.basis[2].weight == 4);

  CHECK(throws_with([] { assign_formality_weights(truncated_sphere_cells()); },
                    "zero differential"));
}

TEST_CASE("weight signs are read off generators and cohomology") {
  const DglaPresentation quillen = cp2_quillen({-6, -1});
  const PositivityReport lie_signs = positivity_check(quillen);
  CHECK(lie_signs.generators.negative);
  CHECK_FALSE(lie_signs.generators.positive);
  CHECK(lie_signs.cohomology.negative);
  CHECK_FALSE(lie_signs.cohomology.positive);

  const CdgaPresentation mixed({{"x", 2, 2}, {"z", 2, -1}}, {0, 4});
  const PositivityReport mixed_signs = positivity_check(mixed);
  CHECK(mixed_signs.generators.neither());
  CHECK(mixed_signs.cohomology.neither());
  CHECK_FALSE(mixed_signs.generators.notes.empty());

  const DglaPresentation abelian = cp2_quillen({-4, -1});
  const DglaBasis basis(abelian);
  const PositivityReport oo_signs = positivity_check(oo_from_dgla(basis, 2));
  CHECK(oo_signs.generators.negative);
  CHECK(oo_signs.cohomology.negative);
}

TEST_CASE("segmentation finds the tightest slope and width") {
  const FdAlgebra sphere = sphere_algebra(4);
  const SegmentationReport round = segmentation(cohomology(sphere.space, sphere.d, {0, 3}));
  CHECK(round.ok);
  CHECK(round.alpha == rat(1));
  CHECK(round.k == 0);

  const SegmentationReport fixed =
      segmentation(cohomology(sphere.space, sphere.d, {0, 3}), rat(1, 2));
  CHECK(fixed.ok);
  CHECK(fixed.k == 2);  // weight 2 sits at 2/alpha - 2 above the line

  const SegmentationReport widened =
      segmentation(synthetic_support({{0, 0}, {2, 2}, {2, 3}, {5, 5}}));
  CHECK(widened.ok);
  CHECK(widened.alpha == rat(1));
  CHECK(widened.k == 1);

  const SegmentationReport dead_weight = segmentation(synthetic_support({{2, 0}}));
  CHECK_FALSE(dead_weight.ok);
  CHECK_FALSE(dead_weight.failures.empty());

  const SegmentationReport lie_side = segmentation(synthetic_support({{-1, -1}, {-3, -3}}));
  CHECK(lie_side.ok);
  CHECK(lie_side.alpha == rat(1));
  CHECK(lie_side.k == 0);

  CHECK_THROWS_AS(segmentation(synthetic_support({{2, 2}}), rat(0)), std::invalid_argument);
}

TEST_CASE("coformality weights on models sit strictly below the degree") {
  CHECK(weight_degree_inequality_check(cp2_quillen({-6, -1})).ok);

  // The Chevalley-Eilenberg dual of a coformality-weighted free dgla also
  // satisfies the strict inequality monomial by monomial.
  const DglaPresentation wedge({{"x", -1, -1}, {"y", -2, -2}}, {-3, -1});
  const CeAlgebra ce = ce_algebra(wedge, {0, 5});
  CHECK(weight_degree_inequality_check(ce.presentation).ok);

  // Formality weights themselves fail: there the weight equals the degree.
  const CdgaPresentation pure({{"e2", 2, 2}}, {0, 4});
  const CheckReport flat = weight_degree_inequality_check(pure);
  CHECK_FALSE(flat.ok);
  CHECK(flat.failures.front().find("e2") != std::string::npos);
}

}  // TEST_SUITE
