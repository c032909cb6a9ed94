#include <doctest.h>

#include "wrht/grading.hpp"

using namespace wrht;

namespace {

GradedSlice two_term() {
  GradedSlice s;
  s.window = {0, 1};
  s.basis = {{"a", 0, 0}, {"b", 1, 0}};
  return s;
}

}  // namespace

TEST_SUITE("graded") {

TEST_CASE("shift moves degrees by -k and round-trips") {
  GradedSlice s;
  s.window = {2, 2};
  s.basis = {{"x", 2, 5}};
  GradedSlice down = shift(s, 1);  // desuspension: degree drops by one
  CHECK(down.basis[0].degree == 1);
  CHECK(down.basis[0].weight == 5);
  CHECK(down.window.min_degree == 1);
  GradedSlice back = shift(down, -1);
  CHECK(back.basis[0].degree == 2);
  CHECK(shift(s, 0).basis == s.basis);
}

TEST_CASE("dualize negates degree and weight") {
  GradedSlice s;
  s.window = {2, 2};
  s.basis = {{"u", 2, 2}};
  GradedSlice d = dualize(s);
  CHECK(d.basis[0].degree == -2);
  CHECK(d.basis[0].weight == -2);
  CHECK(d.window.min_degree == -2);
  CHECK(d.window.max_degree == -2);
  GradedSlice dd = dualize(d);
  CHECK(dd.basis[0].degree == 2);
  CHECK(dd.basis[0].weight == 2);
}

TEST_CASE("tensor adds degrees and weights") {
  GradedSlice a, b;
  a.window = {1, 2};
  a.basis = {{"x", 1, 3}, {"y", 2, 0}};
  b.window = {4, 4};
  b.basis = {{"z", 4, -1}};
  std::vector<std::pair<int, int>> pairs;
  GradedSlice t = tensor(a, b, &pairs);
  REQUIRE(t.dim() == 2);
  CHECK(t.basis[0].degree == 5);
  CHECK(t.basis[0].weight == 2);
  CHECK(t.basis[1].degree == 6);
  CHECK(t.basis[1].weight == -1);
  CHECK(pairs[1] == std::pair<int, int>{1, 0});
}

TEST_CASE("map slice validation enforces the block discipline") {
  GradedSlice s = two_term();
  LinearMapSlice f;
  f.source = s;
  f.target = s;
  f.degree_shift = 1;
  f.weight_shift = 0;
  f.matrix = SparseMatrix(2, 2);
  f.matrix.set(1, 0, rat(1));  // a (deg 0) -> b (deg 1): consistent
  CHECK_NOTHROW(f.validate());
  f.matrix.set(0, 1, rat(1));  // b -> a would need shift -1
  CHECK_THROWS(f.validate());
}

TEST_CASE("composition adds shifts") {
  GradedSlice s = two_term();
  LinearMapSlice f;
  f.source = s;
  f.target = s;
  f.degree_shift = 1;
  f.matrix = SparseMatrix(2, 2);
  f.matrix.set(1, 0, rat(2));
  LinearMapSlice g = f;
  g.degree_shift = -1;
  g.matrix = SparseMatrix(2, 2);
  g.matrix.set(0, 1, rat(3));
  LinearMapSlice gf = compose(g, f);
  CHECK(gf.degree_shift == 0);
  CHECK(gf.matrix.at(0, 0) == rat(6));
}

TEST_CASE("cohomology of a two-term acyclic complex vanishes") {
  GradedSlice s = two_term();
  SparseMatrix d(2, 2);
  d.set(1, 0, rat(1));  // d(a) = b
  CohomologyReport h = cohomology(s, d, {0, 1});
  CHECK(h.dim(0, 0) == 0);
  CHECK(h.dim(1, 0) == 0);
  CHECK(h.support().empty());
}

TEST_CASE("cohomology detects surviving classes per weight block") {
  GradedSlice s;
  s.window = {0, 1};
  s.basis = {{"a", 0, 0}, {"a2", 0, 2}, {"b", 1, 2}};
  SparseMatrix d(3, 3);
  d.set(2, 1, rat(5));  // d(a2) = 5 b, weight preserved
  CohomologyReport h = cohomology(s, d, {0, 1});
  CHECK(h.dim(0, 0) == 1);
  CHECK(h.dim(0, 2) == 0);
  CHECK(h.dim(1, 2) == 0);
  CHECK(h.total_dim(0) == 1);
  REQUIRE(h.entries.count({0, 0}) == 1);
  CHECK(h.entries[{0, 0}].representatives[0] == unit_vec(0));
}

}  // TEST_SUITE
