#include "wrht/grading.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace wrht {

std::vector<int> GradedSlice::block(int degree, int weight) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis[i].degree == degree && basis[i].weight == weight) out.push_back(i);
  return out;
}

std::vector<int> GradedSlice::degree_indices(int degree) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis[i].degree == degree) out.push_back(i);
  return out;
}

std::vector<Bidegree> GradedSlice::bidegrees() const {
  std::set<Bidegree> seen;
  for (const auto& b : basis) seen.insert({b.degree, b.weight});
  return {seen.begin(), seen.end()};
}

std::vector<int> GradedSlice::weights_in_degree(int degree) const {
  std::set<int> seen;
  for (const auto& b : basis)
    if (b.degree == degree) seen.insert(b.weight);
  return {seen.begin(), seen.end()};
}

void GradedSlice::validate() const {
  for (const auto& b : basis)
    if (!window.contains(b.degree))
      throw std::runtime_error("basis element '" + b.label + "' outside window");
}

GradedSlice shift(const GradedSlice& s, int k) {
  GradedSlice out = s;
  out.window.min_degree -= k;
  out.window.max_degree -= k;
  for (auto& b : out.basis) b.degree -= k;
  return out;
}

GradedSlice dualize(const GradedSlice& s) {
  GradedSlice out;
  out.window = {-s.window.max_degree, -s.window.min_degree};
  out.basis.reserve(s.basis.size());
  for (const auto& b : s.basis) out.basis.push_back({b.label + "'", -b.degree, -b.weight});
  return out;
}

GradedSlice tensor(const GradedSlice& a, const GradedSlice& b,
                   std::vector<std::pair<int, int>>* factor_pairs) {
  GradedSlice out;
  out.window = {a.window.min_degree + b.window.min_degree,
                a.window.max_degree + b.window.max_degree};
  if (factor_pairs) factor_pairs->clear();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) {
      out.basis.push_back({a.basis[i].label + "(x)" + b.basis[j].label,
                           a.basis[i].degree + b.basis[j].degree,
                           a.basis[i].weight + b.basis[j].weight});
      if (factor_pairs) factor_pairs->push_back({i, j});
    }
  return out;
}

void LinearMapSlice::validate() const {
  if (matrix.rows() != target.dim() || matrix.cols() != source.dim())
    throw std::runtime_error("map matrix shape does not match slices");
  for (int r = 0; r < matrix.rows(); ++r)
    for (const auto& [c, v] : matrix.row(r)) {
      (void)v;
      if (target.basis[r].degree != source.basis[c].degree + degree_shift ||
          target.basis[r].weight != source.basis[c].weight + weight_shift)
        throw std::runtime_error("map entry violates degree/weight shift at (" +
                                 target.basis[r].label + ", " + source.basis[c].label + ")");
    }
}

LinearMapSlice compose(const LinearMapSlice& g, const LinearMapSlice& f) {
  LinearMapSlice out;
  out.source = f.source;
  out.target = g.target;
  out.degree_shift = f.degree_shift + g.degree_shift;
  out.weight_shift = f.weight_shift + g.weight_shift;
  out.matrix = g.matrix * f.matrix;
  return out;
}

MatrixBlock extract_block(const GradedSlice& source, const GradedSlice& target,
                          const SparseMatrix& m, int degree, int weight, int degree_shift,
                          int weight_shift) {
  MatrixBlock out;
  out.source_indices = source.block(degree, weight);
  out.target_indices = target.block(degree + degree_shift, weight + weight_shift);
  std::map<int, int> tpos;
  for (int k = 0; k < static_cast<int>(out.target_indices.size()); ++k)
    tpos[out.target_indices[k]] = k;
  out.matrix = SparseMatrix(static_cast<int>(out.target_indices.size()),
                            static_cast<int>(out.source_indices.size()));
  for (int k = 0; k < static_cast<int>(out.source_indices.size()); ++k) {
    // column of m at source index: walk rows via transpose-free scan
    for (int r = 0; r < m.rows(); ++r) {
      Rational v = vec_coeff(m.row(r), out.source_indices[k]);
      if (is_zero(v)) continue;
      auto it = tpos.find(r);
      if (it == tpos.end())
        throw std::runtime_error("matrix entry leaves the requested block");
      out.matrix.set(it->second, k, v);
    }
  }
  return out;
}

int CohomologyReport::dim(int degree, int weight) const {
  auto it = entries.find({degree, weight});
  return it == entries.end() ? 0 : it->second.dim;
}

int CohomologyReport::total_dim(int degree) const {
  int n = 0;
  for (const auto& [dw, e] : entries)
    if (dw.first == degree) n += e.dim;
  return n;
}

std::vector<Bidegree> CohomologyReport::support() const {
  std::vector<Bidegree> out;
  for (const auto& [dw, e] : entries)
    if (e.dim > 0) out.push_back(dw);
  return out;
}

CohomologyReport cohomology(const GradedSlice& space, const SparseMatrix& d,
                            const DegreeWindow& request) {
  if (d.rows() != space.dim() || d.cols() != space.dim())
    throw std::invalid_argument("differential shape does not match slice");
  if (!space.window.contains(request))
    throw std::invalid_argument("cohomology request exceeds slice window");
  CohomologyReport report;
  report.window = request;
  // Collect the weights present near each requested degree.
  for (int n = request.min_degree; n <= request.max_degree; ++n) {
    std::set<int> weights;
    for (const auto& b : space.basis)
      if (b.degree == n) weights.insert(b.weight);
    for (int p : weights) {
      MatrixBlock out_block = extract_block(space, space, d, n, p, 1, 0);
      std::vector<SparseVec> cycles_local = kernel_basis(out_block.matrix);
      // Lift local kernel coordinates to slice coordinates.
      std::vector<SparseVec> cycles;
      for (const auto& k : cycles_local) {
        SparseVec v;
        for (const auto& [pos, c] : k) v[out_block.source_indices[pos]] = c;
        cycles.push_back(std::move(v));
      }
      std::vector<SparseVec> boundaries;
      if (n - 1 >= space.window.min_degree) {
        for (int i : space.block(n - 1, p)) {
          SparseVec img;
          for (int r = 0; r < d.rows(); ++r) {
            Rational v = vec_coeff(d.row(r), i);
            if (!is_zero(v)) img[r] = v;
          }
          if (!img.empty()) boundaries.push_back(std::move(img));
        }
      }
      auto reps = quotient_basis(cycles, boundaries, space.dim());
      if (reps.empty()) continue;
      CohomologyEntry e;
      e.degree = n;
      e.weight = p;
      e.dim = static_cast<int>(reps.size());
      e.representatives = std::move(reps);
      report.entries[{n, p}] = std::move(e);
    }
  }
  return report;
}

void compare_cohomology(const CohomologyReport& upstairs, const CohomologyReport& downstairs,
                        const SparseMatrix& f, const GradedSlice& target,
                        const SparseMatrix& d_target, CheckReport& report) {
  std::set<Bidegree> blocks;
  for (const auto& [key, entry] : upstairs.entries) {
    (void)entry;
    blocks.insert(key);
  }
  for (const auto& [key, entry] : downstairs.entries) {
    (void)entry;
    blocks.insert(key);
  }
  for (const auto& [degree, weight] : blocks) {
    const int dim_up = upstairs.dim(degree, weight);
    const int dim_down = downstairs.dim(degree, weight);
    if (dim_up != dim_down) {
      report.fail("cohomology dimensions differ at (" + std::to_string(degree) + ", " +
                  std::to_string(weight) + "): " + std::to_string(dim_up) + " upstairs vs " +
                  std::to_string(dim_down));
      continue;
    }
    if (dim_down == 0) continue;
    std::vector<SparseVec> span;
    for (int i : target.block(degree - 1, weight)) {
      SparseVec boundary = d_target.apply(unit_vec(i));
      if (!boundary.empty()) span.push_back(std::move(boundary));
    }
    const int boundary_rank = rank_of_rows(span, target.dim());
    for (const SparseVec& rep : upstairs.entries.at({degree, weight}).representatives)
      span.push_back(f.apply(rep));
    if (rank_of_rows(span, target.dim()) != boundary_rank + dim_down)
      report.fail("induced map misses part of cohomology at (" + std::to_string(degree) + ", " +
                  std::to_string(weight) + ")");
  }
}

}  // namespace wrht
