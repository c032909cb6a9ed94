#include "wrht/linalg.hpp"

#include <algorithm>

namespace wrht {

namespace {

// Scales a rational row to a primitive integer row: clear denominators with
// their lcm, then divide out the gcd of the numerators.  Sign is kept.
void normalize_row(SparseVec& row) {
  if (row.empty()) return;
  Integer l(1);
  for (const auto& [c, v] : row) l = lcm(l, v.get_den());
  Integer g(0);
  for (const auto& [c, v] : row) g = gcd(g, Integer(v.get_num() * (l / v.get_den())));
  for (auto& [c, v] : row) v = rat(Integer(v.get_num() * (l / v.get_den())) / g, Integer(1));
}

RowReduction row_reduce_limited(const SparseMatrix& m, int pivot_limit) {
  const int nr = m.rows(), nc = m.cols();
  std::vector<SparseVec> rows(nr);
  std::vector<int> orig(nr);
  for (int r = 0; r < nr; ++r) {
    rows[r] = m.row(r);
    normalize_row(rows[r]);
    orig[r] = r;
  }

  RowReduction out;
  int processed = 0;
  for (int c = 0; c < pivot_limit && processed < nr; ++c) {
    // Candidate rows all have their leftmost support at column c.
    int best = -1;
    for (int r = processed; r < nr; ++r) {
      auto it = rows[r].find(c);
      if (it == rows[r].end()) continue;
      if (best == -1) {
        best = r;
        continue;
      }
      int cmp = mpz_cmpabs(it->second.get_num().get_mpz_t(), rows[best].at(c).get_num().get_mpz_t());
      if (cmp < 0 || (cmp == 0 && orig[r] < orig[best])) best = r;
    }
    if (best == -1) continue;
    std::swap(rows[processed], rows[best]);
    std::swap(orig[processed], orig[best]);
    const SparseVec pivot_row = rows[processed];
    const Rational pivot_val = pivot_row.at(c);
    for (int r = 0; r < nr; ++r) {
      if (r == processed) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end()) continue;
      // Fraction-free update keeps integer rows integer.
      const Rational factor = it->second;
      SparseVec next = vec_scale(rows[r], pivot_val);
      vec_add_scaled(next, pivot_row, -factor);
      normalize_row(next);
      rows[r] = std::move(next);
    }
    out.pivots.push_back(c);
    ++processed;
  }

  out.rank = processed;
  out.rref = SparseMatrix(nr, nc);
  for (int r = 0; r < processed; ++r) {
    const Rational pv = rows[r].at(out.pivots[r]);
    out.rref.set_row(r, vec_scale(rows[r], Rational(1) / pv));
  }
  // With pivot_limit == nc the remaining rows are zero; with a limit (the
  // augmented-solve case) they still carry the elimination coefficients.
  for (int r = processed; r < nr; ++r) out.rref.set_row(r, rows[r]);
  return out;
}

}  // namespace

RowReduction row_reduce(const SparseMatrix& m) { return row_reduce_limited(m, m.cols()); }

std::vector<SparseVec> kernel_basis(const SparseMatrix& m) {
  RowReduction red = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : red.pivots) is_pivot[p] = true;
  std::vector<SparseVec> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SparseVec v;
    v.emplace(f, Rational(1));
    for (int r = 0; r < red.rank; ++r) {
      Rational coeff = red.rref.at(r, f);
      if (!is_zero(coeff)) v.emplace(red.pivots[r], -coeff);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<SparseVec> quotient_representatives(const SparseMatrix& subspace, int ambient_dim) {
  if (subspace.cols() != ambient_dim) throw std::invalid_argument("subspace/ambient mismatch");
  RowReduction red = row_reduce(subspace);
  std::vector<bool> is_pivot(ambient_dim, false);
  for (int p : red.pivots) is_pivot[p] = true;
  std::vector<SparseVec> reps;
  for (int c = 0; c < ambient_dim; ++c)
    if (!is_pivot[c]) reps.push_back(unit_vec(c));
  return reps;
}

SparseVec reduce_against(const RowReduction& red, const SparseVec& v) {
  SparseVec out = v;
  for (int r = 0; r < red.rank; ++r) {
    Rational c = vec_coeff(out, red.pivots[r]);
    if (!is_zero(c)) vec_add_scaled(out, red.rref.row(r), -c);
  }
  return out;
}

std::vector<SparseVec> quotient_basis(const std::vector<SparseVec>& cycles,
                                      const std::vector<SparseVec>& boundaries, int dim) {
  SparseMatrix b(static_cast<int>(boundaries.size()), dim);
  for (int r = 0; r < static_cast<int>(boundaries.size()); ++r) b.set_row(r, boundaries[r]);
  RowReduction red_b = row_reduce(b);

  SparseMatrix z(static_cast<int>(cycles.size()), dim);
  for (int r = 0; r < static_cast<int>(cycles.size()); ++r)
    z.set_row(r, reduce_against(red_b, cycles[r]));
  RowReduction red_z = row_reduce(z);

  std::vector<SparseVec> reps;
  for (int r = 0; r < red_z.rank; ++r) reps.push_back(red_z.rref.row(r));
  return reps;
}

int rank_of_rows(const std::vector<SparseVec>& rows, int dim) {
  SparseMatrix m(static_cast<int>(rows.size()), dim);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) m.set_row(r, rows[r]);
  return row_reduce(m).rank;
}

RrefSolver::RrefSolver(const SparseMatrix& a) : rows_(a.rows()), cols_(a.cols()) {
  SparseMatrix aug(rows_, cols_ + rows_);
  for (int r = 0; r < rows_; ++r) {
    SparseVec row = a.row(r);
    row.emplace(cols_ + r, Rational(1));
    aug.set_row(r, std::move(row));
  }
  red_ = row_reduce_limited(aug, cols_);
}

std::optional<SparseVec> RrefSolver::solve(const SparseVec& b) const {
  for (const auto& [i, v] : b) {
    if (i < 0 || i >= rows_) throw std::out_of_range("rhs index");
    (void)v;
  }
  auto transformed = [&](int r) {
    Rational acc(0);
    for (const auto& [c, v] : red_.rref.row(r)) {
      if (c < cols_) continue;
      auto it = b.find(c - cols_);
      if (it != b.end()) acc += v * it->second;
    }
    return acc;
  };
  for (int r = red_.rank; r < rows_; ++r)
    if (!is_zero(transformed(r))) return std::nullopt;
  SparseVec x;
  for (int r = 0; r < red_.rank; ++r) {
    Rational v = transformed(r);
    if (!is_zero(v)) x.emplace(red_.pivots[r], v);
  }
  return x;
}

std::optional<SparseVec> solve_linear(const SparseMatrix& a, const SparseVec& b) {
  return RrefSolver(a).solve(b);
}

}  // namespace wrht
