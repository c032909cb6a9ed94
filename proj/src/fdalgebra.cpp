#include "wrht/fdalgebra.hpp"

#include <stdexcept>

namespace wrht {

SparseVec FdAlgebra::multiply(int i, int j) const {
  auto it = product.find({i, j});
  return it == product.end() ? SparseVec{} : it->second;
}

SparseVec FdAlgebra::multiply(const SparseVec& a, const SparseVec& b) const {
  SparseVec out;
  for (const auto& [i, ci] : a)
    for (const auto& [j, cj] : b) vec_add_scaled(out, multiply(i, j), ci * cj);
  return out;
}

void FdAlgebra::set_product(int i, int j, SparseVec value) {
  if (i < 0 || i >= dim() || j < 0 || j >= dim()) throw std::out_of_range("product index");
  if (value.empty()) {
    product.erase({i, j});
  } else {
    product[{i, j}] = std::move(value);
  }
}

CheckReport check_fdalgebra(const FdAlgebra& a) {
  CheckReport report;
  const GradedSlice& s = a.space;
  const int n = a.dim();
  s.validate();
  auto label = [&](int i) { return s.basis[i].label; };

  if (a.d.rows() != n || a.d.cols() != n) {
    report.fail("differential matrix shape does not match the basis");
    return report;
  }

  for (int r = 0; r < n; ++r)
    for (const auto& [c, v] : a.d.row(r)) {
      (void)v;
      if (s.degree(r) != s.degree(c) + 1 || s.weight(r) != s.weight(c)) {
        report.fail("d(" + label(c) + ") has support outside degree +1 / weight 0");
        break;
      }
    }

  if ((a.d * a.d).nonzero_count() != 0) report.fail("d^2 != 0");

  for (const auto& [key, value] : a.product) {
    const auto [i, j] = key;
    bool bad = false;
    for (const auto& [t, c] : value) {
      (void)c;
      if (s.degree(t) != s.degree(i) + s.degree(j) || s.weight(t) != s.weight(i) + s.weight(j))
        bad = true;
    }
    if (bad) report.fail("product " + label(i) + " * " + label(j) + " leaves its degree/weight block");
  }

  if (a.unit >= 0) {
    if (a.unit >= n) {
      report.fail("unit index out of range");
    } else if (s.degree(a.unit) != 0 || s.weight(a.unit) != 0) {
      report.fail("unit is not in degree 0 / weight 0");
    } else {
      for (int j = 0; j < n; ++j) {
        if (a.multiply(a.unit, j) != unit_vec(j) || a.multiply(j, a.unit) != unit_vec(j)) {
          report.fail("unit law fails on " + label(j));
          break;
        }
      }
    }
  }

  if (a.commutative) {
    for (int i = 0; i < n && report.ok; ++i)
      for (int j = 0; j < n; ++j) {
        SparseVec diff = a.multiply(i, j);
        const int sign = (s.degree(i) * s.degree(j)) % 2 ? -1 : 1;
        vec_add_scaled(diff, a.multiply(j, i), Rational(-sign));
        if (!diff.empty()) {
          report.fail("commutativity fails on (" + label(i) + ", " + label(j) + ")");
          break;
        }
      }
  }

  for (int i = 0; i < n && report.ok; ++i)
    for (int j = 0; j < n; ++j) {
      SparseVec diff = a.d.apply(a.multiply(i, j));
      vec_add_scaled(diff, a.multiply(a.d.apply(unit_vec(i)), unit_vec(j)), Rational(-1));
      const int sign = s.degree(i) % 2 ? -1 : 1;
      vec_add_scaled(diff, a.multiply(unit_vec(i), a.d.apply(unit_vec(j))), Rational(-sign));
      if (!diff.empty()) {
        report.fail("Leibniz fails on (" + label(i) + ", " + label(j) + ")");
        break;
      }
    }

  for (int i = 0; i < n && report.ok; ++i)
    for (int j = 0; j < n && report.ok; ++j)
      for (int k = 0; k < n; ++k) {
        SparseVec diff = a.multiply(a.multiply(i, j), unit_vec(k));
        vec_add_scaled(diff, a.multiply(unit_vec(i), a.multiply(j, k)), Rational(-1));
        if (!diff.empty()) {
          report.fail("associativity fails on (" + label(i) + ", " + label(j) + ", " + label(k) + ")");
          break;
        }
      }

  return report;
}

FdAlgebra fd_from_cga(const CgaBasis& basis) {
  FdAlgebra out;
  out.space = basis.slice();
  out.unit = basis.unit_index();
  out.commutative = true;
  out.d = basis.differential_matrix();
  const CdgaPresentation& p = basis.presentation();
  std::vector<CgaElement> elems;
  elems.reserve(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) elems.push_back(basis.element(unit_vec(i)));
  for (int i = 0; i < basis.dim(); ++i)
    for (int j = 0; j < basis.dim(); ++j) {
      SparseVec prod = basis.coords(p.multiply(elems[i], elems[j]));
      if (!prod.empty()) out.set_product(i, j, std::move(prod));
    }
  return out;
}

}  // namespace wrht
