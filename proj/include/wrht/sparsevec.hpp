#pragma once

#include <map>
#include <vector>

#include "wrht/rational.hpp"

namespace wrht {

// Sparse vector over Q, indexed by basis position.  Invariant: no explicit
// zero entries.  std::map keeps the support sorted, which keeps every
// downstream computation deterministic.
using SparseVec = std::map<int, Rational>;

inline void vec_add_scaled(SparseVec& dst, const SparseVec& src, const Rational& c) {
  if (is_zero(c)) return;
  for (const auto& [i, v] : src) {
    auto it = dst.find(i);
    if (it == dst.end()) {
      dst.emplace(i, v * c);
    } else {
      it->second += v * c;
      if (is_zero(it->second)) dst.erase(it);
    }
  }
}

inline void vec_add_scaled(SparseVec& dst, int index, const Rational& c) {
  if (is_zero(c)) return;
  auto it = dst.find(index);
  if (it == dst.end()) {
    dst.emplace(index, c);
  } else {
    it->second += c;
    if (is_zero(it->second)) dst.erase(it);
  }
}

inline SparseVec vec_scale(const SparseVec& v, const Rational& c) {
  SparseVec out;
  if (is_zero(c)) return out;
  for (const auto& [i, x] : v) out.emplace(i, x * c);
  return out;
}

inline Rational vec_coeff(const SparseVec& v, int index) {
  auto it = v.find(index);
  return it == v.end() ? Rational(0) : it->second;
}

inline SparseVec unit_vec(int index) {
  SparseVec v;
  v.emplace(index, Rational(1));
  return v;
}

}  // namespace wrht
