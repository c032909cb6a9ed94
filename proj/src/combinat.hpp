#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "wrht/grading.hpp"

// Shared enumeration helpers for the homotopy-algebra translation units.
// Everything here is deterministic: tuples, combinations, partitions and
// compositions come out in a fixed canonical order.

namespace wrht {
namespace detail {

// Odometer over index tuples of fixed length; weakly increasing tuples are
// the canonical representatives for symmetric (lie) inputs.
inline bool advance_tuple(std::vector<int>& t, int dim, bool weakly_increasing) {
  for (int pos = static_cast<int>(t.size()) - 1; pos >= 0; --pos) {
    if (t[pos] + 1 < dim) {
      ++t[pos];
      for (size_t q = pos + 1; q < t.size(); ++q) t[q] = weakly_increasing ? t[pos] : 0;
      return true;
    }
  }
  return false;
}

// Strictly increasing position subsets of {0..m-1}.
inline bool advance_combination(std::vector<int>& c, int m) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == m - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

// Koszul parity of the permutation listing original positions in their new
// order, over the bar degrees attached to the original positions: one sign
// flip per inverted pair of odd bar degrees.
inline int koszul_parity(const std::vector<int>& bar_at_position, const std::vector<int>& order) {
  int parity = 0;
  for (size_t u = 0; u < order.size(); ++u)
    for (size_t v = u + 1; v < order.size(); ++v)
      if (order[u] > order[v] && (bar_at_position[order[u]] & 1) && (bar_at_position[order[v]] & 1))
        parity ^= 1;
  return parity;
}

// Set partitions of {0..m-1} as block lists, each block ascending, blocks
// ordered by least element (restricted growth strings).
inline std::vector<std::vector<std::vector<int>>> set_partitions(int m) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> rgs(m, 0);
  while (true) {
    int nblocks = 0;
    for (int v : rgs) nblocks = std::max(nblocks, v + 1);
    std::vector<std::vector<int>> blocks(nblocks);
    for (int p = 0; p < m; ++p) blocks[rgs[p]].push_back(p);
    out.push_back(std::move(blocks));
    int i = m - 1;
    for (; i > 0; --i) {
      int cap = 0;
      for (int p = 0; p < i; ++p) cap = std::max(cap, rgs[p] + 1);
      if (rgs[i] < cap) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

// Ordered compositions of m into k strictly positive parts.
inline std::vector<std::vector<int>> compositions(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int parts) {
    if (parts == 1) {
      if (left >= 1) {
        cur.push_back(left);
        out.push_back(cur);
        cur.pop_back();
      }
      return;
    }
    for (int first = 1; first <= left - (parts - 1); ++first) {
      cur.push_back(first);
      rec(left - first, parts - 1);
      cur.pop_back();
    }
  };
  if (k >= 1) rec(m, k);
  return out;
}

inline std::string tuple_labels(const GradedSlice& s, const std::vector<int>& tuple) {
  std::string out = "(";
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ", ";
    out += s.basis[tuple[i]].label;
  }
  return out + ")";
}

}  // namespace detail
}  // namespace wrht
