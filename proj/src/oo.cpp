#include "wrht/oo.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "combinat.hpp"

namespace wrht {

using detail::advance_combination;
using detail::advance_tuple;
using detail::compositions;
using detail::koszul_parity;
using detail::set_partitions;
using detail::tuple_labels;

std::string op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::assoc: return "assoc";
    case OpKind::comm: return "comm";
    case OpKind::lie: return "lie";
  }
  throw std::logic_error("unknown op kind");
}

int susp_sign_parity(const std::vector<int>& degrees) {
  const int k = static_cast<int>(degrees.size());
  int parity = 0;
  for (int j = 0; j < k; ++j) parity += (k - 1 - j) * (degrees[j] - 1);
  return ((parity % 2) + 2) % 2;
}

OoStructure::OoStructure(OpKind kind, GradedSlice space, int arity_bound)
    : kind_(kind), space_(std::move(space)), arity_bound_(arity_bound) {
  if (arity_bound_ < 1) throw std::invalid_argument("arity bound must be >= 1");
  space_.validate();
  ops_.resize(arity_bound_ + 1);
}

std::optional<std::pair<std::vector<int>, int>> OoStructure::canonical(
    std::vector<int> inputs) const {
  int parity = 0;
  for (size_t i = 1; i < inputs.size(); ++i)
    for (size_t j = i; j > 0 && inputs[j - 1] > inputs[j]; --j) {
      if ((bar_degree(inputs[j - 1]) & 1) && (bar_degree(inputs[j]) & 1)) parity ^= 1;
      std::swap(inputs[j - 1], inputs[j]);
    }
  for (size_t i = 0; i + 1 < inputs.size(); ++i)
    if (inputs[i] == inputs[i + 1] && (bar_degree(inputs[i]) & 1)) return std::nullopt;
  return std::make_pair(std::move(inputs), parity);
}

void OoStructure::set_bar_op(int arity, const std::vector<int>& inputs, const SparseVec& value) {
  if (arity < 1 || arity > arity_bound_) throw std::invalid_argument("op arity outside [1, arity_bound]");
  if (static_cast<int>(inputs.size()) != arity) throw std::invalid_argument("op tuple size != arity");
  int bar_out = 1;
  int weight_out = 0;
  for (int i : inputs) {
    if (i < 0 || i >= dim()) throw std::out_of_range("basis index in op inputs");
    bar_out += bar_degree(i);
    weight_out += space_.weight(i);
  }
  for (const auto& [t, c] : value) {
    (void)c;
    if (t < 0 || t >= dim()) throw std::out_of_range("basis index in op value");
    if (bar_degree(t) != bar_out || space_.weight(t) != weight_out)
      throw std::invalid_argument("op value leaves its degree/weight block");
  }
  std::vector<int> key = inputs;
  SparseVec stored = value;
  if (kind_ == OpKind::lie) {
    auto canon = canonical(key);
    if (!canon) {
      if (!value.empty())
        throw std::invalid_argument("op value on a tuple repeating an odd input must vanish");
      return;
    }
    key = std::move(canon->first);
    if (canon->second) stored = vec_scale(stored, Rational(-1));
  }
  if (stored.empty()) {
    ops_[arity].erase(key);
  } else {
    ops_[arity][key] = std::move(stored);
  }
}

SparseVec OoStructure::bar_op(int arity, const std::vector<int>& inputs) const {
  if (arity < 1) throw std::invalid_argument("op arity must be >= 1");
  if (static_cast<int>(inputs.size()) != arity) throw std::invalid_argument("op tuple size != arity");
  if (arity > arity_bound_) return {};  // ops beyond the bound are declared zero
  const std::map<std::vector<int>, SparseVec>& table = ops_[arity];
  if (kind_ == OpKind::lie) {
    auto canon = canonical(inputs);
    if (!canon) return {};
    auto it = table.find(canon->first);
    if (it == table.end()) return {};
    return canon->second ? vec_scale(it->second, Rational(-1)) : it->second;
  }
  auto it = table.find(inputs);
  return it == table.end() ? SparseVec{} : it->second;
}

const std::map<std::vector<int>, SparseVec>& OoStructure::bar_ops(int arity) const {
  if (arity < 1 || arity > arity_bound_) throw std::invalid_argument("op arity outside [1, arity_bound]");
  return ops_[arity];
}

void OoStructure::set_op(int arity, const std::vector<int>& inputs, const SparseVec& value) {
  std::vector<int> degrees;
  degrees.reserve(inputs.size());
  for (int i : inputs) degrees.push_back(space_.degree(i));
  set_bar_op(arity, inputs, susp_sign_parity(degrees) ? vec_scale(value, Rational(-1)) : value);
}

SparseVec OoStructure::op(int arity, const std::vector<int>& inputs) const {
  std::vector<int> degrees;
  degrees.reserve(inputs.size());
  for (int i : inputs) degrees.push_back(space_.degree(i));
  SparseVec v = bar_op(arity, inputs);
  return susp_sign_parity(degrees) ? vec_scale(v, Rational(-1)) : v;
}

SparseVec OoStructure::eval_bar(int arity, const std::vector<SparseVec>& inputs) const {
  if (static_cast<int>(inputs.size()) != arity) throw std::invalid_argument("op tuple size != arity");
  SparseVec out;
  std::vector<int> idx(arity);
  std::function<void(int, const Rational&)> rec = [&](int slot, const Rational& coeff) {
    if (slot == arity) {
      vec_add_scaled(out, bar_op(arity, idx), coeff);
      return;
    }
    for (const auto& [i, c] : inputs[slot]) {
      idx[slot] = i;
      rec(slot + 1, coeff * c);
    }
  };
  rec(0, Rational(1));
  return out;
}

SparseMatrix OoStructure::d_matrix() const {
  SparseMatrix d(dim(), dim());
  for (const auto& [key, value] : ops_[1])
    for (const auto& [t, c] : value) d.set(t, key[0], c);
  return d;
}

bool OoStructure::arity_used(int arity) const {
  return arity >= 1 && arity <= arity_bound_ && !ops_[arity].empty();
}

CheckReport check_relations(const OoStructure& s, int up_to_arity) {
  if (up_to_arity < 1) throw std::invalid_argument("relation arity must be >= 1");
  CheckReport report;
  const GradedSlice& space = s.space();
  const int dim = s.dim();
  if (dim == 0) return report;

  // Blocks that actually carry basis elements; relation terms all land in the
  // block of the tuple's total (degree, weight), so empty targets are skipped.
  std::set<Bidegree> present;
  for (const auto& b : space.basis) present.insert({b.degree, b.weight});

  const bool lie = s.kind() == OpKind::lie;
  for (int m = 1; m <= up_to_arity; ++m) {
    std::vector<int> tuple(m, 0);
    do {
      int total_degree = 2 - m;
      int total_weight = 0;
      for (int i : tuple) {
        total_degree += space.degree(i);
        total_weight += space.weight(i);
      }
      // Every relation term is a double application, so it lands in the
      // block of bar degree (sum of bars) + 2.
      if (!present.count({total_degree + 1, total_weight})) continue;
      std::vector<int> bar_at_position(m);
      for (int p = 0; p < m; ++p) bar_at_position[p] = s.bar_degree(tuple[p]);

      SparseVec total;
      if (lie) {
        for (int i = 1; i <= m; ++i) {
          const int j = m + 1 - i;
          std::vector<int> comb(i);
          for (int p = 0; p < i; ++p) comb[p] = p;
          do {
            std::vector<int> inner_idx(i);
            for (int p = 0; p < i; ++p) inner_idx[p] = tuple[comb[p]];
            SparseVec inner = s.bar_op(i, inner_idx);
            if (inner.empty()) continue;
            std::vector<int> order = comb;
            std::vector<int> outer(j);
            int next = 1;
            for (int p = 0, c = 0; p < m; ++p) {
              if (c < i && comb[c] == p) {
                ++c;
              } else {
                order.push_back(p);
                outer[next++] = tuple[p];
              }
            }
            const int eps = koszul_parity(bar_at_position, order);
            for (const auto& [t, c] : inner) {
              outer[0] = t;
              vec_add_scaled(total, s.bar_op(j, outer), eps ? -c : c);
            }
          } while (advance_combination(comb, m));
        }
      } else {
        for (int r = 0; r < m; ++r) {
          int sign = 0;
          for (int p = 0; p < r; ++p) sign ^= bar_at_position[p] & 1;
          for (int len = 1; r + len <= m; ++len) {
            const int tail = m - r - len;
            std::vector<int> run(tuple.begin() + r, tuple.begin() + r + len);
            SparseVec inner = s.bar_op(len, run);
            if (inner.empty()) continue;
            std::vector<int> outer(r + 1 + tail);
            for (int p = 0; p < r; ++p) outer[p] = tuple[p];
            for (int p = r + len; p < m; ++p) outer[p - len + 1] = tuple[p];
            for (const auto& [t, c] : inner) {
              outer[r] = t;
              vec_add_scaled(total, s.bar_op(r + 1 + tail, outer), sign ? -c : c);
            }
          }
        }
      }
      if (!total.empty()) {
        report.fail(op_kind_name(s.kind()) + " structure relation fails at arity " +
                    std::to_string(m) + " on " + tuple_labels(space, tuple));
        return report;
      }
    } while (advance_tuple(tuple, dim, lie));
  }

  if (s.kind() == OpKind::comm) {
    // C-infinity: every b_m vanishes on (p, m-p)-shuffle sums.
    for (int m = 2; m <= up_to_arity; ++m) {
      for (int p = 1; p < m; ++p) {
        std::vector<int> tuple(m, 0);
        do {
          // A single application of b_m lands in degree (sum deg) - m + 2.
          int total_degree = 2 - m;
          int total_weight = 0;
          for (int i : tuple) {
            total_degree += space.degree(i);
            total_weight += space.weight(i);
          }
          if (!present.count({total_degree, total_weight})) continue;
          std::vector<int> bar_at_position(m);
          for (int q = 0; q < m; ++q) bar_at_position[q] = s.bar_degree(tuple[q]);

          SparseVec total;
          std::vector<int> comb(p);
          for (int q = 0; q < p; ++q) comb[q] = q;
          do {
            std::vector<int> order(m);
            int a = 0, b = p, c = 0;
            for (int pos = 0; pos < m; ++pos) {
              if (c < p && comb[c] == pos) {
                order[pos] = a++;
                ++c;
              } else {
                order[pos] = b++;
              }
            }
            std::vector<int> arranged(m);
            for (int pos = 0; pos < m; ++pos) arranged[pos] = tuple[order[pos]];
            const int eps = koszul_parity(bar_at_position, order);
            vec_add_scaled(total, s.bar_op(m, arranged), Rational(eps ? -1 : 1));
          } while (advance_combination(comb, m));
          if (!total.empty()) {
            report.fail("shuffle (" + std::to_string(p) + "," + std::to_string(m - p) +
                        ") vanishing fails at arity " + std::to_string(m) + " on " +
                        tuple_labels(space, tuple));
            return report;
          }
        } while (advance_tuple(tuple, dim, false));
      }
    }
  }

  return report;
}

OoMorphism::OoMorphism(OoStructure source, OoStructure target, int arity_bound)
    : source_(std::move(source)), target_(std::move(target)), arity_bound_(arity_bound) {
  if (arity_bound_ < 1) throw std::invalid_argument("arity bound must be >= 1");
  if (source_.kind() != target_.kind())
    throw std::invalid_argument("morphism endpoints have different kinds");
  components_.resize(arity_bound_ + 1);
}

std::optional<std::pair<std::vector<int>, int>> OoMorphism::canonical(
    std::vector<int> inputs) const {
  int parity = 0;
  for (size_t i = 1; i < inputs.size(); ++i)
    for (size_t j = i; j > 0 && inputs[j - 1] > inputs[j]; --j) {
      if ((source_.bar_degree(inputs[j - 1]) & 1) && (source_.bar_degree(inputs[j]) & 1))
        parity ^= 1;
      std::swap(inputs[j - 1], inputs[j]);
    }
  for (size_t i = 0; i + 1 < inputs.size(); ++i)
    if (inputs[i] == inputs[i + 1] && (source_.bar_degree(inputs[i]) & 1)) return std::nullopt;
  return std::make_pair(std::move(inputs), parity);
}

void OoMorphism::set_bar_component(int arity, const std::vector<int>& inputs,
                                   const SparseVec& value) {
  if (arity < 1 || arity > arity_bound_)
    throw std::invalid_argument("component arity outside [1, arity_bound]");
  if (static_cast<int>(inputs.size()) != arity)
    throw std::invalid_argument("component tuple size != arity");
  int bar_out = 0;
  int weight_out = 0;
  for (int i : inputs) {
    if (i < 0 || i >= source_.dim()) throw std::out_of_range("basis index in component inputs");
    bar_out += source_.bar_degree(i);
    weight_out += source_.space().weight(i);
  }
  for (const auto& [t, c] : value) {
    (void)c;
    if (t < 0 || t >= target_.dim()) throw std::out_of_range("basis index in component value");
    if (target_.bar_degree(t) != bar_out || target_.space().weight(t) != weight_out)
      throw std::invalid_argument("component value leaves its degree/weight block");
  }
  std::vector<int> key = inputs;
  SparseVec stored = value;
  if (source_.kind() == OpKind::lie) {
    auto canon = canonical(key);
    if (!canon) {
      if (!value.empty())
        throw std::invalid_argument("component value on a tuple repeating an odd input must vanish");
      return;
    }
    key = std::move(canon->first);
    if (canon->second) stored = vec_scale(stored, Rational(-1));
  }
  if (stored.empty()) {
    components_[arity].erase(key);
  } else {
    components_[arity][key] = std::move(stored);
  }
}

SparseVec OoMorphism::bar_component(int arity, const std::vector<int>& inputs) const {
  if (arity < 1) throw std::invalid_argument("component arity must be >= 1");
  if (static_cast<int>(inputs.size()) != arity)
    throw std::invalid_argument("component tuple size != arity");
  if (arity > arity_bound_) return {};  // components beyond the bound are zero
  const std::map<std::vector<int>, SparseVec>& table = components_[arity];
  if (source_.kind() == OpKind::lie) {
    auto canon = canonical(inputs);
    if (!canon) return {};
    auto it = table.find(canon->first);
    if (it == table.end()) return {};
    return canon->second ? vec_scale(it->second, Rational(-1)) : it->second;
  }
  auto it = table.find(inputs);
  return it == table.end() ? SparseVec{} : it->second;
}

const std::map<std::vector<int>, SparseVec>& OoMorphism::bar_components(int arity) const {
  if (arity < 1 || arity > arity_bound_)
    throw std::invalid_argument("component arity outside [1, arity_bound]");
  return components_[arity];
}

void OoMorphism::set_component(int arity, const std::vector<int>& inputs, const SparseVec& value) {
  std::vector<int> degrees;
  degrees.reserve(inputs.size());
  for (int i : inputs) degrees.push_back(source_.space().degree(i));
  set_bar_component(arity, inputs, susp_sign_parity(degrees) ? vec_scale(value, Rational(-1)) : value);
}

SparseVec OoMorphism::component(int arity, const std::vector<int>& inputs) const {
  std::vector<int> degrees;
  degrees.reserve(inputs.size());
  for (int i : inputs) degrees.push_back(source_.space().degree(i));
  SparseVec v = bar_component(arity, inputs);
  return susp_sign_parity(degrees) ? vec_scale(v, Rational(-1)) : v;
}

SparseVec OoMorphism::eval_bar(int arity, const std::vector<SparseVec>& inputs) const {
  if (static_cast<int>(inputs.size()) != arity)
    throw std::invalid_argument("component tuple size != arity");
  SparseVec out;
  std::vector<int> idx(arity);
  std::function<void(int, const Rational&)> rec = [&](int slot, const Rational& coeff) {
    if (slot == arity) {
      vec_add_scaled(out, bar_component(arity, idx), coeff);
      return;
    }
    for (const auto& [i, c] : inputs[slot]) {
      idx[slot] = i;
      rec(slot + 1, coeff * c);
    }
  };
  rec(0, Rational(1));
  return out;
}

SparseMatrix OoMorphism::f1_matrix() const {
  SparseMatrix f(target_.dim(), source_.dim());
  for (const auto& [key, value] : components_[1])
    for (const auto& [t, c] : value) f.set(t, key[0], c);
  return f;
}

CheckReport check_morphism(const OoMorphism& f, int up_to_arity) {
  if (up_to_arity < 1) throw std::invalid_argument("morphism arity must be >= 1");
  CheckReport report;
  const OoStructure& src = f.source();
  const OoStructure& tgt = f.target();
  const GradedSlice& space = src.space();
  const int dim = src.dim();
  if (dim == 0) return report;
  const bool lie = src.kind() == OpKind::lie;

  std::set<Bidegree> present;
  for (const auto& b : tgt.space().basis) present.insert({b.degree, b.weight});

  for (int m = 1; m <= up_to_arity; ++m) {
    const auto partitions = lie ? set_partitions(m) : std::vector<std::vector<std::vector<int>>>{};
    std::vector<int> tuple(m, 0);
    do {
      int total_degree = 1 - m;  // both sides have bar degree sum + 1
      int total_weight = 0;
      for (int i : tuple) {
        total_degree += space.degree(i);
        total_weight += space.weight(i);
      }
      total_degree += 1;
      if (!present.count({total_degree, total_weight})) continue;
      std::vector<int> bar_at_position(m);
      for (int p = 0; p < m; ++p) bar_at_position[p] = src.bar_degree(tuple[p]);

      SparseVec diff;  // lhs - rhs
      if (lie) {
        for (int i = 1; i <= m; ++i) {
          const int j = m + 1 - i;
          std::vector<int> comb(i);
          for (int p = 0; p < i; ++p) comb[p] = p;
          do {
            std::vector<int> inner_idx(i);
            for (int p = 0; p < i; ++p) inner_idx[p] = tuple[comb[p]];
            SparseVec inner = src.bar_op(i, inner_idx);
            if (inner.empty()) continue;
            std::vector<int> order = comb;
            std::vector<int> rest;
            for (int p = 0, c = 0; p < m; ++p) {
              if (c < i && comb[c] == p) {
                ++c;
              } else {
                order.push_back(p);
                rest.push_back(tuple[p]);
              }
            }
            const int eps = koszul_parity(bar_at_position, order);
            std::vector<int> args(j);
            std::copy(rest.begin(), rest.end(), args.begin() + 1);
            for (const auto& [t, c] : inner) {
              args[0] = t;
              vec_add_scaled(diff, f.bar_component(j, args), eps ? -c : c);
            }
          } while (advance_combination(comb, m));
        }
        for (const auto& blocks : partitions) {
          const int k = static_cast<int>(blocks.size());
          std::vector<int> order;
          std::vector<SparseVec> vals;
          vals.reserve(k);
          bool zero = false;
          for (const auto& block : blocks) {
            order.insert(order.end(), block.begin(), block.end());
            std::vector<int> idx(block.size());
            for (size_t p = 0; p < block.size(); ++p) idx[p] = tuple[block[p]];
            vals.push_back(f.bar_component(static_cast<int>(block.size()), idx));
            if (vals.back().empty()) {
              zero = true;
              break;
            }
          }
          if (zero) continue;
          const int eps = koszul_parity(bar_at_position, order);
          vec_add_scaled(diff, tgt.eval_bar(k, vals), Rational(eps ? 1 : -1));
        }
      } else {
        for (int r = 0; r < m; ++r) {
          int sign = 0;
          for (int p = 0; p < r; ++p) sign ^= bar_at_position[p] & 1;
          for (int len = 1; r + len <= m; ++len) {
            const int tail = m - r - len;
            std::vector<int> run(tuple.begin() + r, tuple.begin() + r + len);
            SparseVec inner = src.bar_op(len, run);
            if (inner.empty()) continue;
            std::vector<int> args(r + 1 + tail);
            for (int p = 0; p < r; ++p) args[p] = tuple[p];
            for (int p = r + len; p < m; ++p) args[p - len + 1] = tuple[p];
            for (const auto& [t, c] : inner) {
              args[r] = t;
              vec_add_scaled(diff, f.bar_component(r + 1 + tail, args), sign ? -c : c);
            }
          }
        }
        for (int k = 1; k <= m; ++k) {
          for (const auto& comp : compositions(m, k)) {
            std::vector<SparseVec> vals;
            vals.reserve(k);
            bool zero = false;
            int at = 0;
            for (int part : comp) {
              std::vector<int> idx(tuple.begin() + at, tuple.begin() + at + part);
              at += part;
              vals.push_back(f.bar_component(part, idx));
              if (vals.back().empty()) {
                zero = true;
                break;
              }
            }
            if (zero) continue;
            vec_add_scaled(diff, tgt.eval_bar(k, vals), Rational(-1));
          }
        }
      }
      if (!diff.empty()) {
        report.fail("infinity-morphism relation fails at arity " + std::to_string(m) + " on " +
                    tuple_labels(space, tuple));
        return report;
      }
    } while (advance_tuple(tuple, dim, lie));
  }
  return report;
}

bool induces_cohomology_iso(const OoMorphism& f) {
  const OoStructure& src = f.source();
  const OoStructure& tgt = f.target();
  const CohomologyReport hs = cohomology(src.space(), src.d_matrix(), src.space().window);
  const CohomologyReport ht = cohomology(tgt.space(), tgt.d_matrix(), tgt.space().window);
  const SparseMatrix f1 = f.f1_matrix();
  const SparseMatrix dt = tgt.d_matrix();

  std::set<Bidegree> blocks;
  for (const auto& [dw, e] : hs.entries) {
    (void)e;
    blocks.insert(dw);
  }
  for (const auto& [dw, e] : ht.entries) {
    (void)e;
    blocks.insert(dw);
  }
  for (const auto& [n, p] : blocks) {
    const int ds = hs.dim(n, p);
    if (ds != ht.dim(n, p)) return false;
    if (ds == 0) continue;
    std::vector<SparseVec> rows;
    for (int i = 0; i < tgt.dim(); ++i)
      if (tgt.space().degree(i) == n - 1 && tgt.space().weight(i) == p) {
        SparseVec b = dt.apply(unit_vec(i));
        if (!b.empty()) rows.push_back(std::move(b));
      }
    const int boundary_rank = rank_of_rows(rows, tgt.dim());
    for (const auto& rep : hs.entries.at({n, p}).representatives) rows.push_back(f1.apply(rep));
    if (rank_of_rows(rows, tgt.dim()) - boundary_rank != ds) return false;
  }
  return true;
}

OoMorphism identity_oo_morphism(const OoStructure& s) {
  OoMorphism id(s, s, s.arity_bound());
  for (int i = 0; i < s.dim(); ++i) id.set_bar_component(1, {i}, unit_vec(i));
  return id;
}

namespace {

bool same_slice(const GradedSlice& a, const GradedSlice& b) {
  return a.basis == b.basis && a.window.min_degree == b.window.min_degree &&
         a.window.max_degree == b.window.max_degree;
}

bool is_identity_morphism(const OoMorphism& f) {
  if (!same_slice(f.source().space(), f.target().space())) return false;
  for (int m = 2; m <= f.arity_bound(); ++m)
    if (!f.bar_components(m).empty()) return false;
  for (int i = 0; i < f.source().dim(); ++i)
    if (f.bar_component(1, {i}) != unit_vec(i)) return false;
  return true;
}

}  // namespace

OoMorphism compose_oo(const OoMorphism& g, const OoMorphism& f) {
  if (!same_slice(f.target().space(), g.source().space()) ||
      f.target().kind() != g.source().kind())
    throw std::invalid_argument("composition endpoints do not match");
  const int bound = std::min(g.arity_bound(), f.arity_bound());
  OoMorphism out(f.source(), g.target(), bound);
  const bool lie = f.source().kind() == OpKind::lie;
  const int dim = f.source().dim();
  const GradedSlice& space = f.source().space();

  for (int m = 1; m <= bound; ++m) {
    const auto partitions = lie ? set_partitions(m) : std::vector<std::vector<std::vector<int>>>{};
    std::vector<int> tuple(m, 0);
    if (dim == 0) break;
    do {
      std::vector<int> bar_at_position(m);
      for (int p = 0; p < m; ++p) bar_at_position[p] = f.source().bar_degree(tuple[p]);
      SparseVec value;
      if (lie) {
        for (const auto& blocks : partitions) {
          const int k = static_cast<int>(blocks.size());
          if (k > g.arity_bound()) continue;
          std::vector<int> order;
          std::vector<SparseVec> vals;
          bool zero = false;
          for (const auto& block : blocks) {
            order.insert(order.end(), block.begin(), block.end());
            std::vector<int> idx(block.size());
            for (size_t p = 0; p < block.size(); ++p) idx[p] = tuple[block[p]];
            vals.push_back(f.bar_component(static_cast<int>(block.size()), idx));
            if (vals.back().empty()) {
              zero = true;
              break;
            }
          }
          if (zero) continue;
          const int eps = koszul_parity(bar_at_position, order);
          vec_add_scaled(value, g.eval_bar(k, vals), Rational(eps ? -1 : 1));
        }
      } else {
        for (int k = 1; k <= std::min(m, g.arity_bound()); ++k) {
          for (const auto& comp : compositions(m, k)) {
            std::vector<SparseVec> vals;
            bool zero = false;
            int at = 0;
            for (int part : comp) {
              std::vector<int> idx(tuple.begin() + at, tuple.begin() + at + part);
              at += part;
              vals.push_back(f.bar_component(part, idx));
              if (vals.back().empty()) {
                zero = true;
                break;
              }
            }
            if (zero) continue;
            vec_add_scaled(value, g.eval_bar(k, vals), Rational(1));
          }
        }
      }
      if (!value.empty()) out.set_bar_component(m, tuple, value);
    } while (advance_tuple(tuple, dim, lie));
  }
  return out;
}

OoMorphism invert_oo_isomorphism(const OoMorphism& f) {
  const OoStructure& src = f.source();
  const OoStructure& tgt = f.target();
  if (src.dim() != tgt.dim()) throw std::invalid_argument("f1 is not invertible: dimensions differ");

  // g1 = f1^{-1}, columnwise.
  const SparseMatrix f1 = f.f1_matrix();
  RrefSolver solver(f1);
  std::vector<SparseVec> g1_col(tgt.dim());
  for (int t = 0; t < tgt.dim(); ++t) {
    auto x = solver.solve(unit_vec(t));
    if (!x) throw std::invalid_argument("f1 is not invertible on the slice");
    g1_col[t] = *x;
  }
  if (solver.rank() != src.dim()) throw std::invalid_argument("f1 is not invertible on the slice");

  OoMorphism g(tgt, src, f.arity_bound());
  for (int t = 0; t < tgt.dim(); ++t)
    if (!g1_col[t].empty()) g.set_bar_component(1, {t}, g1_col[t]);

  const bool lie = src.kind() == OpKind::lie;
  const int dim = tgt.dim();
  for (int m = 2; m <= f.arity_bound(); ++m) {
    const auto partitions = lie ? set_partitions(m) : std::vector<std::vector<std::vector<int>>>{};
    std::vector<int> tuple(m, 0);
    if (dim == 0) break;
    do {
      std::vector<int> bar_at_position(m);
      for (int p = 0; p < m; ++p) bar_at_position[p] = tgt.bar_degree(tuple[p]);
      std::vector<SparseVec> xs(m);
      for (int p = 0; p < m; ++p) xs[p] = g1_col[tuple[p]];
      SparseVec value;
      if (lie) {
        for (const auto& blocks : partitions) {
          const int k = static_cast<int>(blocks.size());
          if (k == m) continue;  // the g_m(f_1...f_1) term being solved for
          std::vector<int> order;
          std::vector<SparseVec> vals;
          bool zero = false;
          for (const auto& block : blocks) {
            order.insert(order.end(), block.begin(), block.end());
            std::vector<SparseVec> ins;
            for (int p : block) ins.push_back(xs[p]);
            vals.push_back(f.eval_bar(static_cast<int>(block.size()), ins));
            if (vals.back().empty()) {
              zero = true;
              break;
            }
          }
          if (zero) continue;
          const int eps = koszul_parity(bar_at_position, order);
          vec_add_scaled(value, g.eval_bar(k, vals), Rational(eps ? 1 : -1));
        }
      } else {
        for (int k = 1; k < m; ++k) {
          for (const auto& comp : compositions(m, k)) {
            std::vector<SparseVec> vals;
            bool zero = false;
            int at = 0;
            for (int part : comp) {
              std::vector<SparseVec> ins(xs.begin() + at, xs.begin() + at + part);
              at += part;
              vals.push_back(f.eval_bar(part, ins));
              if (vals.back().empty()) {
                zero = true;
                break;
              }
            }
            if (zero) continue;
            vec_add_scaled(value, g.eval_bar(k, vals), Rational(-1));
          }
        }
      }
      if (!value.empty()) g.set_bar_component(m, tuple, value);
    } while (advance_tuple(tuple, dim, lie));
  }

  if (!is_identity_morphism(compose_oo(g, f)) || !is_identity_morphism(compose_oo(f, g)))
    throw std::logic_error("inverse verification failed");
  return g;
}

OoStructure oo_from_cdga(const CgaBasis& basis, int arity_bound) {
  OoStructure s(OpKind::comm, basis.slice(), arity_bound);
  const CdgaPresentation& p = basis.presentation();
  const SparseMatrix d = basis.differential_matrix();
  for (int i = 0; i < basis.dim(); ++i) {
    SparseVec col = d.apply(unit_vec(i));
    if (!col.empty()) s.set_bar_op(1, {i}, col);
  }
  if (arity_bound >= 2) {
    for (int i = 0; i < basis.dim(); ++i) {
      CgaElement a;
      a.add_term(basis.monomials()[i], Rational(1));
      for (int j = 0; j < basis.dim(); ++j) {
        CgaElement b;
        b.add_term(basis.monomials()[j], Rational(1));
        SparseVec mu = basis.coords(p.multiply(a, b));
        if (mu.empty()) continue;
        s.set_op(2, {i, j}, mu);
      }
    }
  }
  return s;
}

OoStructure oo_from_dgla(const DglaBasis& basis, int arity_bound) {
  OoStructure s(OpKind::lie, basis.slice(), arity_bound);
  const FreeLie& lie = basis.presentation().lie();
  const SparseMatrix d = basis.differential_matrix();
  for (int i = 0; i < basis.dim(); ++i) {
    SparseVec col = d.apply(unit_vec(i));
    if (!col.empty()) s.set_bar_op(1, {i}, col);
  }
  if (arity_bound >= 2) {
    for (int i = 0; i < basis.dim(); ++i) {
      LieElement a;
      a.add_term(basis.words()[i], Rational(1));
      for (int j = i; j < basis.dim(); ++j) {
        LieElement b;
        b.add_term(basis.words()[j], Rational(1));
        SparseVec mu = basis.coords(lie.bracket(a, b));
        if (mu.empty()) continue;
        s.set_op(2, {i, j}, mu);
      }
    }
  }
  return s;
}

OoStructure oo_from_fdalgebra(const FdAlgebra& a, int arity_bound) {
  OoStructure s(a.commutative ? OpKind::comm : OpKind::assoc, a.space, arity_bound);
  for (int i = 0; i < a.dim(); ++i) {
    SparseVec col = a.d.apply(unit_vec(i));
    if (!col.empty()) s.set_bar_op(1, {i}, col);
  }
  if (arity_bound >= 2) {
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) {
        SparseVec mu = a.multiply(i, j);
        if (!mu.empty()) s.set_op(2, {i, j}, mu);
      }
  }
  return s;
}

OoMorphism strict_oo_morphism(OoStructure source, OoStructure target, const LinearMapSlice& f1,
                              int arity_bound) {
  if (f1.degree_shift != 0 || f1.weight_shift != 0)
    throw std::invalid_argument("strict morphism must have degree and weight shift 0");
  f1.validate();
  if (!same_slice(f1.source, source.space()) || !same_slice(f1.target, target.space()))
    throw std::invalid_argument("strict morphism slices do not match the structures");
  OoMorphism f(std::move(source), std::move(target), arity_bound);
  for (int i = 0; i < f.source().dim(); ++i) {
    SparseVec col = f1.matrix.apply(unit_vec(i));
    if (!col.empty()) f.set_bar_component(1, {i}, col);
  }
  return f;
}

std::vector<SparseVec> oo_gamma_filtration(const OoStructure& s, int k, int degree) {
  if (s.kind() != OpKind::lie)
    throw std::invalid_argument("gamma filtration is defined for L-infinity structures");
  if (k < 1) throw std::invalid_argument("gamma index must be >= 1");
  const int dim = s.dim();

  // Least fixpoint of W_a = span{ b_j(xi_1..xi_j) : j >= 2, xi_i in W_{a_i},
  // sum a_i = a }, parts < a, W_1 the whole slice; depth counts capped at k.
  std::vector<std::vector<SparseVec>> w(k + 1);
  for (int i = 0; i < dim; ++i) w[1].push_back(unit_vec(i));
  if (k == 1) {
    std::vector<SparseVec> out;
    for (int i = 0; i < dim; ++i)
      if (s.space().degree(i) == degree) out.push_back(unit_vec(i));
    return out;
  }

  auto independent = [&](std::vector<SparseVec> rows) {
    std::vector<SparseVec> kept;
    int rank = 0;
    for (auto& r : rows) {
      if (r.empty()) continue;
      std::vector<SparseVec> trial = kept;
      trial.push_back(r);
      const int rk = rank_of_rows(trial, dim);
      if (rk > rank) {
        rank = rk;
        kept.push_back(std::move(r));
      }
    }
    return kept;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 2; a <= k; ++a) {
      std::vector<SparseVec> rows = w[a];
      for (int j = 2; j <= s.arity_bound(); ++j) {
        if (!s.arity_used(j)) continue;
        if (j >= a) {
          // All parts depth 1: evaluate on basis multisets.
          std::vector<int> tuple(j, 0);
          if (dim == 0) continue;
          do {
            SparseVec v = s.bar_op(j, tuple);
            if (!v.empty()) rows.push_back(std::move(v));
          } while (advance_tuple(tuple, dim, true));
        } else {
          for (const auto& comp : compositions(a, j)) {
            bool feasible = true;
            for (int part : comp)
              if (w[part].empty()) feasible = false;
            if (!feasible) continue;
            std::vector<SparseVec> ins(j);
            std::function<void(int)> rec = [&](int slot) {
              if (slot == j) {
                SparseVec v = s.eval_bar(j, ins);
                if (!v.empty()) rows.push_back(std::move(v));
                return;
              }
              for (const auto& vec : w[comp[slot]]) {
                ins[slot] = vec;
                rec(slot + 1);
              }
            };
            rec(0);
          }
        }
      }
      std::vector<SparseVec> next = independent(std::move(rows));
      if (static_cast<int>(next.size()) != static_cast<int>(w[a].size())) changed = true;
      w[a] = std::move(next);
    }
  }

  // Spanning vectors are homogeneous (evaluations on homogeneous inputs), so
  // the degree piece is just the subset supported in that degree.
  std::vector<SparseVec> out;
  for (const auto& v : w[k]) {
    if (v.empty()) continue;
    if (s.space().degree(v.begin()->first) == degree) out.push_back(v);
  }
  return out;
}

}  // namespace wrht
