#include "wrht/transfer.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "combinat.hpp"

namespace wrht {

using detail::advance_tuple;
using detail::compositions;
using detail::koszul_parity;
using detail::set_partitions;
using detail::tuple_labels;

namespace {

bool same_slice(const GradedSlice& a, const GradedSlice& b) {
  return a.window.min_degree == b.window.min_degree &&
         a.window.max_degree == b.window.max_degree && a.basis == b.basis;
}

SparseMatrix identity_matrix(int n) {
  SparseMatrix m(n, n);
  for (int r = 0; r < n; ++r) m.set(r, r, Rational(1));
  return m;
}

bool is_zero_matrix(const SparseMatrix& m) { return m.nonzero_count() == 0; }

// Maintains a reduced row basis (unit pivots, pivot columns cleared from all
// other rows), so membership reduces in one forward pass.
struct IncrementalSpan {
  std::map<int, SparseVec> rows;  // pivot column -> row

  SparseVec reduce(SparseVec v) const {
    for (const auto& [piv, row] : rows) {
      const Rational c = vec_coeff(v, piv);
      if (!is_zero(c)) vec_add_scaled(v, row, -c);
    }
    return v;
  }

  // Returns whether the span grew.
  bool add(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    const int piv = v.begin()->first;
    const SparseVec unit = vec_scale(v, Rational(1) / v.begin()->second);
    for (auto& [q, row] : rows) {
      const Rational c = vec_coeff(row, piv);
      if (!is_zero(c)) vec_add_scaled(row, unit, -c);
    }
    rows.emplace(piv, unit);
    return true;
  }
};

}  // namespace

HomotopyRetract build_retract(const OoStructure& big) {
  const GradedSlice& space = big.space();
  const SparseMatrix d = big.d_matrix();
  const int dim = space.dim();

  struct BlockRecord {
    std::vector<int> indices;            // global indices of the block
    std::vector<SparseVec> boundary;     // image of d from one degree below
    std::vector<int> boundary_preimage;  // aligned global source indices
    std::vector<SparseVec> reps;         // chosen cocycle representatives
    std::vector<int> a_indices;          // complement on which d is injective
  };
  std::map<Bidegree, BlockRecord> blocks;
  for (const auto& bd : space.bidegrees()) blocks[bd].indices = space.block(bd.first, bd.second);

  // Process weight by weight, ascending degree, so the boundaries and
  // preimages emitted at degree n are in place when degree n + 1 is reached.
  std::vector<Bidegree> keys;
  keys.reserve(blocks.size());
  for (const auto& [bd, rec] : blocks) keys.push_back(bd);
  std::sort(keys.begin(), keys.end(), [](const Bidegree& a, const Bidegree& b) {
    return std::tie(a.second, a.first) < std::tie(b.second, b.first);
  });

  for (const Bidegree& bd : keys) {
    BlockRecord& rec = blocks.at(bd);

    // The complement A of the cycles: columns on which d grows the image.
    // Each chosen column is the h-preimage of the boundary it emits.
    IncrementalSpan image;
    for (int j : rec.indices) {
      SparseVec col = d.apply(unit_vec(j));
      if (col.empty() || !image.add(col)) continue;
      rec.a_indices.push_back(j);
      BlockRecord& next = blocks.at({bd.first + 1, bd.second});
      next.boundary.push_back(col);
      next.boundary_preimage.push_back(j);
    }

    // Cycles of the block, from the kernel of the local out-matrix.
    const std::vector<int> up = space.block(bd.first + 1, bd.second);
    std::map<int, int> up_pos;
    for (size_t r = 0; r < up.size(); ++r) up_pos[up[r]] = static_cast<int>(r);
    SparseMatrix local(static_cast<int>(up.size()), static_cast<int>(rec.indices.size()));
    for (size_t c = 0; c < rec.indices.size(); ++c)
      for (const auto& [g, v] : d.apply(unit_vec(rec.indices[c]))) local.add(up_pos.at(g), static_cast<int>(c), v);

    // Representatives: cycles reduced against the boundaries, self-reduced,
    // normalized to a unit leading coefficient.
    IncrementalSpan seen;
    for (const auto& b : rec.boundary)
      if (!seen.add(b)) throw std::logic_error("dependent boundary basis in retract construction");
    for (const SparseVec& kloc : kernel_basis(local)) {
      SparseVec cyc;
      for (const auto& [c, v] : kloc) cyc.emplace(rec.indices[c], v);
      SparseVec reduced = seen.reduce(cyc);
      if (reduced.empty()) continue;
      rec.reps.push_back(vec_scale(reduced, Rational(1) / reduced.begin()->second));
      seen.add(std::move(reduced));
    }

    if (rec.boundary.size() + rec.reps.size() + rec.a_indices.size() != rec.indices.size())
      throw std::logic_error("retract block decomposition misses the block dimension");
  }

  // Small slice: one basis element per representative, labelled by the class
  // of the representative's leading term.
  GradedSlice small;
  small.window = space.window;
  std::map<Bidegree, int> first_small;
  std::map<std::string, int> used;
  for (const auto& [bd, rec] : blocks) {
    if (rec.reps.empty()) continue;
    first_small[bd] = small.dim();
    for (const auto& rep : rec.reps) {
      const std::string base = "[" + space.basis[rep.begin()->first].label + "]";
      int& count = used[base];
      small.basis.push_back({count == 0 ? base : base + "#" + std::to_string(count), bd.first, bd.second});
      ++count;
    }
  }
  small.validate();

  LinearMapSlice p{space, small, 0, 0, SparseMatrix(small.dim(), dim)};
  LinearMapSlice i{small, space, 0, 0, SparseMatrix(dim, small.dim())};
  LinearMapSlice h{space, space, -1, 0, SparseMatrix(dim, dim)};

  // Per block, solve [B | H' | A] c = e_t: p reads off the H'-coordinates,
  // h lifts the B-coordinates through the stored preimages, and both kill A.
  for (const auto& [bd, rec] : blocks) {
    const int nb = static_cast<int>(rec.boundary.size());
    const int nh = static_cast<int>(rec.reps.size());
    const int na = static_cast<int>(rec.a_indices.size());
    const int bs = static_cast<int>(rec.indices.size());
    if (bs == 0) continue;
    std::map<int, int> pos;
    for (int t = 0; t < bs; ++t) pos[rec.indices[t]] = t;
    SparseMatrix m(bs, bs);
    for (int r = 0; r < nb; ++r)
      for (const auto& [g, v] : rec.boundary[r]) m.add(pos.at(g), r, v);
    for (int r = 0; r < nh; ++r)
      for (const auto& [g, v] : rec.reps[r]) m.add(pos.at(g), nb + r, v);
    for (int r = 0; r < na; ++r) m.set(pos.at(rec.a_indices[r]), nb + nh + r, Rational(1));
    const RrefSolver solver(m);
    for (int t = 0; t < bs; ++t) {
      const auto coords = solver.solve(unit_vec(t));
      if (!coords) throw std::logic_error("retract block decomposition is singular");
      for (const auto& [col, v] : *coords) {
        if (col < nb) {
          h.matrix.add(rec.boundary_preimage[col], rec.indices[t], v);
        } else if (col < nb + nh) {
          p.matrix.add(first_small.at(bd) + (col - nb), rec.indices[t], v);
        }
      }
    }
    for (int r = 0; r < nh; ++r)
      for (const auto& [g, v] : rec.reps[r]) i.matrix.set(g, first_small.at(bd) + r, v);
  }

  HomotopyRetract out{big, small, std::move(p), std::move(i), std::move(h)};
  const CheckReport report = check_retract(out);
  if (!report.ok)
    throw std::logic_error("build_retract produced an invalid retract: " + report.failures.front());
  return out;
}

CheckReport check_retract(const HomotopyRetract& r) {
  CheckReport report;
  const GradedSlice& space = r.big.space();
  if (!same_slice(r.p.source, space) || !same_slice(r.p.target, r.small))
    report.fail("p does not map the big slice to the small one");
  if (!same_slice(r.i.source, r.small) || !same_slice(r.i.target, space))
    report.fail("i does not map the small slice to the big one");
  if (!same_slice(r.h.source, space) || !same_slice(r.h.target, space))
    report.fail("h is not an endomorphism of the big slice");
  if (r.p.degree_shift != 0 || r.p.weight_shift != 0 || r.i.degree_shift != 0 ||
      r.i.weight_shift != 0 || r.h.degree_shift != -1 || r.h.weight_shift != 0)
    report.fail("retract maps carry the wrong degree or weight shifts");
  if (!report.ok) return report;
  try {
    r.p.validate();
    r.i.validate();
    r.h.validate();
  } catch (const std::exception& e) {
    report.fail(std::string("retract map breaks block discipline: ") + e.what());
    return report;
  }

  const SparseMatrix d = r.big.d_matrix();
  if (!(r.p.matrix * r.i.matrix == identity_matrix(r.small.dim())))
    report.fail("p i != id on the small slice");
  if (!is_zero_matrix(d * r.i.matrix)) report.fail("i does not land in cocycles");
  if (!is_zero_matrix(r.p.matrix * d)) report.fail("p does not vanish on coboundaries");
  if (!(r.i.matrix * r.p.matrix + d * r.h.matrix + r.h.matrix * d == identity_matrix(space.dim())))
    report.fail("i p + d h + h d != id on the big slice");
  if (!is_zero_matrix(r.h.matrix * r.i.matrix)) report.fail("side condition h i = 0 fails");
  if (!is_zero_matrix(r.p.matrix * r.h.matrix)) report.fail("side condition p h = 0 fails");
  if (!is_zero_matrix(r.h.matrix * r.h.matrix)) report.fail("side condition h h = 0 fails");
  return report;
}

TransferredStructure transfer_structure(const HomotopyRetract& r, int arity_bound) {
  if (arity_bound < 1) throw std::invalid_argument("transfer arity bound must be >= 1");
  {
    const CheckReport report = check_retract(r);
    if (!report.ok) throw std::invalid_argument("invalid retract: " + report.failures.front());
  }

  const OoStructure& big = r.big;
  const bool lie = big.kind() == OpKind::lie;
  const int sdim = r.small.dim();
  OoStructure small(big.kind(), r.small, arity_bound);

  // Memoized tree evaluation.  Q on a tuple sums b_k over all ways to group
  // the inputs (contiguous compositions for assoc/comm, set partitions with
  // the Koszul grouping sign for lie); Z is i on a single input and -h Q on
  // more.  Every Z has bar degree 0, so no other signs appear.
  std::map<std::vector<int>, SparseVec> zmemo;
  std::map<std::vector<int>, SparseVec> qmemo;
  std::function<const SparseVec&(const std::vector<int>&)> qval;
  std::function<const SparseVec&(const std::vector<int>&)> zval =
      [&](const std::vector<int>& t) -> const SparseVec& {
    auto it = zmemo.find(t);
    if (it != zmemo.end()) return it->second;
    SparseVec v = t.size() == 1 ? r.i.apply(unit_vec(t[0]))
                                : vec_scale(r.h.apply(qval(t)), Rational(-1));
    return zmemo.emplace(t, std::move(v)).first->second;
  };
  qval = [&](const std::vector<int>& t) -> const SparseVec& {
    auto it = qmemo.find(t);
    if (it != qmemo.end()) return it->second;
    const int m = static_cast<int>(t.size());
    SparseVec out;
    if (lie) {
      std::vector<int> bar_at_position(m);
      for (int pos = 0; pos < m; ++pos) bar_at_position[pos] = r.small.degree(t[pos]) - 1;
      for (const auto& grouping : set_partitions(m)) {
        const int k = static_cast<int>(grouping.size());
        if (k < 2) continue;
        std::vector<int> order;
        std::vector<SparseVec> vals;
        vals.reserve(k);
        bool zero = false;
        for (const auto& block : grouping) {
          order.insert(order.end(), block.begin(), block.end());
          std::vector<int> idx(block.size());
          for (size_t q = 0; q < block.size(); ++q) idx[q] = t[block[q]];
          const SparseVec& zv = zval(idx);
          if (zv.empty()) {
            zero = true;
            break;
          }
          vals.push_back(zv);
        }
        if (zero) continue;
        const int eps = koszul_parity(bar_at_position, order);
        vec_add_scaled(out, big.eval_bar(k, vals), Rational(eps ? -1 : 1));
      }
    } else {
      for (int k = 2; k <= m; ++k) {
        for (const auto& comp : compositions(m, k)) {
          std::vector<SparseVec> vals;
          vals.reserve(k);
          bool zero = false;
          int at = 0;
          for (int part : comp) {
            const std::vector<int> idx(t.begin() + at, t.begin() + at + part);
            at += part;
            const SparseVec& zv = zval(idx);
            if (zv.empty()) {
              zero = true;
              break;
            }
            vals.push_back(zv);
          }
          if (zero) continue;
          vec_add_scaled(out, big.eval_bar(k, vals), Rational(1));
        }
      }
    }
    return qmemo.emplace(t, std::move(out)).first->second;
  };

  // eta_m = p Q_m; the component values -h Q_m are stashed until the small
  // structure is complete and the morphism can be constructed over it.
  std::map<int, std::map<std::vector<int>, SparseVec>> stash;
  for (int m = 2; m <= arity_bound && sdim > 0; ++m) {
    std::vector<int> tuple(m, 0);
    do {
      int deg = 2 - m;
      int wt = 0;
      for (int x : tuple) {
        deg += r.small.degree(x);
        wt += r.small.weight(x);
      }
      if (big.space().block_dim(deg, wt) == 0) continue;  // Q lands in a zero block
      const SparseVec& qv = qval(tuple);
      if (qv.empty()) continue;
      const SparseVec eta = r.p.apply(qv);
      if (!eta.empty()) small.set_bar_op(m, tuple, eta);
      SparseVec comp = vec_scale(r.h.apply(qv), Rational(-1));
      if (!comp.empty()) stash[m].emplace(tuple, std::move(comp));
    } while (advance_tuple(tuple, sdim, lie));
  }

  OoMorphism f(small, big, arity_bound);
  for (int s = 0; s < sdim; ++s) f.set_bar_component(1, {s}, r.i.apply(unit_vec(s)));
  for (const auto& [m, values] : stash)
    for (const auto& [tuple, value] : values) f.set_bar_component(m, tuple, value);
  return {std::move(small), std::move(f)};
}

TransferredStructure minimal_oo_model(const CgaBasis& basis, int arity_bound) {
  return transfer_structure(build_retract(oo_from_cdga(basis, arity_bound)), arity_bound);
}

TransferredStructure minimal_oo_model(const DglaBasis& basis, int arity_bound) {
  return transfer_structure(build_retract(oo_from_dgla(basis, arity_bound)), arity_bound);
}

TransferredStructure minimal_oo_model(const FdAlgebra& a, int arity_bound) {
  return transfer_structure(build_retract(oo_from_fdalgebra(a, arity_bound)), arity_bound);
}

CheckReport vanishing_from_segmentation(const OoStructure& s, const Rational& alpha, int k) {
  if (k < 0) throw std::invalid_argument("segmentation requires k >= 0");
  if (alpha <= 0) throw std::invalid_argument("segmentation requires alpha > 0");
  if (!s.bar_ops(1).empty())
    throw std::invalid_argument("vanishing_from_segmentation expects a minimal structure");
  const GradedSlice& space = s.space();
  for (int x = 0; x < space.dim(); ++x) {
    const Rational wt(space.weight(x));
    if (wt < alpha * space.degree(x) || wt > alpha * (space.degree(x) + k))
      throw std::invalid_argument("input not segmented: class '" + space.basis[x].label + "' at (" +
                                  std::to_string(space.degree(x)) + ", " +
                                  std::to_string(space.weight(x)) + ") breaks the (alpha, k) bounds");
  }

  CheckReport report;
  for (int m = k + 3; m <= s.arity_bound(); ++m) {
    for (const auto& [tuple, value] : s.bar_ops(m))
      if (!value.empty())
        report.fail("mu_" + std::to_string(m) + " is nonzero on " + tuple_labels(space, tuple));
    if (space.dim() == 0) continue;
    // Certificate: with every input above weight alpha * degree, the output
    // weight exceeds the segmentation cap of its degree, so the target block
    // must be empty.
    std::vector<int> tuple(m, 0);
    do {
      int deg = 2 - m;
      int wt = 0;
      for (int x : tuple) {
        deg += space.degree(x);
        wt += space.weight(x);
      }
      if (space.block_dim(deg, wt) > 0)
        report.fail("weights do not force mu_" + std::to_string(m) + " to vanish on " +
                    tuple_labels(space, tuple));
    } while (advance_tuple(tuple, space.dim(), true));
  }
  return report;
}

OoMorphism solve_minimal_iso(const OoStructure& source, const OoStructure& target,
                             const LinearMapSlice& f1) {
  if (source.kind() != target.kind())
    throw std::invalid_argument("minimal models have different kinds");
  if (!source.bar_ops(1).empty() || !target.bar_ops(1).empty())
    throw std::invalid_argument("solve_minimal_iso expects minimal structures");
  f1.validate();
  const GradedSlice& sa = source.space();
  const GradedSlice& sb = target.space();
  if (!same_slice(f1.source, sa) || !same_slice(f1.target, sb) || f1.degree_shift != 0 ||
      f1.weight_shift != 0)
    throw std::invalid_argument("f1 must be a shift-free map from the source to the target slice");
  const int dim = sa.dim();
  if (sb.dim() != dim || RrefSolver(f1.matrix).rank() != dim)
    throw std::invalid_argument("f1 is not invertible");
  const bool lie = source.kind() == OpKind::lie;

  std::vector<SparseVec> f1col(dim);
  for (int x = 0; x < dim; ++x) f1col[x] = f1.apply(unit_vec(x));

  // With both differentials zero the arity-2 relation contains no f2, so f1
  // must intertwine the binary operations on the nose.
  if (dim > 0) {
    std::vector<int> pr(2, 0);
    do {
      SparseVec diff = f1.apply(source.bar_op(2, pr));
      vec_add_scaled(diff, target.eval_bar(2, {f1col[pr[0]], f1col[pr[1]]}), Rational(-1));
      if (!diff.empty())
        throw std::invalid_argument("f1 does not intertwine the binary operations on " +
                                    tuple_labels(sa, pr));
    } while (advance_tuple(pr, dim, lie));
  }

  // Unknowns: one column per (canonical source pair, target index in the
  // matching block).
  auto canon_pair = [&](int u, int v) -> std::optional<std::pair<std::vector<int>, int>> {
    if (lie) {
      if (u == v && ((sa.degree(u) - 1) & 1)) return std::nullopt;
      if (u > v) {
        const int sign = (((sa.degree(u) - 1) & 1) && ((sa.degree(v) - 1) & 1)) ? -1 : 1;
        return std::make_pair(std::vector<int>{v, u}, sign);
      }
    }
    return std::make_pair(std::vector<int>{u, v}, 1);
  };
  auto pair_targets = [&](const std::vector<int>& key) {
    return sb.block(sa.degree(key[0]) + sa.degree(key[1]) - 1,
                    sa.weight(key[0]) + sa.weight(key[1]));
  };

  std::vector<std::pair<std::vector<int>, int>> unknowns;
  std::map<std::pair<std::vector<int>, int>, int> unknown_id;
  if (dim > 0) {
    std::vector<int> pr(2, 0);
    do {
      if (lie && pr[0] == pr[1] && ((sa.degree(pr[0]) - 1) & 1)) continue;
      for (int t : pair_targets(pr)) {
        unknown_id[{pr, t}] = static_cast<int>(unknowns.size());
        unknowns.emplace_back(pr, t);
      }
    } while (advance_tuple(pr, dim, lie));
  }

  // Arity-3 relation, one equation per (triple, target index).  f3 drops out
  // because both differentials vanish, leaving a linear system for f2.
  std::vector<std::vector<int>> triples;
  if (dim > 0) {
    std::vector<int> t(3, 0);
    do {
      triples.push_back(t);
    } while (advance_tuple(t, dim, lie));
  }
  const int tdim = sb.dim();
  SparseMatrix sys(static_cast<int>(triples.size()) * tdim, static_cast<int>(unknowns.size()));
  SparseVec rhs;

  auto add_direct = [&](int row_base, int u, int v, const Rational& coeff) {
    const auto canon = canon_pair(u, v);
    if (!canon) return;
    const Rational c = canon->second < 0 ? -coeff : coeff;
    for (int t : pair_targets(canon->first)) sys.add(row_base + t, unknown_id.at({canon->first, t}), c);
  };
  // known (x) f2 when known_first, f2 (x) known otherwise
  auto add_through = [&](int row_base, const SparseVec& known, bool known_first, int u, int v,
                         const Rational& coeff) {
    const auto canon = canon_pair(u, v);
    if (!canon || known.empty()) return;
    const Rational c = canon->second < 0 ? -coeff : coeff;
    for (int t : pair_targets(canon->first)) {
      const SparseVec ev = known_first ? target.eval_bar(2, {known, unit_vec(t)})
                                       : target.eval_bar(2, {unit_vec(t), known});
      for (const auto& [row, val] : ev) sys.add(row_base + row, unknown_id.at({canon->first, t}), c * val);
    }
  };

  for (size_t ti = 0; ti < triples.size(); ++ti) {
    const auto& tup = triples[ti];
    const int row_base = static_cast<int>(ti) * tdim;
    SparseVec constant;  // known part of lhs - rhs
    if (lie) {
      std::vector<int> bar(3);
      for (int q = 0; q < 3; ++q) bar[q] = sa.degree(tup[q]) - 1;
      const int combs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
      for (const auto& cb : combs) {
        const int eps = koszul_parity(bar, {cb[0], cb[1], cb[2]});
        for (const auto& [t, c] : source.bar_op(2, {tup[cb[0]], tup[cb[1]]}))
          add_direct(row_base, t, tup[cb[2]], eps ? -c : c);
      }
      vec_add_scaled(constant, f1.apply(source.bar_op(3, tup)), Rational(1));
      for (const auto& grouping : set_partitions(3)) {
        const int k = static_cast<int>(grouping.size());
        if (k == 1) continue;  // the f3 term, which is absent
        std::vector<int> order;
        for (const auto& block : grouping) order.insert(order.end(), block.begin(), block.end());
        const int eps = koszul_parity(bar, order);
        const Rational s = Rational(eps ? 1 : -1);
        if (k == 3) {
          vec_add_scaled(constant,
                         target.eval_bar(3, {f1col[tup[0]], f1col[tup[1]], f1col[tup[2]]}), s);
        } else if (grouping[0].size() == 2) {
          add_through(row_base, f1col[tup[grouping[1][0]]], false, tup[grouping[0][0]],
                      tup[grouping[0][1]], s);
        } else {
          add_through(row_base, f1col[tup[grouping[0][0]]], true, tup[grouping[1][0]],
                      tup[grouping[1][1]], s);
        }
      }
    } else {
      const int xbar = sa.degree(tup[0]) - 1;
      for (const auto& [t, c] : source.bar_op(2, {tup[0], tup[1]})) add_direct(row_base, t, tup[2], c);
      for (const auto& [t, c] : source.bar_op(2, {tup[1], tup[2]}))
        add_direct(row_base, tup[0], t, (xbar & 1) ? -c : c);
      vec_add_scaled(constant, f1.apply(source.bar_op(3, tup)), Rational(1));
      add_through(row_base, f1col[tup[0]], true, tup[1], tup[2], Rational(-1));
      add_through(row_base, f1col[tup[2]], false, tup[0], tup[1], Rational(-1));
      vec_add_scaled(constant, target.eval_bar(3, {f1col[tup[0]], f1col[tup[1]], f1col[tup[2]]}),
                     Rational(-1));
    }
    for (const auto& [row, val] : constant) vec_add_scaled(rhs, row_base + row, -val);
  }

  const auto solution = RrefSolver(sys).solve(rhs);
  if (!solution)
    throw std::logic_error("minimal models admit no infinity-isomorphism up to arity 3");

  OoMorphism f(source, target, 3);
  for (int x = 0; x < dim; ++x) f.set_bar_component(1, {x}, f1col[x]);
  std::map<std::vector<int>, SparseVec> f2;
  for (const auto& [col, val] : *solution) vec_add_scaled(f2[unknowns[col].first], unknowns[col].second, val);
  for (const auto& [key, value] : f2)
    if (!value.empty()) f.set_bar_component(2, key, value);
  const CheckReport verified = check_morphism(f, 3);
  if (!verified.ok)
    throw std::logic_error("solved morphism fails verification: " + verified.failures.front());
  return f;
}

}  // namespace wrht
