#include "wrht/sullivan.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wrht {

namespace {

std::string bidegree_str(int degree, int weight) {
  return "(" + std::to_string(degree) + ", " + std::to_string(weight) + ")";
}

int ceil_to_int(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return static_cast<int>(q.get_si());
}

// Matrix of the algebra map fixed by one target element per generator,
// extended multiplicatively over the monomial basis.
SparseMatrix algebra_map_matrix(const CgaBasis& source, const FdAlgebra& target,
                                const std::vector<SparseVec>& gen_images) {
  SparseMatrix out(target.dim(), source.dim());
  for (int c = 0; c < source.dim(); ++c) {
    SparseVec img = unit_vec(target.unit);
    for (int gid : source.monomials()[c]) {
      if (gen_images.at(gid).empty()) {
        img.clear();
        break;
      }
      img = target.multiply(img, gen_images[gid]);
    }
    for (const auto& [r, v] : img) out.set(r, c, v);
  }
  return out;
}

// Solves d_A x = b inside the (degree, weight) block, so the primitive is
// homogeneous; b must be supported on the block one degree up.
SparseVec block_primitive(const FdAlgebra& a, int degree, int weight, const SparseVec& b) {
  const MatrixBlock blk = extract_block(a.space, a.space, a.d, degree, weight, 1, 0);
  std::map<int, int> position;
  for (size_t i = 0; i < blk.target_indices.size(); ++i)
    position[blk.target_indices[i]] = static_cast<int>(i);
  SparseVec local;
  for (const auto& [r, v] : b) local[position.at(r)] = v;
  const std::optional<SparseVec> x = solve_linear(blk.matrix, local);
  if (!x.has_value()) throw std::logic_error("kernel class has no primitive");
  SparseVec out;
  for (const auto& [i, v] : *x) out[blk.source_indices[i]] = v;
  return out;
}

void classify_weight_sign(int degree, int weight, const std::string& label,
                          WeightSignReport& r) {
  if (degree == 0) {
    if (weight != 0 && (r.positive || r.negative)) {
      r.positive = r.negative = false;
      r.notes.push_back("'" + label + "' has weight " + std::to_string(weight) +
                        " in degree 0");
    }
    return;
  }
  if (weight <= 0 && r.positive) {
    r.positive = false;
    r.notes.push_back("'" + label + "' has weight " + std::to_string(weight) + " in degree " +
                      std::to_string(degree));
  }
  if (weight >= 0 && r.negative) {
    r.negative = false;
    r.notes.push_back("'" + label + "' has weight " + std::to_string(weight) + " in degree " +
                      std::to_string(degree));
  }
}

void classify_cohomology(const CohomologyReport& h, WeightSignReport& r) {
  for (const auto& [key, entry] : h.entries) {
    if (entry.dim == 0) continue;
    classify_weight_sign(key.first, key.second,
                         "H" + bidegree_str(key.first, key.second), r);
  }
}

}  // namespace

MinimalModel minimal_model(const FdAlgebra& a, int max_degree) {
  const CheckReport valid = check_fdalgebra(a);
  if (!valid.ok)
    throw std::invalid_argument("minimal_model: input algebra is invalid: " +
                                valid.failures.front());
  if (a.unit < 0) throw std::invalid_argument("minimal_model needs a unital algebra");
  if (!a.commutative) throw std::invalid_argument("minimal_model needs a commutative algebra");
  if (max_degree < 1) throw std::invalid_argument("max_degree must be at least 1");
  if (a.space.window.min_degree > 0 || a.space.window.max_degree < max_degree + 1)
    throw std::invalid_argument(
        "window slack insufficient: the algebra must be presented through degree " +
        std::to_string(max_degree + 1));

  const CohomologyReport h_a = cohomology(a.space, a.d, {0, max_degree + 1});
  if (h_a.total_dim(0) != 1 || h_a.dim(0, 0) != 1)
    throw std::invalid_argument("minimal_model input is not connected");
  if (h_a.total_dim(1) != 0)
    throw std::invalid_argument("minimal_model input is not simply connected");

  const DegreeWindow window{0, max_degree + 2};
  CdgaPresentation model({}, window);
  std::vector<SparseVec> images;
  std::map<Bidegree, int> counters;

  struct NewGenerator {
    CgaGenerator gen;
    CgaElement d_value;
    SparseVec image;
  };

  for (int n = 2; n <= max_degree; ++n) {
    const CgaBasis mb(model);
    const SparseMatrix phi = algebra_map_matrix(mb, a, images);
    const CohomologyReport h_m = cga_cohomology(model, {n, n + 1});
    std::vector<NewGenerator> additions;
    auto fresh_name = [&](int p) {
      const int c = counters[{n, p}]++;
      return "v" + std::to_string(n) + "_" + std::to_string(p) + "_" + std::to_string(c);
    };

    // Cokernel of H^n(M) -> H^n(A): closed generators onto the missing
    // classes, weight by weight.
    for (const auto& [key, entry] : h_a.entries) {
      if (key.first != n || entry.dim == 0) continue;
      const int p = key.second;
      std::vector<SparseVec> span;
      for (int i : a.space.block(n - 1, p)) {
        SparseVec boundary = a.d.apply(unit_vec(i));
        if (!boundary.empty()) span.push_back(std::move(boundary));
      }
      auto hm_it = h_m.entries.find({n, p});
      if (hm_it != h_m.entries.end())
        for (const SparseVec& rep : hm_it->second.representatives) span.push_back(phi.apply(rep));
      int rank = rank_of_rows(span, a.dim());
      for (const SparseVec& rep : entry.representatives) {
        span.push_back(rep);
        const int grown = rank_of_rows(span, a.dim());
        if (grown == rank) {
          span.pop_back();
          continue;
        }
        rank = grown;
        additions.push_back({{fresh_name(p), n, p}, CgaElement{}, rep});
      }
    }

    // Kernel of H^{n+1}(M) -> H^{n+1}(A): generators whose differential is
    // the dying cocycle and whose image is a primitive of its image.  The
    // cocycle lives in generators of degree < n, so it is decomposable.
    for (const auto& [key, entry] : h_m.entries) {
      if (key.first != n + 1 || entry.dim == 0) continue;
      const int p = key.second;
      const auto& reps = entry.representatives;
      const int r = static_cast<int>(reps.size());
      std::vector<SparseVec> columns;
      for (const SparseVec& z : reps) columns.push_back(phi.apply(z));
      for (int i : a.space.block(n, p)) {
        SparseVec boundary = a.d.apply(unit_vec(i));
        if (!boundary.empty()) columns.push_back(std::move(boundary));
      }
      SparseMatrix k_matrix(a.dim(), static_cast<int>(columns.size()));
      for (size_t c = 0; c < columns.size(); ++c)
        for (const auto& [row, v] : columns[c]) k_matrix.set(row, static_cast<int>(c), v);

      std::vector<SparseVec> lambdas;
      int lambda_rank = 0;
      for (const SparseVec& kv : kernel_basis(k_matrix)) {
        SparseVec lambda;
        for (const auto& [i, v] : kv)
          if (i < r) lambda[i] = v;
        if (lambda.empty()) continue;
        lambdas.push_back(lambda);
        const int grown = rank_of_rows(lambdas, r);
        if (grown == lambda_rank) {
          lambdas.pop_back();
          continue;
        }
        lambda_rank = grown;
        SparseVec z;
        for (const auto& [i, v] : lambda) vec_add_scaled(z, reps[i], v);
        // Normalize the dying cocycle so the differential does not inherit
        // the solver's pivot scaling.
        const Rational lead = z.begin()->second;
        if (lead != 1)
          for (auto& [i, v] : z) v /= lead;
        additions.push_back(
            {{fresh_name(p), n, p}, mb.element(z), block_primitive(a, n, p, phi.apply(z))});
      }
    }

    if (additions.empty()) continue;

    // New generators sort strictly after the existing ones (higher degree),
    // so established generator ids survive the rebuild.
    std::vector<CgaGenerator> gens = model.generators();
    for (const NewGenerator& ng : additions) gens.push_back(ng.gen);
    CdgaPresentation next(std::move(gens), window);
    std::vector<SparseVec> next_images(next.generator_count());
    for (int g = 0; g < model.generator_count(); ++g) {
      next.set_differential(g, model.differential(g));
      next_images[g] = images[g];
    }
    for (NewGenerator& ng : additions) {
      const int id = next.generator_index(ng.gen.name).value();
      next.set_differential(id, std::move(ng.d_value));
      next_images[id] = std::move(ng.image);
    }
    model = std::move(next);
    images = std::move(next_images);
  }

  return MinimalModel{std::move(model), a, std::move(images)};
}

MinimalModel minimal_model(const CdgaPresentation& p, int max_degree) {
  if (p.window().max_degree < max_degree + 2)
    throw std::invalid_argument(
        "window slack insufficient: the presentation must be materialized through degree " +
        std::to_string(max_degree + 2));
  const CgaBasis basis(p);
  return minimal_model(fd_from_cga(basis), max_degree);
}

CheckReport minimal_model_check(const MinimalModel& mm, const DegreeWindow& request) {
  if (mm.target.unit < 0)
    throw std::invalid_argument("minimal_model_check needs a unital target");
  CheckReport report;

  for (int g = 0; g < mm.model.generator_count(); ++g) {
    const CgaGenerator& gen = mm.model.generator(g);
    for (const auto& [mono, c] : mm.model.differential(g).terms) {
      (void)c;
      if (mono.size() < 2)
        report.fail("differential of '" + gen.name + "' has a linear term");
    }
    for (const auto& [r, v] : mm.images.at(g)) {
      (void)v;
      if (mm.target.space.degree(r) != gen.degree || mm.target.space.weight(r) != gen.weight)
        report.fail("image of '" + gen.name + "' is not homogeneous");
    }
  }
  if (!report.ok) return report;

  const CgaBasis mb(mm.model);
  const SparseMatrix phi = algebra_map_matrix(mb, mm.target, mm.images);
  const SparseMatrix lhs = phi * mb.differential_matrix();
  const SparseMatrix rhs = mm.target.d * phi;
  const int top_ok = mm.model.window().max_degree - 1;  // d is truncated above
  for (int r = 0; r < mm.target.dim() && report.ok; ++r) {
    auto mismatch = [&](int c) {
      return mb.slice().degree(c) <= top_ok && vec_coeff(lhs.row(r), c) != vec_coeff(rhs.row(r), c);
    };
    for (const auto& [c, v] : lhs.row(r)) {
      (void)v;
      if (mismatch(c)) {
        report.fail("quasi-isomorphism fails the chain rule on '" +
                    mm.model.mono_label(mb.monomials()[c]) + "'");
        break;
      }
    }
    for (const auto& [c, v] : rhs.row(r)) {
      (void)v;
      if (mismatch(c)) {
        report.fail("quasi-isomorphism fails the chain rule on '" +
                    mm.model.mono_label(mb.monomials()[c]) + "'");
        break;
      }
    }
  }
  if (!report.ok) return report;

  const CohomologyReport h_m = cga_cohomology(mm.model, request);
  const CohomologyReport h_a = cohomology(mm.target.space, mm.target.d, request);
  compare_cohomology(h_m, h_a, phi, mm.target.space, mm.target.d, report);
  return report;
}

FdAlgebra assign_formality_weights(const FdAlgebra& h) {
  for (int r = 0; r < h.d.rows(); ++r)
    if (!h.d.row(r).empty())
      throw std::invalid_argument("assign_formality_weights needs a zero differential");
  FdAlgebra out = h;
  for (BasisElement& b : out.space.basis) b.weight = b.degree;
  return out;
}

PositivityReport positivity_check(const CdgaPresentation& p) {
  PositivityReport out;
  for (const CgaGenerator& g : p.generators())
    classify_weight_sign(g.degree, g.weight, g.name, out.generators);
  classify_cohomology(cga_cohomology(p, {0, p.window().max_degree - 1}), out.cohomology);
  return out;
}

PositivityReport positivity_check(const DglaPresentation& p) {
  PositivityReport out;
  for (const Generator& g : p.lie().generators())
    classify_weight_sign(g.degree, g.weight, g.name, out.generators);
  classify_cohomology(dgla_cohomology(p, {p.window().min_degree + 1, -1}), out.cohomology);
  return out;
}

PositivityReport positivity_check(const OoStructure& s) {
  PositivityReport out;
  const GradedSlice& space = s.space();
  for (int i = 0; i < space.dim(); ++i)
    classify_weight_sign(space.degree(i), space.weight(i), space.basis[i].label, out.generators);
  // One degree of slack except at a natural vanishing boundary: lie-kind
  // slices end at -1, algebra-kind slices start at 0.
  const bool lie = s.kind() == OpKind::lie;
  const int lo = (!lie && space.window.min_degree == 0) ? 0 : space.window.min_degree + 1;
  const int hi = (lie && space.window.max_degree == -1) ? -1 : space.window.max_degree - 1;
  if (lo > hi) {
    out.cohomology.notes.push_back("window too small to read cohomology");
    return out;
  }
  classify_cohomology(cohomology(space, s.d_matrix(), {lo, hi}), out.cohomology);
  return out;
}

SegmentationReport segmentation(const CohomologyReport& h, const Rational& alpha) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  SegmentationReport out;
  out.alpha = alpha;
  out.ok = true;
  out.k = 0;
  for (const auto& [key, entry] : h.entries) {
    if (entry.dim == 0) continue;
    out.support.push_back(key);
    const int n = key.first;
    const int p = key.second;
    const Rational lower = Rational(alpha * n);
    if (lower > p) {
      out.ok = false;
      out.failures.push_back("block " + bidegree_str(n, p) + " sits below alpha*degree");
      continue;
    }
    const Rational excess = Rational(Rational(p) / alpha - n);  // k must cover p/alpha - n
    out.k = std::max(out.k, ceil_to_int(excess));
  }
  if (!out.ok) out.k = 0;
  return out;
}

SegmentationReport segmentation(const CohomologyReport& h) {
  std::set<Rational> candidates;
  for (const auto& [key, entry] : h.entries) {
    if (entry.dim == 0 || key.first == 0) continue;
    const Rational ratio = Rational(Rational(key.second) / key.first);
    if (ratio > 0) candidates.insert(ratio);
  }
  if (candidates.empty()) return segmentation(h, Rational(1));

  std::optional<SegmentationReport> best;
  for (const Rational& alpha : candidates) {
    SegmentationReport attempt = segmentation(h, alpha);
    if (attempt.ok && (!best || attempt.k < best->k)) best = std::move(attempt);
  }
  if (best) return *best;

  SegmentationReport none;
  none.ok = false;
  for (const auto& [key, entry] : h.entries)
    if (entry.dim > 0) none.support.push_back(key);
  none.failures.push_back("no candidate alpha segments the support");
  return none;
}

CheckReport weight_degree_inequality_check(const CdgaPresentation& p) {
  CheckReport report;
  const CgaBasis basis(p);
  for (int i = 0; i < basis.dim(); ++i) {
    if (i == basis.unit_index()) continue;
    if (basis.slice().weight(i) >= basis.slice().degree(i))
      report.fail("'" + p.mono_label(basis.monomials()[i]) + "' has weight " +
                  std::to_string(basis.slice().weight(i)) + " >= degree " +
                  std::to_string(basis.slice().degree(i)));
  }
  return report;
}

CheckReport weight_degree_inequality_check(const DglaPresentation& p) {
  CheckReport report;
  const DglaBasis basis(p);
  for (int i = 0; i < basis.dim(); ++i) {
    if (basis.slice().weight(i) >= basis.slice().degree(i))
      report.fail("'" + p.lie().word_label(basis.words()[i]) + "' has weight " +
                  std::to_string(basis.slice().weight(i)) + " >= degree " +
                  std::to_string(basis.slice().degree(i)));
  }
  return report;
}

}  // namespace wrht
