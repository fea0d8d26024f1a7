#include "torsion/subgroup_search.hpp"

#include "torsion/errors.hpp"
#include "torsion/normal_form.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace torsion {

namespace {

constexpr std::array<Letter, 2> kPositive{Letter::x, Letter::y};

Integer reduce_mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer gcd_with(const Integer& d, const Integer& q) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), q.get_mpz_t());
  return g;
}

// Rows: abelianized relator conjugates, then (conjugation by g) - identity for g = x, y.
IntMatrix invariance_system(const CosetTable& k, const SchreierSystem& ss, const std::vector<PowerWord>& relators) {
  const std::size_t rank = ss.generators.size();
  IntMatrix m(0, rank);
  for (std::uint32_t c = 0; c < k.size(); ++c)
    for (const auto& r : relators) m.append_row(rewrite_abelian(ss, k, r, c));
  for (Letter g : kPositive) {
    for (std::size_t i = 0; i < rank; ++i) {
      Vec row = rewrite_abelian(ss, k, PowerWord(conjugate(ss.generators[i], Word::letter(g))), 0);
      row[i] -= 1;
      m.append_row(row);
    }
  }
  return m;
}

}  // namespace

CosetTable abelian_cover(const CosetTable& ct, const SchreierSystem& ss, const std::vector<Vec>& images,
                         const std::vector<Integer>& moduli, const std::vector<PowerWord>& relators,
                         std::size_t max_cosets) {
  if (images.size() != ss.generators.size()) throw std::invalid_argument("abelian_cover: one image per generator");
  using Point = std::pair<std::uint32_t, Vec>;
  auto shift = [&](const Vec& a, int gen, int sign) {
    Vec out = a;
    if (gen < 0) return out;
    for (std::size_t i = 0; i < moduli.size(); ++i)
      out[i] = reduce_mod(out[i] + sign * images[static_cast<std::size_t>(gen)][i], moduli[i]);
    return out;
  };
  auto step = [&](const Point& pt, Letter l) -> Point {
    std::uint32_t d = ct.next(pt.first, l);
    std::size_t g = generator(l);
    if (is_positive(l)) return {d, shift(pt.second, ss.edge_generator[pt.first][g], 1)};
    return {d, shift(pt.second, ss.edge_generator[d][g], -1)};
  };
  std::map<Point, std::uint32_t> number;
  std::vector<Point> points{{0, Vec(moduli.size(), 0)}};
  number.emplace(points[0], 0);
  for (std::size_t head = 0; head < points.size(); ++head) {
    for (Letter l : {Letter::x, Letter::y, Letter::X, Letter::Y}) {
      Point q = step(points[head], l);
      if (number.emplace(q, static_cast<std::uint32_t>(points.size())).second) {
        if (points.size() >= max_cosets)
          throw BudgetExhausted("subgroup-search", "cover exceeds " + std::to_string(max_cosets) + " cosets");
        points.push_back(std::move(q));
      }
    }
  }
  Permutation px(points.size()), py(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    px[i] = number.at(step(points[i], Letter::x));
    py[i] = number.at(step(points[i], Letter::y));
  }
  return CosetTable::from_action(PermutationAction(std::move(px), std::move(py)), relators);
}

std::vector<CosetTable> invariant_index_p_subgroups(const CosetTable& k, const std::vector<PowerWord>& relators,
                                                    unsigned long p, std::size_t max_cosets,
                                                    std::size_t max_children) {
  SchreierSystem ss = schreier(k);
  std::vector<Vec> basis = kernel_mod_p(invariance_system(k, ss, relators), p);
  const std::size_t dim = basis.size();
  const std::size_t rank = ss.generators.size();
  std::vector<CosetTable> out;
  std::set<std::vector<std::uint32_t>> seen;
  // Hyperplanes correspond to coefficient vectors whose first nonzero entry is 1.
  for (std::size_t lead = 0; lead < dim && out.size() < max_children; ++lead) {
    std::vector<unsigned long> coeff(dim, 0);
    coeff[lead] = 1;
    while (out.size() < max_children) {
      std::vector<Vec> images(rank, Vec(1));
      for (std::size_t b = lead; b < dim; ++b)
        for (std::size_t g = 0; g < rank; ++g) images[g][0] += basis[b][g] * coeff[b];
      try {
        CosetTable child = abelian_cover(k, ss, images, {Integer(p)}, relators, max_cosets);
        if (seen.insert(child.key()).second) out.push_back(std::move(child));
      } catch (const BudgetExhausted&) {
        return out;
      }
      std::size_t pos = dim;
      while (pos > lead + 1 && coeff[pos - 1] == p - 1) coeff[--pos] = 0;
      if (pos == lead + 1) break;
      ++coeff[pos - 1];
    }
  }
  return out;
}

CosetTable abelian_p_refinement(const CosetTable& l, const std::vector<PowerWord>& relators, unsigned long p,
                                unsigned long m, std::size_t max_cosets) {
  SchreierSystem ss = schreier(l);
  const std::size_t rank = ss.generators.size();
  IntMatrix rel(0, rank);
  for (std::uint32_t c = 0; c < l.size(); ++c)
    for (const auto& r : relators) rel.append_row(rewrite_abelian(ss, l, r, c));
  SmithForm sf = snf(rel);
  const Integer q = ipow(p, m);
  std::vector<std::size_t> coords;
  std::vector<Integer> moduli;
  for (std::size_t i = 0; i < rank; ++i) {
    Integer d = i < sf.rank ? sf.diagonal(i, i) : Integer(0);
    Integer mod = gcd_with(d, q);
    if (mod > 1) {
      coords.push_back(i);
      moduli.push_back(mod);
    }
  }
  std::vector<Vec> images(rank, Vec(coords.size()));
  for (std::size_t g = 0; g < rank; ++g)
    for (std::size_t k = 0; k < coords.size(); ++k) images[g][k] = sf.right(g, coords[k]);
  return abelian_cover(l, ss, images, moduli, relators, max_cosets);
}

void certify_S(const CosetTable& s, const std::vector<PowerWord>& relators, const CosetTable& h, unsigned long p) {
  const std::string anchor = "normal-subgroup-search";
  for (const auto& r : relators)
    if (!s.action().in_kernel(r)) throw CertificationFailed(anchor, "relator " + r.to_string() + " moves a coset of S");
  SchreierSystem ss = schreier(s);
  if (!is_normal(s, ss)) throw CertificationFailed(anchor, "S is not normal");
  Integer index = static_cast<unsigned long>(s.size());
  if (p_part(index, p) != index) throw CertificationFailed(anchor, "index of S is not a power of p");
  if (!subgroup_contained(s, ss, h)) throw CertificationFailed(anchor, "S is not contained in H");
  if (s.size() <= h.size()) throw CertificationFailed(anchor, "S is not a proper subgroup of H");
  if (subgroup_abelianization(s, relators).group.free_rank() == 0)
    throw CertificationFailed(anchor, "S has finite abelianization");
}

FindSResult find_S(const std::vector<PowerWord>& relators, const CosetTable& h, unsigned long p,
                   const SearchBudget& budget) {
  if (!is_prime(p)) throw std::invalid_argument("find_S: p must be prime");
  std::vector<CosetTable> level{CosetTable::from_action(PermutationAction({0}, {0}), relators)};
  std::optional<FindSResult> best;
  std::size_t examined = 0;
  for (std::size_t depth = 0; depth <= budget.max_depth && !level.empty(); ++depth) {
    for (const auto& l : level) {
      ++examined;
      FGAbelian ab = subgroup_abelianization(l, relators).group;
      if (ab.free_rank() == 0) continue;
      // Least m with |G : [L,L] L^(p^m)| > |G:H|.
      unsigned long m = 0;
      auto refined_index = [&](unsigned long e) {
        Integer q = ipow(p, e);
        Integer idx = static_cast<unsigned long>(l.size());
        for (std::size_t r = 0; r < ab.free_rank(); ++r) idx *= q;
        for (const auto& d : ab.invariant_factors()) idx *= gcd_with(d, q);
        return idx;
      };
      while (refined_index(m) <= static_cast<unsigned long>(h.size())) ++m;
      if (refined_index(m) > static_cast<unsigned long>(budget.max_cosets)) continue;
      try {
        CosetTable refined = abelian_p_refinement(l, relators, p, m, budget.max_cosets);
        CosetTable s = intersect(refined, h);
        if (s.size() > budget.max_cosets) continue;
        bool better = !best || s.size() < best->s.size() || (s.size() == best->s.size() && s.key() < best->s.key());
        if (better) {
          FindSResult r;
          r.l = l;
          r.refine_exponent = m;
          r.refined_l = std::move(refined);
          r.s = std::move(s);
          best = std::move(r);
        }
      } catch (const BudgetExhausted&) {
        continue;
      }
    }
    if (best && best->s.size() == h.size() * p) break;
    if (depth == budget.max_depth) break;
    std::vector<CosetTable> next;
    std::set<std::vector<std::uint32_t>> seen;
    for (const auto& l : level) {
      if (next.size() >= budget.max_candidates) break;
      for (auto& child : invariant_index_p_subgroups(l, relators, p, budget.max_cosets,
                                                      budget.max_candidates - next.size())) {
        if (seen.insert(child.key()).second) next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  if (!best)
    throw SearchExhausted("normal-subgroup-search", "no normal subgroup of p-power index with infinite abelianization "
                                                    "found within budget (max_depth " + std::to_string(budget.max_depth) +
                                                    ", max_cosets " + std::to_string(budget.max_cosets) +
                                                    ", max_candidates " + std::to_string(budget.max_candidates) +
                                                    ", |G:H| = " + std::to_string(h.size()) + ")");
  certify_S(best->s, relators, h, p);
  best->s_abelianization = subgroup_abelianization(best->s, relators).group;
  best->index_log = log_p_exact(Integer(static_cast<unsigned long>(best->s.size())), p);
  best->candidates_examined = examined;
  return *best;
}

}  // namespace torsion
