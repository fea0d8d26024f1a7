#include "torsion/lie.hpp"

#include "torsion/cosets.hpp"
#include "torsion/normal_form.hpp"
#include "torsion/zgmod.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace torsion {

namespace {

Integer torsion_at(const IntMatrix& relations, unsigned long p) {
  return FGAbelian::from_relation_matrix(relations, Locality::at(p)).torsion();
}

IntMatrix minus_identity(const IntMatrix& a) { return a - IntMatrix::identity(a.rows()); }

}  // namespace

LieLattice::LieLattice(unsigned long p, std::size_t rank,
                       const std::vector<std::tuple<std::size_t, std::size_t, Vec>>& brackets)
    : p_(p), rank_(rank), table_(rank * rank, Vec(rank)) {
  if (!is_prime(p)) throw std::invalid_argument("LieLattice: p must be prime");
  std::vector<bool> given(rank * rank, false);
  for (const auto& [i, j, c] : brackets) {
    if (i >= rank || j >= rank || c.size() != rank) throw std::invalid_argument("LieLattice: malformed bracket entry");
    table_[i * rank + j] = c;
    given[i * rank + j] = true;
  }
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j)
      if (given[i * rank + j] && !given[j * rank + i]) table_[j * rank + i] = scaled(table_[i * rank + j], -1);
  if (!is_antisymmetric()) throw std::invalid_argument("LieLattice: bracket is not antisymmetric");
  if (!satisfies_jacobi()) throw std::invalid_argument("LieLattice: Jacobi identity fails");
}

LieLattice LieLattice::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  const auto rank = j.at("rank").get<std::size_t>();
  const auto p = j.at("p").get<unsigned long>();
  std::vector<std::tuple<std::size_t, std::size_t, Vec>> brackets;
  for (const auto& entry : j.at("brackets")) {
    if (!entry.is_array() || entry.size() != rank + 2) throw std::invalid_argument("LieLattice: bracket entry size");
    Vec c;
    for (std::size_t k = 2; k < entry.size(); ++k) c.emplace_back(std::to_string(entry[k].get<long long>()));
    brackets.emplace_back(entry[0].get<std::size_t>(), entry[1].get<std::size_t>(), std::move(c));
  }
  return LieLattice(p, rank, brackets);
}

LieLattice LieLattice::heisenberg(unsigned long p) {
  return LieLattice(p, 3, {{0, 1, Vec{0, 0, Integer(p)}}});
}

LieLattice LieLattice::abelian(unsigned long p, std::size_t rank) { return LieLattice(p, rank, {}); }

Vec LieLattice::bracket(std::span<const Integer> a, std::span<const Integer> b) const {
  Vec out(rank_);
  for (std::size_t i = 0; i < rank_; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < rank_; ++j)
      if (b[j] != 0) axpy(out, a[i] * b[j], constant(i, j));
  }
  return out;
}

bool LieLattice::is_antisymmetric() const {
  for (std::size_t i = 0; i < rank_; ++i)
    for (std::size_t j = 0; j < rank_; ++j)
      if (add(constant(i, j), constant(j, i)) != Vec(rank_)) return false;
  return true;
}

bool LieLattice::satisfies_jacobi() const {
  auto unit = [&](std::size_t i) {
    Vec e(rank_);
    e[i] = 1;
    return e;
  };
  for (std::size_t a = 0; a < rank_; ++a)
    for (std::size_t b = 0; b < rank_; ++b)
      for (std::size_t c = 0; c < rank_; ++c) {
        Vec s = bracket(unit(a), constant(b, c));
        s = add(s, bracket(unit(b), constant(c, a)));
        s = add(s, bracket(unit(c), constant(a, b)));
        if (!is_zero(s)) return false;
      }
  return true;
}

bool LieLattice::is_powerful() const {
  const Integer m = p_ == 2 ? Integer(4) : Integer(p_);
  for (const auto& c : table_)
    for (const auto& e : c)
      if (!mpz_divisible_p(e.get_mpz_t(), m.get_mpz_t())) return false;
  return true;
}

Lattice derived_sublattice(const LieLattice& g, const Lattice& sub) {
  Lattice out(g.rank());
  const auto& basis = sub.basis_vectors();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) out.insert(g.bracket(basis[i], basis[j]));
  return out;
}

Lattice derived_sublattice(const LieLattice& g) {
  return derived_sublattice(g, Lattice::from_rows(IntMatrix::identity(g.rank())));
}

Lattice scale(const LieLattice& g, unsigned long n) {
  return Lattice::from_rows(IntMatrix::identity(g.rank())).scaled(ipow(g.prime(), n));
}

UniformIdentity uniform_torsion_identity(const LieLattice& g, unsigned long n) {
  const unsigned long p = g.prime();
  const Integer pn = ipow(p, n);
  const Lattice derived = derived_sublattice(g);
  const Integer a = torsion_at(derived.basis(), p);
  UniformIdentity out;
  out.n = n;

  const Lattice gn = scale(g, n);
  const Lattice derived_n = derived_sublattice(g, gn);
  IntMatrix rel(0, gn.rank());
  for (const auto& b : derived_n.basis_vectors()) rel.append_row(*gn.coordinates(b));
  out.direct = torsion_at(rel, p);

  out.via_scaling = torsion_at(scaled(derived.basis(), pn), p);
  out.via_index = a;
  for (std::size_t k = 0; k < derived.rank(); ++k) out.via_index *= pn;
  out.bound = a;
  for (std::size_t k = 0; k < g.rank(); ++k) out.bound *= pn;
  return out;
}

bool dimension_additive(const LieLattice& g) {
  const Lattice derived = derived_sublattice(g);
  FGAbelian q = FGAbelian::from_relation_matrix(derived.basis());
  return g.rank() == derived.rank() + q.free_rank();
}

CoinvariantOutcome check_coinvariant_bound(const ModuleInstance& inst) {
  FiniteGroup group(PermutationAction(inst.x_perm, inst.y_perm));
  GroupAction act(group, inst.x_matrix, inst.y_matrix);
  const std::size_t k = act.degree();
  if (inst.relations.cols() != k) throw std::invalid_argument("check_coinvariant_bound: relation width mismatch");
  Lattice rel = Lattice::from_rows(inst.relations);
  for (Letter l : {Letter::x, Letter::y})
    for (const auto& r : rel.basis_vectors())
      if (!rel.contains(act.apply(act.group().generator_element(l), r)))
        throw std::invalid_argument("check_coinvariant_bound: relation lattice is not G-stable");

  FGAbelian a = FGAbelian::from_relation_matrix(inst.relations, Locality::at(inst.p));
  IntMatrix aug = vstack(minus_identity(inst.x_matrix), minus_identity(inst.y_matrix));
  CoinvariantOutcome out;
  out.group_order = act.order();
  out.lhs = torsion_at(vstack(inst.relations, aug), inst.p);
  out.rhs = a.torsion();
  for (std::size_t d = 0; d < a.free_rank(); ++d) out.rhs *= static_cast<unsigned long>(act.order());
  if (rel.is_zero()) {
    IntMatrix fixed_system = vstack(minus_identity(inst.x_matrix).transpose(), minus_identity(inst.y_matrix).transpose());
    Lattice fixed = Lattice::from_vectors(rational_kernel_basis(fixed_system), k);
    out.fixed_meets_augmentation_trivially = lattice_intersection(fixed, Lattice::from_rows(aug)).rank() == 0;
  }
  return out;
}

std::vector<ModuleInstance> random_module_instances(std::size_t count, std::uint64_t seed, std::size_t max_order,
                                                 std::size_t max_rank, const std::vector<unsigned long>& primes) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::vector<ModuleInstance> out;
  while (out.size() < count) {
    const std::size_t k = uniform(1, max_rank);
    // Signed permutations of the basis; point 2i is e_i, point 2i+1 is -e_i.
    std::array<IntMatrix, 2> mats;
    std::array<Permutation, 2> perms;
    for (std::size_t g = 0; g < 2; ++g) {
      Permutation sigma(k);
      std::iota(sigma.begin(), sigma.end(), 0u);
      std::shuffle(sigma.begin(), sigma.end(), rng);
      IntMatrix m(k, k);
      perms[g].resize(2 * k);
      for (std::size_t i = 0; i < k; ++i) {
        bool negate = uniform(0, 2) == 0;
        m(i, sigma[i]) = negate ? -1 : 1;
        perms[g][2 * i] = static_cast<std::uint32_t>(2 * sigma[i] + (negate ? 1 : 0));
        perms[g][2 * i + 1] = static_cast<std::uint32_t>(2 * sigma[i] + (negate ? 0 : 1));
      }
      // The points carry a right action; transposes turn it into the left one.
      mats[g] = m.transpose();
    }
    try {
      FiniteGroup probe(PermutationAction(perms[0], perms[1]), max_order);
    } catch (const std::length_error&) {
      continue;
    }
    ModuleInstance inst;
    inst.p = primes[uniform(0, primes.size() - 1)];
    inst.x_perm = perms[0];
    inst.y_perm = perms[1];
    inst.x_matrix = mats[0];
    inst.y_matrix = mats[1];
    GroupAction act(FiniteGroup(PermutationAction(perms[0], perms[1])), mats[0], mats[1]);
    Lattice rel(k);
    const std::size_t seeds = uniform(0, k);
    const long span = static_cast<long>(inst.p * inst.p);
    for (std::size_t s = 0; s < seeds; ++s) {
      Vec v(k);
      for (auto& e : v) e = std::uniform_int_distribution<long>(-span, span)(rng);
      for (std::size_t g = 0; g < act.order(); ++g) rel.insert(act.apply(g, v));
    }
    inst.relations = rel.is_zero() ? IntMatrix(0, k) : rel.basis();
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<NormalPair> check_normal_subgroup_bound(const std::string& name, const std::vector<Word>& relators,
                                      std::size_t max_cosets) {
  CosetTable whole = todd_coxeter(relators, {}, max_cosets);
  FiniteGroup group(whole.action());
  const std::size_t n = group.order();
  if (n > 20) throw std::invalid_argument("check_normal_subgroup_bound: group too large for subset enumeration");
  std::vector<PowerWord> rels(relators.begin(), relators.end());
  const CosetTable top = CosetTable::from_action(PermutationAction({0}, {0}), rels);
  const FGAbelian a_ab = subgroup_abelianization(top, rels).group;

  std::vector<NormalPair> out;
  for (std::uint32_t mask = 1; mask < (1u << n); mask += 2) {  // identity is element 0
    auto in = [&](std::size_t e) { return (mask >> e) & 1u; };
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      if (!in(a)) continue;
      for (std::size_t b = 0; b < n && ok; ++b) {
        if (in(b) && !in(group.mul(a, b))) ok = false;
        if (!in(group.mul(group.mul(group.inv(b), a), b))) ok = false;
      }
    }
    if (!ok) continue;
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < n; ++e)
      if (in(e)) members.push_back(e);
    // Right cosets B g, labelled by their least element.
    std::vector<std::uint32_t> label(n);
    std::map<std::size_t, std::uint32_t> coset_index;
    for (std::size_t g = 0; g < n; ++g) {
      std::size_t rep = n;
      for (std::size_t b : members) rep = std::min(rep, group.mul(b, g));
      label[g] = coset_index.emplace(rep, static_cast<std::uint32_t>(coset_index.size())).first->second;
    }
    Permutation px(coset_index.size()), py(coset_index.size());
    for (std::size_t g = 0; g < n; ++g) {
      px[label[g]] = label[group.mul(g, group.generator_element(Letter::x))];
      py[label[g]] = label[group.mul(g, group.generator_element(Letter::y))];
    }
    CosetTable b_table = CosetTable::from_action(PermutationAction(px, py), rels);
    NormalPair pair;
    pair.group = name;
    pair.subgroup_order = members.size();
    pair.index = b_table.size();
    pair.a_ab = a_ab;
    pair.b_ab = subgroup_abelianization(b_table, rels).group;
    const Integer ta = a_ab.torsion(), tb = pair.b_ab.torsion();
    Integer part2 = tb;
    for (std::size_t d = 0; d <= pair.b_ab.free_rank(); ++d) part2 *= static_cast<unsigned long>(pair.index);
    pair.holds = ta <= part2;
    if (a_ab.free_rank() == pair.b_ab.free_rank())
      pair.holds = pair.holds && ta <= tb * static_cast<unsigned long>(pair.index);
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace torsion
