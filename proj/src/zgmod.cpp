#include "torsion/zgmod.hpp"

#include "torsion/errors.hpp"
#include "torsion/normal_form.hpp"

#include <random>
#include <stdexcept>

#include "json.hpp"

namespace torsion {

namespace {

constexpr const char* kAnchor = "module-lemma";

std::optional<Permutation> as_permutation(const IntMatrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  Permutation perm(a.rows());
  std::vector<bool> hit(a.cols(), false);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      if (a(i, j) != 1 || col) return std::nullopt;
      col = j;
    }
    if (!col || hit[*col]) return std::nullopt;
    hit[*col] = true;
    perm[i] = static_cast<std::uint32_t>(*col);
  }
  return perm;
}

IntMatrix permutation_matrix(const Permutation& perm) {
  IntMatrix a(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) a(i, perm[i]) = 1;
  return a;
}

unsigned long min_valuation(const Vec& v, unsigned long p) {
  unsigned long best = ~0ul;
  for (const auto& e : v)
    if (e != 0) best = std::min(best, p_valuation(e, p));
  return best;
}

Integer json_integer(const nlohmann::json& j) {
  if (j.is_string()) return Integer(j.get<std::string>());
  return Integer(std::to_string(j.get<long long>()));
}

Vec json_vec(const nlohmann::json& j) {
  Vec v;
  for (const auto& e : j) v.push_back(json_integer(e));
  return v;
}

IntMatrix json_matrix(const nlohmann::json& j, std::size_t cols) {
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(json_vec(r));
  return IntMatrix::from_rows(rows, cols);
}

}  // namespace

GroupAction GroupAction::regular(FiniteGroup group, std::size_t slots) {
  GroupAction a;
  const std::size_t n = group.order();
  a.degree_ = slots * n;
  a.permutations_.resize(n);
  a.matrices_.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    Permutation perm(a.degree_);
    for (std::size_t s = 0; s < slots; ++s)
      for (std::size_t h = 0; h < n; ++h) perm[s * n + h] = static_cast<std::uint32_t>(s * n + group.mul(g, h));
    a.matrices_.push_back(permutation_matrix(perm));
    a.permutations_[g] = std::move(perm);
  }
  a.group_ = std::move(group);
  return a;
}

GroupAction::GroupAction(FiniteGroup group, const IntMatrix& x_matrix, const IntMatrix& y_matrix)
    : group_(std::move(group)) {
  fill_from_generators(x_matrix, y_matrix);
}

void GroupAction::fill_from_generators(const IntMatrix& x_matrix, const IntMatrix& y_matrix) {
  if (x_matrix.rows() != x_matrix.cols() || y_matrix.rows() != x_matrix.rows() || y_matrix.cols() != x_matrix.cols())
    throw std::invalid_argument("group action: generator matrices must be square of equal size");
  degree_ = x_matrix.rows();
  const std::size_t n = group_.order();
  std::vector<std::optional<IntMatrix>> mats(n);
  mats[group_.identity()] = IntMatrix::identity(degree_);
  const std::array<std::pair<Letter, const IntMatrix*>, 2> gens{{{Letter::x, &x_matrix}, {Letter::y, &y_matrix}}};
  std::vector<std::size_t> queue{group_.identity()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t e = queue[head];
    for (auto [l, m] : gens) {
      std::size_t f = group_.mul(e, group_.generator_element(l));
      IntMatrix image = (*m) * (*mats[e]);
      if (!mats[f]) {
        mats[f] = std::move(image);
        queue.push_back(f);
      } else if (*mats[f] != image) {
        throw std::invalid_argument("group action: matrices do not satisfy the relations of G");
      }
    }
  }
  matrices_.clear();
  for (auto& m : mats) matrices_.push_back(std::move(*m));
  permutations_.clear();
  std::vector<Permutation> perms;
  for (const auto& m : matrices_) {
    auto perm = as_permutation(m);
    if (!perm) return;
    perms.push_back(std::move(*perm));
  }
  permutations_ = std::move(perms);
}

Vec GroupAction::apply(std::size_t element, std::span<const Integer> v) const {
  if (v.size() != degree_) throw std::invalid_argument("group action: vector width mismatch");
  if (!permutations_.empty()) {
    Vec out(degree_);
    const Permutation& perm = permutations_[element];
    for (std::size_t i = 0; i < degree_; ++i) out[perm[i]] = v[i];
    return out;
  }
  return mul(v, matrices_[element]);
}

Vec GroupAction::apply(const GroupRingElement& r, std::span<const Integer> v) const {
  Vec out(degree_);
  for (const auto& [g, c] : r)
    if (c != 0) axpy(out, c, apply(g, v));
  return out;
}

ZGLattice::ZGLattice(std::shared_ptr<const GroupAction> action, Lattice lattice)
    : action_(std::move(action)), lattice_(std::move(lattice)) {
  if (lattice_.ambient() != action_->degree()) throw std::invalid_argument("ZGLattice: ambient rank mismatch");
}

bool ZGLattice::is_stable() const {
  for (Letter l : {Letter::x, Letter::y}) {
    std::size_t g = action_->group().generator_element(l);
    for (const auto& b : lattice_.basis_vectors())
      if (!lattice_.contains(action_->apply(g, b))) return false;
  }
  return true;
}

Vec magnus_vector(const GroupAction& regular, const PowerWord& w) {
  if (regular.group().element_of(w) != regular.group().identity())
    throw std::invalid_argument("magnus_vector: " + w.to_string() + " is not in the kernel");
  return edge_vector(regular.group().regular_action(), 0, w);
}

RelationModule relation_module(const CosetTable& ct, const std::vector<PowerWord>& designated) {
  SchreierSystem ss = schreier(ct);
  if (!is_normal(ct, ss)) throw std::invalid_argument("relation_module: subgroup is not normal");
  auto action = std::make_shared<const GroupAction>(GroupAction::regular(FiniteGroup(ct.action()), 2));
  if (action->order() != ct.size()) throw std::invalid_argument("relation_module: action is not regular");
  std::vector<std::size_t> coset_element(ct.size());
  for (std::size_t c = 0; c < ct.size(); ++c) coset_element[c] = action->group().element_of(ss.transversal[c]);
  std::vector<Vec> images;
  for (const auto& s : ss.generators) images.push_back(magnus_vector(*action, PowerWord(s)));
  std::vector<Vec> marked;
  for (const auto& w : designated) {
    if (ct.action().apply(0, w) != 0)
      throw std::invalid_argument("relation_module: " + w.to_string() + " is not in the subgroup");
    marked.push_back(magnus_vector(*action, w));
  }
  ZGLattice module(action, Lattice::from_vectors(images, action->degree()));
  return {std::move(module), std::move(ss), std::move(images), std::move(marked), std::move(coset_element)};
}

Vec schreier_coordinates(const RelationModule& rm, std::span<const Integer> h) {
  const std::size_t n = rm.module.action().order();
  Vec coords(rm.schreier.generators.size());
  Vec check(h.size());
  for (std::size_t k = 0; k < coords.size(); ++k) {
    auto [coset, gen] = rm.schreier.generator_edge[k];
    coords[k] = h[gen * n + rm.coset_element[coset]];
    axpy(check, coords[k], rm.schreier_images[k]);
  }
  if (!std::equal(check.begin(), check.end(), h.begin(), h.end()))
    throw std::invalid_argument("schreier_coordinates: vector is not in the relation module");
  return coords;
}

Word lift_to_word(const RelationModule& rm, std::span<const Integer> h) {
  Vec coords = schreier_coordinates(rm, h);
  std::vector<Letter> letters;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] == 0) continue;
    if (!coords[k].fits_slong_p()) throw std::length_error("lift_to_word: coordinate too large");
    Word piece = power(rm.schreier.generators[k], coords[k].get_si());
    letters.insert(letters.end(), piece.letters().begin(), piece.letters().end());
  }
  return Word(std::move(letters));
}

ZGLattice span_submodule(const std::shared_ptr<const GroupAction>& action, const std::vector<Vec>& gens) {
  Lattice lat(action->degree());
  for (const auto& v : gens)
    for (std::size_t g = 0; g < action->order(); ++g) lat.insert(action->apply(g, v));
  return ZGLattice(action, std::move(lat));
}

FGAbelian quotient_invariants(const ZGLattice& m, const ZGLattice& k, unsigned long p) {
  IntMatrix rel(0, m.rank());
  for (const auto& b : k.lattice().basis_vectors()) {
    auto coords = m.lattice().coordinates(b);
    if (!coords) throw std::invalid_argument("quotient_invariants: K is not contained in M");
    rel.append_row(*coords);
  }
  return FGAbelian::from_relation_matrix(rel, Locality::at(p));
}

IntMatrix equivariant_projection(const ZGLattice& m, const ZGLattice& u) {
  const GroupAction& act = m.action();
  const std::size_t dim = act.degree();
  const auto& basis = u.lattice().basis_vectors();
  const auto& piv = u.lattice().pivots();
  const std::size_t r = basis.size();
  // scale * (pivot block of the U basis)^-1, by back substitution.
  Integer scale = 1;
  for (std::size_t k = 0; k < r; ++k) scale *= basis[k][piv[k]];
  std::vector<std::vector<Rational>> inv(r, std::vector<Rational>(r));
  for (std::size_t col = 0; col < r; ++col) {
    for (std::size_t i = r; i-- > 0;) {
      Rational acc = (i == col) ? Rational(1) : Rational(0);
      for (std::size_t k = i + 1; k < r; ++k) acc -= Rational(basis[i][piv[k]]) * inv[k][col];
      inv[i][col] = acc / Rational(basis[i][piv[i]]);
    }
  }
  IntMatrix p0(dim, dim);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < r; ++i) {
      Rational q = inv[k][i] * Rational(scale);
      if (q == 0) continue;
      if (q.get_den() != 1) throw std::logic_error("equivariant_projection: non-integral scaling");
      Integer qi = q.get_num();
      for (std::size_t c = 0; c < dim; ++c)
        if (basis[i][c] != 0) p0(piv[k], c) += qi * basis[i][c];
    }
  }
  // Average g . P0 . g^-1 over G.
  IntMatrix avg(dim, dim);
  const FiniteGroup& g = act.group();
  for (std::size_t e = 0; e < g.order(); ++e) avg = avg + act.matrix(e) * p0 * act.matrix(g.inv(e));
  return avg;
}

ZGLattice equivariant_complement(const ZGLattice& m, const ZGLattice& u) {
  if (u.rank() == 0) return m;
  IntMatrix proj = equivariant_projection(m, u);
  IntMatrix image = m.lattice().basis() * proj;
  std::vector<Vec> coords = rational_kernel_basis(image.transpose());
  std::vector<Vec> vecs;
  for (const auto& c : coords) vecs.push_back(mul(c, m.lattice().basis()));
  return ZGLattice(m.action_ptr(), Lattice::from_vectors(vecs, m.ambient_rank()));
}

ZGLattice kernel_lattice(const ZGLattice& m, const std::vector<Vec>& marked) {
  const GroupAction& act = m.action();
  const std::size_t n = act.order();
  auto regular = std::make_shared<const GroupAction>(GroupAction::regular(act.group(), marked.size()));
  IntMatrix f(0, act.degree());
  for (const auto& mi : marked)
    for (std::size_t g = 0; g < n; ++g) f.append_row(act.apply(g, mi));
  if (marked.empty()) return ZGLattice(regular, Lattice(0));
  return ZGLattice(regular, Lattice::from_vectors(rational_kernel_basis(f.transpose()), regular->degree()));
}

Vec pair_action(const GroupAction& action, std::span<const Integer> s, const std::vector<Vec>& h) {
  const std::size_t n = action.order();
  if (s.size() != n * h.size()) throw std::invalid_argument("pair_action: width mismatch");
  Vec out(action.degree());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t g = 0; g < n; ++g)
      if (s[i * n + g] != 0) axpy(out, s[i * n + g], action.apply(g, h[i]));
  return out;
}

PerturbationData find_perturbation(const ZGLattice& m, const std::vector<Vec>& marked, unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("find_perturbation: p must be prime");
  const std::size_t d = marked.size();
  if (d == 0) throw NoWitness(kAnchor, "no marked elements");
  for (const auto& v : marked)
    if (!m.lattice().contains(v)) throw std::invalid_argument("find_perturbation: marked element outside M");
  ZGLattice u = span_submodule(m, marked);
  if (u.rank() >= m.rank()) throw NoWitness(kAnchor, "the marked elements span a submodule of finite index");

  // Q (x) M must be d-generated: a random d-element span has full rank.
  bool generated = false;
  for (unsigned attempt = 0; attempt < 3 && !generated; ++attempt) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull + attempt);
    std::uniform_int_distribution<long> coeff(-3, 3);
    std::vector<Vec> sample;
    for (std::size_t i = 0; i < d; ++i) {
      Vec v(m.ambient_rank());
      for (const auto& b : m.lattice().basis_vectors()) axpy(v, Integer(coeff(rng)), b);
      sample.push_back(std::move(v));
    }
    generated = span_submodule(m, sample).rank() == m.rank();
  }
  if (!generated) throw NoWitness(kAnchor, "Q (x) M is not generated by " + std::to_string(d) + " elements");

  ZGLattice v = equivariant_complement(m, u);
  if (v.rank() == 0) throw NoWitness(kAnchor, "equivariant complement is zero");
  ZGLattice l = kernel_lattice(m, marked);
  const GroupAction& act = m.action();
  const std::size_t n = act.order();
  for (const auto& s : l.lattice().basis_vectors()) {
    for (std::size_t slot = 0; slot < d; ++slot) {
      GroupRingElement block;
      for (std::size_t g = 0; g < n; ++g)
        if (s[slot * n + g] != 0) block[g] = s[slot * n + g];
      if (block.empty()) continue;
      for (const auto& basis_v : v.lattice().basis_vectors()) {
        Vec z = act.apply(block, basis_v);
        if (is_zero(z)) continue;
        PerturbationWitness w;
        w.p = p;
        w.h.assign(d, Vec(m.ambient_rank()));
        w.h[slot] = basis_v;
        w.s = s;
        w.z = std::move(z);
        w.j = min_valuation(*v.lattice().coordinates(w.z), p) + 1;
        w.slot = slot;
        PerturbationData data{std::move(u), std::move(v), std::move(l), std::move(w)};
        verify_witness(m, marked, data);
        return data;
      }
    }
  }
  throw NoWitness(kAnchor, "every basis pair (s, h) gives s . h = 0");
}

void verify_witness(const ZGLattice& m, const std::vector<Vec>& marked, const PerturbationData& data) {
  const auto& w = data.witness;
  const GroupAction& act = m.action();
  auto fail = [](const std::string& what) { throw CertificationFailed(kAnchor, "witness: " + what); };
  if (w.h.size() != marked.size()) fail("wrong number of h");
  for (const auto& h : w.h)
    if (!data.v.lattice().contains(h)) fail("h outside V");
  if (!data.l.lattice().contains(w.s)) fail("s outside L");
  if (!is_zero(pair_action(act, w.s, marked))) fail("s . m is not zero");
  Vec z = pair_action(act, w.s, w.h);
  if (z != w.z || is_zero(z)) fail("z differs from s . h or is zero");
  auto coords = data.v.lattice().coordinates(z);
  if (!coords) fail("z outside V");
  const Integer pj = ipow(w.p, w.j);
  const Integer pj1 = ipow(w.p, w.j - 1);
  bool in_pj = true, in_pj1 = true;
  for (const auto& c : *coords) {
    if (!mpz_divisible_p(c.get_mpz_t(), pj.get_mpz_t())) in_pj = false;
    if (!mpz_divisible_p(c.get_mpz_t(), pj1.get_mpz_t())) in_pj1 = false;
  }
  if (in_pj) fail("z lies in p^j V");
  if (!in_pj1) fail("j is not minimal");
}

KnResult build_K_n(const ZGLattice& m, const std::vector<Vec>& marked, const PerturbationWitness& w, unsigned long n) {
  if (n < 1) throw std::invalid_argument("build_K_n: n must be positive");
  const Integer pn = ipow(w.p, n);
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    Vec g = marked[i];
    axpy(g, pn, w.h[i]);
    gens.push_back(std::move(g));
  }
  ZGLattice k = span_submodule(m, gens);
  FGAbelian q = quotient_invariants(m, k, w.p);
  Integer t = q.p_torsion(w.p);
  return {std::move(k), std::move(q), std::move(t)};
}

PerturbationInstance parse_perturbation_instance(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  const unsigned long p = j.value("p", 2ul);
  if (!is_prime(p)) throw std::invalid_argument("perturbation instance: p must be prime");
  FiniteGroup group(PermutationAction(j.at("x").get<Permutation>(), j.at("y").get<Permutation>()));
  std::shared_ptr<const GroupAction> action;
  if (j.contains("action")) {
    const auto& a = j.at("action");
    std::size_t dim = a.at("x").size();
    action = std::make_shared<const GroupAction>(
        GroupAction(std::move(group), json_matrix(a.at("x"), dim), json_matrix(a.at("y"), dim)));
  } else {
    action = std::make_shared<const GroupAction>(GroupAction::regular(std::move(group), j.value("slots", 2ul)));
  }
  Lattice lat(action->degree());
  if (j.contains("module")) {
    for (const auto& r : j.at("module")) lat.insert(json_vec(r));
  } else {
    lat = Lattice::from_rows(IntMatrix::identity(action->degree()));
  }
  ZGLattice module(action, std::move(lat));
  if (!module.is_stable()) throw std::invalid_argument("perturbation instance: module is not G-stable");
  std::vector<Vec> marked;
  for (const auto& v : j.at("marked")) {
    Vec mv = json_vec(v);
    if (mv.size() != action->degree()) throw std::invalid_argument("perturbation instance: marked width mismatch");
    marked.push_back(std::move(mv));
  }
  return {p, std::move(module), std::move(marked)};
}

}  // namespace torsion
