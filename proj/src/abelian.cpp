#include "torsion/abelian.hpp"

#include "torsion/lattice.hpp"
#include "torsion/normal_form.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace torsion {

Locality Locality::at(unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("Locality::at: p must be prime");
  return Locality{p};
}

FGAbelian FGAbelian::from_relation_matrix(const IntMatrix& relations, Locality loc) {
  FGAbelian a;
  a.loc_ = loc;
  auto diag = smith_diagonal(relations);
  a.free_rank_ = relations.cols() - diag.size();
  for (auto& d : diag) {
    Integer f = loc.prime ? p_part(d, *loc.prime) : d;
    if (f > 1) a.factors_.push_back(std::move(f));
  }
  return a;
}

FGAbelian FGAbelian::from_cyclic(const std::vector<Integer>& orders, Locality loc) {
  for (const auto& o : orders)
    if (o < 0) throw std::invalid_argument("FGAbelian::from_cyclic: negative order");
  std::vector<Integer> diag;
  std::size_t free = 0;
  for (const auto& o : orders) {
    if (o == 0) ++free;
    else diag.push_back(o);
  }
  FGAbelian a = from_relation_matrix(IntMatrix::diagonal(diag), loc);
  a.free_rank_ += free;
  return a;
}

Integer FGAbelian::torsion() const {
  Integer t = 1;
  for (const auto& d : factors_) t *= d;
  return t;
}

Integer FGAbelian::p_torsion(unsigned long p) const { return p_part(torsion(), p); }

std::optional<Integer> FGAbelian::order() const {
  if (free_rank_ > 0) return std::nullopt;
  return torsion();
}

FGAbelian FGAbelian::exponent_quotient(const Integer& n_in) const {
  if (n_in <= 0) throw std::invalid_argument("exponent_quotient: n must be positive");
  Integer n = loc_.prime ? p_part(n_in, *loc_.prime) : n_in;
  std::vector<Integer> orders;
  for (const auto& d : factors_) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    orders.push_back(g);
  }
  for (std::size_t i = 0; i < free_rank_; ++i) orders.push_back(n);
  return from_cyclic(orders, loc_);
}

IntMatrix FGAbelian::presentation() const {
  IntMatrix m(factors_.size(), factors_.size() + free_rank_);
  for (std::size_t i = 0; i < factors_.size(); ++i) m(i, i) = factors_[i];
  return m;
}

FGAbelian FGAbelian::direct_sum(const FGAbelian& other) const {
  if (!(loc_ == other.loc_)) throw std::invalid_argument("direct_sum: locality mismatch");
  std::vector<Integer> orders = factors_;
  orders.insert(orders.end(), other.factors_.begin(), other.factors_.end());
  orders.insert(orders.end(), free_rank_ + other.free_rank_, Integer(0));
  return from_cyclic(orders, loc_);
}

std::string FGAbelian::to_string() const {
  std::ostringstream out;
  bool first = true;
  if (free_rank_ > 0) {
    out << "Z";
    if (free_rank_ > 1) out << '^' << free_rank_;
    first = false;
  }
  for (const auto& d : factors_) {
    out << (first ? "" : " x ") << "Z/" << d;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

GrowthFunction::GrowthFunction(std::map<unsigned long, unsigned long> table) : table_(std::move(table)) {
  if (table_.empty()) throw std::invalid_argument("GrowthFunction: empty table");
}

GrowthFunction GrowthFunction::from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  if (!j.is_object()) throw std::invalid_argument("growth function: expected a JSON object");
  std::map<unsigned long, unsigned long> table;
  for (auto& [k, v] : j.items()) {
    std::size_t pos = 0;
    unsigned long key = std::stoul(k, &pos);
    if (pos != k.size()) throw std::invalid_argument("growth function: bad key '" + k + "'");
    if (!v.is_number_unsigned()) throw std::invalid_argument("growth function: values must be nonnegative integers");
    table[key] = v.get<unsigned long>();
  }
  return GrowthFunction(std::move(table));
}

unsigned long GrowthFunction::operator()(unsigned long n) const {
  auto it = table_.upper_bound(n);
  if (it == table_.begin()) return it->second;
  --it;
  return it->second + (n - it->first);
}

std::string GrowthFunction::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (auto [k, v] : table_) j[std::to_string(k)] = v;
  return j.dump();
}

std::vector<FGAbelian> torsion_lemma_family(unsigned long p, std::size_t max_rank, unsigned long max_exp, Locality loc) {
  std::vector<FGAbelian> out;
  std::vector<unsigned long> exps;
  std::function<void(unsigned long)> rec = [&](unsigned long min_e) {
    for (std::size_t free = 0; free <= max_rank; ++free) {
      std::vector<Integer> orders;
      for (auto e : exps) orders.push_back(ipow(p, e));
      orders.insert(orders.end(), free, Integer(0));
      out.push_back(FGAbelian::from_cyclic(orders, loc));
    }
    if (exps.size() == max_rank) return;
    for (unsigned long e = min_e; e <= max_exp; ++e) {
      exps.push_back(e);
      rec(e);
      exps.pop_back();
    }
  };
  rec(1);
  return out;
}

namespace {

void check_torsion_lemma_part1(unsigned long p, const TorsionLemmaLimits& b, CheckReport& rep) {
  auto family = torsion_lemma_family(p, b.max_rank, b.max_exp, Locality::at(p));
  rep.family_size += family.size();
  std::map<unsigned long, std::vector<FGAbelian>> quotients;
  auto quotients_at = [&](unsigned long n) -> const std::vector<FGAbelian>& {
    auto it = quotients.find(n);
    if (it != quotients.end()) return it->second;
    std::vector<FGAbelian> q;
    for (const auto& b2 : family) q.push_back(b2.exponent_quotient(ipow(p, n)));
    return quotients.emplace(n, std::move(q)).first->second;
  };
  for (const auto& a : family) {
    const unsigned long k = log_p_exact(a.torsion(), p);
    for (unsigned long n = k; n <= k + b.extra_n; ++n) {
      if (n == 0) continue;
      const auto& qs = quotients_at(n);
      const FGAbelian an = a.exponent_quotient(ipow(p, n));
      for (std::size_t i = 0; i < family.size(); ++i) {
        ++rep.pairs_examined;
        if (!(qs[i] == an)) continue;
        if (n == k) {
          ++rep.boundary_skipped;
          continue;
        }
        ++rep.hypotheses_met;
        if (family[i].torsion() < a.torsion())
          rep.violations.push_back({a.to_string(), family[i].to_string(), "n=" + std::to_string(n)});
      }
    }
  }
}

void check_torsion_lemma_part2(unsigned long p, const TorsionLemmaLimits& b, CheckReport& rep) {
  auto family = torsion_lemma_family(p, b.max_rank, b.max_exp, Locality::global());
  rep.family_size += family.size();
  for (const auto& a : family) {
    const Integer ta = a.torsion();
    for (unsigned long m = 2; m <= b.max_m; ++m) {
      const Integer n = ta * m;
      const FGAbelian an = a.exponent_quotient(n);
      for (const auto& bb : family) {
        ++rep.pairs_examined;
        if (!(bb.exponent_quotient(n) == an)) continue;
        ++rep.hypotheses_met;
        if (bb.torsion() < ta)
          rep.violations.push_back({a.to_string(), bb.to_string(), "n=" + n.get_str()});
      }
    }
  }
}

}  // namespace

CheckReport check_torsion_lemma(const TorsionLemmaLimits& bounds) {
  if (bounds.part != 1 && bounds.part != 2) throw std::invalid_argument("check_torsion_lemma: part must be 1 or 2");
  CheckReport rep;
  rep.name = bounds.part == 1 ? "torsion lemma part 1 (pro-p)" : "torsion lemma part 2 (abstract)";
  for (auto p : bounds.primes) {
    if (!is_prime(p)) throw std::invalid_argument("check_torsion_lemma: non-prime in primes");
    if (bounds.part == 1) check_torsion_lemma_part1(p, bounds, rep);
    else check_torsion_lemma_part2(p, bounds, rep);
  }
  return rep;
}

std::vector<std::vector<unsigned long>> finite_abelian_groups_up_to(unsigned long n) {
  std::vector<std::vector<unsigned long>> out;
  std::vector<unsigned long> cur;
  std::function<void(unsigned long, unsigned long)> rec = [&](unsigned long prev, unsigned long prod) {
    out.push_back(cur);
    for (unsigned long d = prev; prod * d <= n; d += prev) {
      if (d < 2) continue;
      cur.push_back(d);
      rec(d, prod * d);
      cur.pop_back();
    }
  };
  // first factor may be any d >= 2; later ones are multiples of the previous
  out.push_back({});
  for (unsigned long d = 2; d <= n; ++d) {
    cur = {d};
    rec(d, d);
  }
  return out;
}

std::vector<IntMatrix> sublattices_up_to_index(std::size_t k, unsigned long max_index) {
  std::vector<IntMatrix> out;
  std::vector<unsigned long> diag(k);
  std::function<void(std::size_t, unsigned long)> choose_diag = [&](std::size_t i, unsigned long prod) {
    if (i == k) {
      // fill entries above the diagonal: h(i, j) in [0, h(j, j)) for j > i
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = r + 1; c < k; ++c) slots.emplace_back(r, c);
      IntMatrix h(k, k);
      for (std::size_t r = 0; r < k; ++r) h(r, r) = diag[r];
      std::function<void(std::size_t)> fill = [&](std::size_t s) {
        if (s == slots.size()) {
          out.push_back(h);
          return;
        }
        auto [r, c] = slots[s];
        for (unsigned long v = 0; v < diag[c]; ++v) {
          h(r, c) = v;
          fill(s + 1);
        }
        h(r, c) = 0;
      };
      fill(0);
      return;
    }
    for (unsigned long d = 1; prod * d <= max_index; ++d) {
      diag[i] = d;
      choose_diag(i + 1, prod * d);
    }
  };
  choose_diag(0, 1);
  return out;
}

namespace {

// Finite abelian group with elements numbered in mixed radix; |A| <= 64.
struct SmallAbelian {
  std::vector<unsigned long> moduli;
  unsigned long order = 1;

  explicit SmallAbelian(std::vector<unsigned long> m) : moduli(std::move(m)) {
    for (auto d : moduli) order *= d;
  }
  std::vector<unsigned long> decode(unsigned long idx) const {
    std::vector<unsigned long> c(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      c[i] = idx % moduli[i];
      idx /= moduli[i];
    }
    return c;
  }
  unsigned long add(unsigned long a, unsigned long b) const {
    unsigned long out = 0, scale = 1;
    for (auto d : moduli) {
      out += ((a % d + b % d) % d) * scale;
      a /= d;
      b /= d;
      scale *= d;
    }
    return out;
  }
};

std::vector<std::uint64_t> all_subgroups(const SmallAbelian& g) {
  std::vector<std::uint64_t> found{1};  // trivial subgroup = {0}
  std::unordered_set<std::uint64_t> seen{1};
  for (std::size_t idx = 0; idx < found.size(); ++idx) {
    const std::uint64_t s = found[idx];
    for (unsigned long e = 1; e < g.order; ++e) {
      if (s >> e & 1) continue;
      // <S, e> = union of cosets S + k e
      std::uint64_t t = s;
      unsigned long ke = e;
      while (!(s >> ke & 1)) {
        for (unsigned long x = 0; x < g.order; ++x)
          if (s >> x & 1) t |= std::uint64_t{1} << g.add(x, ke);
        ke = g.add(ke, e);
      }
      if (seen.insert(t).second) found.push_back(t);
    }
  }
  return found;
}

Integer torsion_of_quotient_in(const Lattice& sub, const Lattice& top) {
  // torsion of top / sub, with sub expressed in top's coordinates
  IntMatrix coords(0, top.rank());
  for (const auto& r : sub.basis_vectors()) coords.append_row(*top.coordinates(r));
  return FGAbelian::from_relation_matrix(coords).torsion();
}

}  // namespace

CheckReport check_index_bound(const IndexBoundLimits& bounds) {
  if (bounds.max_order > 64) throw std::invalid_argument("check_index_bound: max_order is limited to 64");
  CheckReport rep;
  rep.name = "t(A) <= t(B)|A:B|";

  for (const auto& factors : finite_abelian_groups_up_to(bounds.max_order)) {
    ++rep.family_size;
    SmallAbelian g(factors);
    const std::size_t k = factors.size();
    Lattice rel(k);
    for (std::size_t i = 0; i < k; ++i) {
      Vec e(k);
      e[i] = factors[i];
      rel.insert(e);
    }
    for (std::uint64_t mask : all_subgroups(g)) {
      ++rep.pairs_examined;
      ++rep.hypotheses_met;
      Lattice lift = rel;
      for (unsigned long x = 0; x < g.order; ++x)
        if (mask >> x & 1) {
          auto c = g.decode(x);
          Vec v(c.begin(), c.end());
          lift.insert(v);
        }
      // B = lift / rel, |A:B| = [Z^k : lift]
      const Integer tb = torsion_of_quotient_in(rel, lift);
      Lattice full = Lattice::from_rows(IntMatrix::identity(k));
      const Integer index = k ? *lift.index_in(full) : Integer(1);
      const Integer ta = g.order;
      const auto popcount = static_cast<unsigned long>(__builtin_popcountll(mask));
      const std::string aname = FGAbelian::from_cyclic({factors.begin(), factors.end()}).to_string();
      if (tb != popcount || index * popcount != g.order)
        rep.violations.push_back({aname, std::to_string(mask), "lattice route disagrees with element count"});
      if (ta > tb * index) rep.violations.push_back({aname, std::to_string(mask), "t(A) > t(B)|A:B|"});
    }
  }

  // A = Z^f + T, B = image of a finite-index sublattice of Z^k
  for (std::size_t f = 1; f <= bounds.max_free_rank; ++f)
    for (const auto& tors : finite_abelian_groups_up_to(bounds.max_torsion)) {
      const std::size_t k = f + tors.size();
      if (k > 4) continue;
      ++rep.family_size;
      Lattice rel(k);
      std::vector<Integer> orders;
      for (std::size_t i = 0; i < tors.size(); ++i) {
        Vec e(k);
        e[i] = tors[i];
        rel.insert(e);
        orders.push_back(tors[i]);
      }
      orders.insert(orders.end(), f, Integer(0));
      const FGAbelian a = FGAbelian::from_cyclic(orders);
      const Lattice full = Lattice::from_rows(IntMatrix::identity(k));
      for (const auto& h : sublattices_up_to_index(k, bounds.max_index)) {
        ++rep.pairs_examined;
        ++rep.hypotheses_met;
        Lattice sub = Lattice::from_rows(h);
        Lattice inter = lattice_intersection(sub, rel);
        const Integer tb = torsion_of_quotient_in(inter, sub);
        const Integer index = *lattice_sum(sub, rel).index_in(full);
        if (a.torsion() > tb * index) rep.violations.push_back({a.to_string(), format_matrix(h), "t(A) > t(B)|A:B|"});
      }
    }
  return rep;
}

}  // namespace torsion
