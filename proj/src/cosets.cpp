#include "torsion/cosets.hpp"

#include "torsion/errors.hpp"
#include "torsion/normal_form.hpp"

#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace torsion {

namespace {

constexpr std::uint32_t kUndefined = std::numeric_limits<std::uint32_t>::max();
constexpr std::array<Letter, 4> kBfsOrder{Letter::x, Letter::y, Letter::X, Letter::Y};

// Coset enumeration state (Holt, Eick, O'Brien: HLT with lookahead).
class Enumerator {
public:
  explicit Enumerator(std::size_t max_cosets) : max_(max_cosets) {
    table_.push_back(undefined_row());
    parent_.push_back(0);
  }

  void run(const std::vector<std::vector<Letter>>& relators, const std::vector<std::vector<Letter>>& subgens) {
    for (const auto& w : subgens) scan_and_fill(0, w);
    for (std::uint32_t c = 0; c < table_.size(); ++c) {
      for (const auto& r : relators) {
        if (!is_live(c)) break;
        scan_and_fill(c, r);
      }
      if (!is_live(c)) continue;
      for (Letter l : kBfsOrder) {
        if (table_[c][index(l)] == kUndefined) define(c, l, relators);
      }
    }
  }

  // Live cosets renumbered consecutively; returns the x and y images.
  std::pair<Permutation, Permutation> compact() const {
    std::vector<std::uint32_t> number(table_.size(), kUndefined);
    std::uint32_t n = 0;
    for (std::uint32_t c = 0; c < table_.size(); ++c)
      if (is_live(c)) number[c] = n++;
    Permutation px(n), py(n);
    for (std::uint32_t c = 0; c < table_.size(); ++c) {
      if (!is_live(c)) continue;
      px[number[c]] = number[table_[c][index(Letter::x)]];
      py[number[c]] = number[table_[c][index(Letter::y)]];
    }
    return {px, py};
  }

private:
  static std::array<std::uint32_t, 4> undefined_row() { return {kUndefined, kUndefined, kUndefined, kUndefined}; }

  bool is_live(std::uint32_t c) const { return parent_[c] == c; }

  std::uint32_t rep(std::uint32_t c) {
    std::uint32_t root = c;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[c] != root) {
      std::uint32_t up = parent_[c];
      parent_[c] = root;
      c = up;
    }
    return root;
  }

  void define(std::uint32_t c, Letter l, const std::vector<std::vector<Letter>>& relators) {
    if (live_ >= max_) {
      lookahead(relators);
      if (!is_live(c) || table_[c][index(l)] != kUndefined) return;
      if (live_ >= max_)
        throw BudgetExhausted("coset-enumeration", "coset enumeration exceeded " + std::to_string(max_) + " cosets");
    }
    auto d = static_cast<std::uint32_t>(table_.size());
    table_.push_back(undefined_row());
    parent_.push_back(d);
    ++live_;
    table_[c][index(l)] = d;
    table_[d][index(inverse(l))] = c;
  }

  void lookahead(const std::vector<std::vector<Letter>>& relators) {
    for (std::uint32_t c = 0; c < table_.size(); ++c) {
      for (const auto& r : relators) {
        if (!is_live(c)) break;
        scan(c, r);
      }
    }
  }

  // Scans w from coset c, deducing a single missing entry; returns false
  // when the scan is incomplete.
  bool scan(std::uint32_t alpha, const std::vector<Letter>& w) {
    std::uint32_t f = alpha, b = alpha;
    std::size_t i = 0, j = w.size();
    while (i < j && table_[f][index(w[i])] != kUndefined) f = table_[f][index(w[i++])];
    if (i == j) {
      if (f != alpha) coincidence(f, alpha);
      return true;
    }
    while (j > i && table_[b][index(inverse(w[j - 1]))] != kUndefined) b = table_[b][index(inverse(w[--j]))];
    if (j < i) {
      coincidence(f, b);
      return true;
    }
    if (j == i + 1) {
      table_[f][index(w[i])] = b;
      table_[b][index(inverse(w[i]))] = f;
      return true;
    }
    if (j == i) {
      if (f != b) coincidence(f, b);
      return true;
    }
    return false;
  }

  void scan_and_fill(std::uint32_t alpha, const std::vector<Letter>& w) {
    if (w.empty()) return;
    const std::vector<std::vector<Letter>> none;
    while (is_live(alpha)) {
      if (scan(alpha, w)) return;
      // Define the first missing entry along the forward scan.
      std::uint32_t f = alpha;
      std::size_t i = 0;
      while (table_[f][index(w[i])] != kUndefined) f = table_[f][index(w[i++])];
      define(f, w[i], none);
    }
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    std::uint32_t ra = rep(a), rb = rep(b);
    if (ra == rb) return;
    std::uint32_t keep = std::min(ra, rb), drop = std::max(ra, rb);
    parent_[drop] = keep;
    --live_;
    queue_.push_back(drop);
  }

  void coincidence(std::uint32_t a, std::uint32_t b) {
    merge(a, b);
    while (!queue_.empty()) {
      std::uint32_t g = queue_.front();
      queue_.pop_front();
      for (Letter l : kBfsOrder) {
        std::uint32_t d = table_[g][index(l)];
        if (d == kUndefined) continue;
        table_[d][index(inverse(l))] = kUndefined;
        std::uint32_t mu = rep(g), nu = rep(d);
        if (table_[mu][index(l)] != kUndefined) {
          merge(nu, table_[mu][index(l)]);
        } else if (table_[nu][index(inverse(l))] != kUndefined) {
          merge(mu, table_[nu][index(inverse(l))]);
        } else {
          table_[mu][index(l)] = nu;
          table_[nu][index(inverse(l))] = mu;
        }
      }
    }
  }

  std::size_t max_;
  std::size_t live_ = 1;
  std::vector<std::array<std::uint32_t, 4>> table_;
  std::vector<std::uint32_t> parent_;
  std::deque<std::uint32_t> queue_;
};

std::vector<std::uint32_t> to_uint_vector(const nlohmann::json& j) { return j.get<std::vector<std::uint32_t>>(); }

}  // namespace

CosetTable CosetTable::from_action(const PermutationAction& action, std::vector<PowerWord> relators,
                                   std::vector<PowerWord> subgroup_gens) {
  const std::size_t n = action.degree();
  if (n == 0) throw std::invalid_argument("coset table: empty action");
  std::vector<std::uint32_t> number(n, kUndefined);
  std::vector<std::uint32_t> order{0};
  number[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Letter l : kBfsOrder) {
      std::uint32_t d = action.apply(order[head], l);
      if (number[d] == kUndefined) {
        number[d] = static_cast<std::uint32_t>(order.size());
        order.push_back(d);
      }
    }
  }
  if (order.size() != n) throw std::invalid_argument("coset table: action is not transitive");
  CosetTable ct;
  ct.rows_.resize(n);
  Permutation px(n), py(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (Letter l : kBfsOrder) ct.rows_[c][index(l)] = number[action.apply(order[c], l)];
    px[c] = ct.rows_[c][index(Letter::x)];
    py[c] = ct.rows_[c][index(Letter::y)];
  }
  ct.action_ = PermutationAction(std::move(px), std::move(py));
  ct.relators_ = std::move(relators);
  ct.subgroup_gens_ = std::move(subgroup_gens);
  return ct;
}

void CosetTable::validate() const {
  const std::size_t n = size();
  if (n == 0) throw CertificationFailed("coset-table", "empty table");
  for (std::uint32_t c = 0; c < n; ++c) {
    for (Letter l : kBfsOrder) {
      std::uint32_t d = next(c, l);
      if (d >= n) throw CertificationFailed("coset-table", "undefined entry at coset " + std::to_string(c));
      if (next(d, inverse(l)) != c)
        throw CertificationFailed("coset-table", "inverse entries disagree at coset " + std::to_string(c));
    }
  }
  for (const auto& r : relators_) {
    if (!action_.in_kernel(r))
      throw CertificationFailed("coset-table", "relator " + r.to_string() + " moves some coset");
  }
  for (const auto& h : subgroup_gens_) {
    if (action_.apply(0, h) != 0)
      throw CertificationFailed("coset-table", "subgroup generator " + h.to_string() + " moves the base coset");
  }
}

std::vector<std::uint32_t> CosetTable::key() const {
  std::vector<std::uint32_t> out = action_.image(Letter::x);
  const auto& y = action_.image(Letter::y);
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

std::string CosetTable::to_json() const {
  nlohmann::json j;
  j["cosets"] = size();
  j["x"] = action_.image(Letter::x);
  j["y"] = action_.image(Letter::y);
  auto words = [](const std::vector<PowerWord>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(w.to_string());
    return out;
  };
  j["relators"] = words(relators_);
  j["subgroup_generators"] = words(subgroup_gens_);
  return j.dump();
}

CosetTable CosetTable::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  auto words = [&](const char* key) {
    std::vector<PowerWord> out;
    if (j.contains(key))
      for (const auto& s : j.at(key)) out.push_back(parse_power_word(s.get<std::string>()));
    return out;
  };
  PermutationAction action(to_uint_vector(j.at("x")), to_uint_vector(j.at("y")));
  CosetTable ct = from_action(action, words("relators"), words("subgroup_generators"));
  if (ct.size() != j.at("cosets").get<std::size_t>()) throw std::invalid_argument("coset table: size mismatch");
  ct.validate();
  return ct;
}

CosetTable todd_coxeter(const std::vector<Word>& relators, const std::vector<Word>& subgroup_gens,
                        std::size_t max_cosets) {
  if (max_cosets == 0) throw std::invalid_argument("todd_coxeter: max_cosets must be positive");
  std::vector<std::vector<Letter>> rels, gens;
  for (const auto& r : relators)
    if (!r.is_identity()) rels.push_back(r.letters());
  for (const auto& h : subgroup_gens)
    if (!h.is_identity()) gens.push_back(h.letters());
  Enumerator e(max_cosets);
  e.run(rels, gens);
  auto [px, py] = e.compact();
  std::vector<PowerWord> pr(relators.begin(), relators.end());
  std::vector<PowerWord> ph(subgroup_gens.begin(), subgroup_gens.end());
  CosetTable ct = CosetTable::from_action(PermutationAction(std::move(px), std::move(py)), std::move(pr), std::move(ph));
  ct.validate();
  return ct;
}

SchreierSystem schreier(const CosetTable& ct) {
  const std::size_t n = ct.size();
  SchreierSystem ss;
  ss.transversal.assign(n, Word());
  ss.edge_generator.assign(n, {0, 0});
  std::vector<std::array<bool, 2>> tree(n, {false, false});
  std::vector<bool> seen(n, false);
  std::vector<std::uint32_t> order{0};
  seen[0] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    std::uint32_t c = order[head];
    for (Letter l : kBfsOrder) {
      std::uint32_t d = ct.next(c, l);
      if (seen[d]) continue;
      seen[d] = true;
      order.push_back(d);
      std::vector<Letter> t = ss.transversal[c].letters();
      t.push_back(l);
      ss.transversal[d] = Word(std::move(t));
      if (is_positive(l)) tree[c][generator(l)] = true;
      else tree[d][generator(l)] = true;
    }
  }
  for (std::uint32_t c = 0; c < n; ++c) {
    for (std::size_t g = 0; g < 2; ++g) {
      if (tree[c][g]) {
        ss.edge_generator[c][g] = -1;
        continue;
      }
      Letter l = g == 0 ? Letter::x : Letter::y;
      ss.edge_generator[c][g] = static_cast<int>(ss.generators.size());
      ss.generators.push_back(
          multiply(multiply(ss.transversal[c], Word::letter(l)), inverse(ss.transversal[ct.next(c, l)])));
      ss.generator_edge.emplace_back(c, g);
    }
  }
  return ss;
}

Rewriting rewrite(const SchreierSystem& ss, const CosetTable& ct, const Word& w) {
  Rewriting out;
  out.abelian.assign(ss.generators.size(), 0);
  std::uint32_t c = 0;
  for (Letter l : w.letters()) {
    std::uint32_t d = ct.next(c, l);
    int gen = is_positive(l) ? ss.edge_generator[c][generator(l)] : ss.edge_generator[d][generator(l)];
    if (gen >= 0) {
      int sign = is_positive(l) ? 1 : -1;
      out.abelian[static_cast<std::size_t>(gen)] += sign;
      out.sequence.emplace_back(static_cast<std::size_t>(gen), sign);
    }
    c = d;
  }
  if (c != 0) throw std::invalid_argument("rewrite: " + w.to_string() + " is not in the subgroup");
  return out;
}

Word expand(const SchreierSystem& ss, const std::vector<std::pair<std::size_t, int>>& sequence) {
  std::vector<Letter> letters;
  for (auto [gen, sign] : sequence) {
    const Word& s = ss.generators.at(gen);
    Word piece = sign > 0 ? s : inverse(s);
    letters.insert(letters.end(), piece.letters().begin(), piece.letters().end());
  }
  return Word(std::move(letters));
}

Vec rewrite_abelian(const SchreierSystem& ss, const CosetTable& ct, const PowerWord& w, std::uint32_t start) {
  Vec ev = edge_vector(ct.action(), start, w);
  const std::size_t n = ct.size();
  Vec out(ss.generators.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto [coset, gen] = ss.generator_edge[k];
    out[k] = ev[gen * n + coset];
  }
  return out;
}

SubgroupAbelianization subgroup_abelianization(const CosetTable& ct, const std::vector<PowerWord>& relators,
                                               Locality loc) {
  for (const auto& r : relators) {
    if (!ct.action().in_kernel(r))
      throw std::invalid_argument("subgroup_abelianization: relator " + r.to_string() + " moves some coset");
  }
  SchreierSystem ss = schreier(ct);
  const std::size_t rank = ss.generators.size();
  IntMatrix rel(0, rank);
  for (std::uint32_t c = 0; c < ct.size(); ++c)
    for (const auto& r : relators) rel.append_row(rewrite_abelian(ss, ct, r, c));
  FGAbelian group = FGAbelian::from_relation_matrix(rel, loc);
  return {std::move(ss), std::move(rel), std::move(group)};
}

bool is_normal(const CosetTable& ct, const SchreierSystem& ss) {
  for (const auto& s : ss.generators) {
    for (Letter l : kBfsOrder) {
      if (ct.action().apply(0, conjugate(s, Word::letter(l))) != 0) return false;
    }
  }
  return true;
}

CosetTable intersect(const CosetTable& a, const CosetTable& b) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> number;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> points{{0, 0}};
  number[{0, 0}] = 0;
  for (std::size_t head = 0; head < points.size(); ++head) {
    for (Letter l : kBfsOrder) {
      std::pair<std::uint32_t, std::uint32_t> q{a.next(points[head].first, l), b.next(points[head].second, l)};
      if (number.emplace(q, static_cast<std::uint32_t>(points.size())).second) points.push_back(q);
    }
  }
  Permutation px(points.size()), py(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [u, v] = points[i];
    px[i] = number.at({a.next(u, Letter::x), b.next(v, Letter::x)});
    py[i] = number.at({a.next(u, Letter::y), b.next(v, Letter::y)});
  }
  return CosetTable::from_action(PermutationAction(std::move(px), std::move(py)), a.relators());
}

bool subgroup_contained(const CosetTable& sub, const SchreierSystem& sub_ss, const CosetTable& super) {
  (void)sub;
  for (const auto& s : sub_ss.generators)
    if (super.action().apply(0, s) != 0) return false;
  return true;
}

}  // namespace torsion
