#include "torsion/words.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace torsion {

char to_char(Letter l) {
  static constexpr char chars[] = {'x', 'X', 'y', 'Y'};
  return chars[index(l)];
}

std::vector<Letter> free_reduce(std::vector<Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (!out.empty() && out.back() == inverse(l)) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

Word::Word(std::vector<Letter> letters) : letters_(free_reduce(std::move(letters))) {}

long Word::exponent_sum(std::size_t gen) const {
  long s = 0;
  for (Letter l : letters_)
    if (generator(l) == gen) s += is_positive(l) ? 1 : -1;
  return s;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "1";
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(to_char(l));
  return s;
}

namespace {

class WordParser {
public:
  explicit WordParser(std::string_view t) : text_(t) {}

  Word parse_all() {
    Word w = parse_sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return w;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("word '" + std::string(text_) + "': " + why + " at offset " + std::to_string(pos_));
  }
  void skip_space() {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*'))
      ++pos_;
  }
  Word parse_sequence() {
    Word acc;
    for (;;) {
      skip_space();
      if (pos_ == text_.size() || text_[pos_] == ')') return acc;
      acc = multiply(acc, parse_factor());
    }
  }
  Word parse_factor() {
    Word atom;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      atom = parse_sequence();
      if (pos_ == text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
    } else if (c == 'x' || c == 'X' || c == 'y' || c == 'Y') {
      atom = Word::letter(c == 'x' ? Letter::x : c == 'X' ? Letter::X : c == 'y' ? Letter::y : Letter::Y);
      ++pos_;
    } else if (c == '1' || c == 'e') {
      ++pos_;
    } else {
      fail("unexpected character");
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      skip_space();
      bool neg = false;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        neg = true;
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("missing exponent");
      long e = std::stol(std::string(text_.substr(start, pos_ - start)));
      atom = power(atom, neg ? -e : e);
    }
    return atom;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(std::string_view text) { return WordParser(text).parse_all(); }

Word multiply(const Word& a, const Word& b) {
  const auto& la = a.letters();
  const auto& lb = b.letters();
  std::size_t k = 0;
  while (k < la.size() && k < lb.size() && la[la.size() - 1 - k] == inverse(lb[k])) ++k;
  std::vector<Letter> out(la.begin(), la.end() - static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), lb.begin() + static_cast<std::ptrdiff_t>(k), lb.end());
  return Word(std::move(out));
}

Word inverse(const Word& a) {
  std::vector<Letter> out;
  out.reserve(a.size());
  for (auto it = a.letters().rbegin(); it != a.letters().rend(); ++it) out.push_back(inverse(*it));
  return Word(std::move(out));
}

Word power(const Word& a, long n) {
  if (n < 0) return power(inverse(a), -n);
  // a = c * core * c^-1 with core cyclically reduced, so a^n = c core^n c^-1
  const auto& l = a.letters();
  std::size_t k = 0;
  while (2 * k + 1 < l.size() && l[k] == inverse(l[l.size() - 1 - k])) ++k;
  std::vector<Letter> conj(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<Letter> core(l.begin() + static_cast<std::ptrdiff_t>(k), l.end() - static_cast<std::ptrdiff_t>(k));
  std::vector<Letter> out = conj;
  for (long i = 0; i < n; ++i) out.insert(out.end(), core.begin(), core.end());
  for (auto it = conj.rbegin(); it != conj.rend(); ++it) out.push_back(inverse(*it));
  return Word(std::move(out));
}

Word conjugate(const Word& w, const Word& by) { return multiply(multiply(by, w), inverse(by)); }

void PowerWord::append(const Word& base, const Integer& exponent) {
  if (base.is_identity() || exponent == 0) return;
  Word b = exponent < 0 ? torsion::inverse(base) : base;
  Integer e = abs(exponent);
  if (!factors_.empty() && factors_.back().base == b) {
    factors_.back().exponent += e;
    return;
  }
  if (!factors_.empty() && factors_.back().base == torsion::inverse(b)) {
    Integer& last = factors_.back().exponent;
    if (last > e) {
      last -= e;
      return;
    }
    e -= last;
    factors_.pop_back();
    if (e > 0) append(b, e);
    return;
  }
  factors_.push_back({std::move(b), std::move(e)});
}

PowerWord PowerWord::inverse() const {
  PowerWord out;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) out.append(torsion::inverse(it->base), it->exponent);
  return out;
}

PowerWord PowerWord::operator*(const PowerWord& other) const {
  PowerWord out = *this;
  for (const auto& f : other.factors_) out.append(f.base, f.exponent);
  return out;
}

Word PowerWord::expand(std::size_t max_letters) const {
  Integer total = 0;
  for (const auto& f : factors_) total += f.exponent * static_cast<unsigned long>(f.base.size());
  if (total > static_cast<unsigned long>(max_letters)) throw std::length_error("PowerWord::expand: word too long");
  Word w;
  for (const auto& f : factors_) w = multiply(w, power(f.base, f.exponent.get_si()));
  return w;
}

std::string PowerWord::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream out;
  for (const auto& f : factors_) {
    if (f.exponent == 1) out << '(' << f.base.to_string() << ')';
    else out << '(' << f.base.to_string() << ")^" << f.exponent;
  }
  return out.str();
}

Permutation perm_compose(const Permutation& a, const Permutation& b) {
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

Permutation perm_inverse(const Permutation& a) {
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<std::uint32_t>(i);
  return c;
}

Permutation perm_power(const Permutation& a, const Integer& n) {
  Permutation out(a.size());
  std::vector<bool> seen(a.size());
  std::vector<std::uint32_t> cycle;
  for (std::uint32_t s = 0; s < a.size(); ++s) {
    if (seen[s]) continue;
    cycle.clear();
    for (std::uint32_t c = s; !seen[c]; c = a[c]) {
      seen[c] = true;
      cycle.push_back(c);
    }
    Integer len = static_cast<unsigned long>(cycle.size());
    Integer shift;
    mpz_fdiv_r(shift.get_mpz_t(), n.get_mpz_t(), len.get_mpz_t());
    const std::size_t sh = shift.get_ui();
    for (std::size_t i = 0; i < cycle.size(); ++i) out[cycle[i]] = cycle[(i + sh) % cycle.size()];
  }
  return out;
}

PermutationAction::PermutationAction(Permutation x_image, Permutation y_image) {
  if (x_image.size() != y_image.size()) throw std::invalid_argument("PermutationAction: degree mismatch");
  for (const auto* p : {&x_image, &y_image}) {
    std::vector<bool> hit(p->size());
    for (auto v : *p) {
      if (v >= p->size() || hit[v]) throw std::invalid_argument("PermutationAction: not a permutation");
      hit[v] = true;
    }
  }
  images_[index(Letter::X)] = perm_inverse(x_image);
  images_[index(Letter::Y)] = perm_inverse(y_image);
  images_[index(Letter::x)] = std::move(x_image);
  images_[index(Letter::y)] = std::move(y_image);
}

std::uint32_t PermutationAction::apply(std::uint32_t point, const Word& w) const {
  for (Letter l : w.letters()) point = images_[index(l)][point];
  return point;
}

std::uint32_t PermutationAction::apply(std::uint32_t point, const PowerWord& w) const {
  for (const auto& f : w.factors()) {
    std::vector<std::uint32_t> cycle{point};
    for (std::uint32_t c = apply(point, f.base); c != point; c = apply(c, f.base)) cycle.push_back(c);
    Integer len = static_cast<unsigned long>(cycle.size());
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), f.exponent.get_mpz_t(), len.get_mpz_t());
    point = cycle[r.get_ui()];
  }
  return point;
}

Permutation PermutationAction::image(const Word& w) const {
  Permutation p(degree());
  std::iota(p.begin(), p.end(), 0u);
  for (Letter l : w.letters()) p = perm_compose(p, images_[index(l)]);
  return p;
}

Permutation PermutationAction::image(const PowerWord& w) const {
  Permutation p(degree());
  std::iota(p.begin(), p.end(), 0u);
  for (const auto& f : w.factors()) p = perm_compose(p, perm_power(image(f.base), f.exponent));
  return p;
}

bool PermutationAction::in_kernel(const PowerWord& w) const {
  Permutation p = image(w);
  for (std::uint32_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

void add_term(GroupRingElement& a, std::size_t point, const Integer& c) {
  if (c == 0) return;
  auto [it, fresh] = a.try_emplace(point, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) a.erase(it);
  }
}

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement c = a;
  for (const auto& [k, v] : b) add_term(c, k, v);
  return c;
}

GroupRingElement fox_derivative(const Word& w, std::size_t gen, const PermutationAction& action,
                                std::uint32_t start) {
  GroupRingElement out;
  std::uint32_t point = start;
  for (Letter l : w.letters()) {
    const std::uint32_t next = action.apply(point, l);
    if (generator(l) == gen) {
      if (is_positive(l)) add_term(out, point, Integer(1));
      else add_term(out, next, Integer(-1));
    }
    point = next;
  }
  return out;
}

namespace {

std::uint32_t walk(const PermutationAction& action, std::uint32_t point, const Word& w, Vec& acc,
                   const Integer& weight) {
  const std::size_t n = action.degree();
  for (Letter l : w.letters()) {
    const std::uint32_t next = action.apply(point, l);
    const std::size_t g = generator(l);
    if (is_positive(l)) acc[g * n + point] += weight;
    else acc[g * n + next] -= weight;
    point = next;
  }
  return point;
}

}  // namespace

Vec edge_vector(const PermutationAction& action, std::uint32_t start, const Word& w) {
  Vec acc(2 * action.degree());
  walk(action, start, w, acc, Integer(1));
  return acc;
}

Vec edge_vector(const PermutationAction& action, std::uint32_t start, const PowerWord& w) {
  Vec acc(2 * action.degree());
  std::uint32_t point = start;
  for (const auto& f : w.factors()) {
    std::vector<std::uint32_t> cycle{point};
    for (std::uint32_t c = action.apply(point, f.base); c != point; c = action.apply(c, f.base)) cycle.push_back(c);
    Integer len = static_cast<unsigned long>(cycle.size());
    Integer full, rem;
    mpz_fdiv_qr(full.get_mpz_t(), rem.get_mpz_t(), f.exponent.get_mpz_t(), len.get_mpz_t());
    const std::size_t r = rem.get_ui();
    // u^e from `point` visits the cycle `full` times, then its first r points
    for (std::size_t t = 0; t < cycle.size(); ++t) {
      Integer weight = full + (t < r ? 1 : 0);
      if (weight != 0) walk(action, cycle[t], f.base, acc, weight);
    }
    point = cycle[r];
  }
  return acc;
}

FiniteGroup::FiniteGroup(const PermutationAction& action, std::size_t max_order) {
  const std::size_t deg = action.degree();
  Permutation id(deg);
  std::iota(id.begin(), id.end(), 0u);
  std::map<Permutation, std::size_t> index_of;
  elements_.push_back(id);
  index_of.emplace(id, 0);
  std::vector<std::array<std::size_t, 4>> right;  // element * letter
  std::vector<std::pair<std::size_t, Letter>> parent{{0, Letter::x}};
  constexpr Letter order[] = {Letter::x, Letter::y, Letter::X, Letter::Y};
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    std::array<std::size_t, 4> r{};
    for (Letter l : order) {
      Permutation next = perm_compose(elements_[i], action.image(l));
      auto [it, fresh] = index_of.try_emplace(next, elements_.size());
      if (fresh) {
        if (elements_.size() >= max_order)
          throw std::length_error("FiniteGroup: order exceeds " + std::to_string(max_order));
        elements_.push_back(std::move(next));
        parent.emplace_back(i, l);
      }
      r[index(l)] = it->second;
    }
    right.push_back(r);
  }
  const std::size_t n = elements_.size();
  table_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    table_[a * n] = a;
    for (std::size_t b = 1; b < n; ++b) {
      auto [pb, l] = parent[b];
      table_[a * n + b] = right[table_[a * n + pb]][index(l)];
    }
  }
  inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a * n + b] == 0) {
        inverse_[a] = b;
        break;
      }
  for (Letter l : order) gen_[index(l)] = right[0][index(l)];
  std::array<Permutation, 2> reg;
  for (std::size_t g = 0; g < 2; ++g) {
    reg[g].resize(n);
    for (std::size_t a = 0; a < n; ++a) reg[g][a] = static_cast<std::uint32_t>(right[a][2 * g]);
  }
  regular_ = PermutationAction(reg[0], reg[1]);
}

std::size_t FiniteGroup::element_of(const Word& w) const { return regular_.apply(0, w); }

std::size_t FiniteGroup::element_of(const PowerWord& w) const { return regular_.apply(0, w); }

GroupRingElement group_ring_mul(const GroupRingElement& a, const GroupRingElement& b, const FiniteGroup& g) {
  GroupRingElement c;
  for (const auto& [ga, ca] : a)
    for (const auto& [gb, cb] : b) add_term(c, g.mul(ga, gb), ca * cb);
  return c;
}

GroupRingElement group_ring_unit(std::size_t element) { return GroupRingElement{{element, Integer(1)}}; }

std::pair<GroupRingElement, GroupRingElement> magnus_image(const Word& w, const PermutationAction& action) {
  if (!action.in_kernel(w)) throw std::invalid_argument("magnus_image: word is not in the kernel of the action");
  return {fox_derivative(w, 0, action), fox_derivative(w, 1, action)};
}

}  // namespace torsion

namespace torsion {

PowerWord parse_power_word(std::string_view text) {
  PowerWord out;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("power word '" + std::string(text) + "': " + why);
  };
  while (pos < text.size()) {
    char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
      ++pos;
      continue;
    }
    Word base;
    if (c == '(') {
      int depth = 0;
      std::size_t start = pos;
      do {
        if (pos == text.size()) fail("missing ')'");
        if (text[pos] == '(') ++depth;
        if (text[pos] == ')') --depth;
        ++pos;
      } while (depth > 0);
      base = parse_word(text.substr(start + 1, pos - start - 2));
    } else {
      base = parse_word(text.substr(pos, 1));
      ++pos;
    }
    Integer e = 1;
    if (pos < text.size() && text[pos] == '^') {
      std::size_t start = ++pos;
      if (pos < text.size() && text[pos] == '-') ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (e.set_str(std::string(text.substr(start, pos - start)), 10) != 0) fail("bad exponent");
    }
    out.append(base, e);
  }
  return out;
}

}  // namespace torsion
