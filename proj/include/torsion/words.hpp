#pragma once

#include "torsion/matrix.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace torsion {

/// Letters of the free group on {x, y}. The inverse of a letter is `l ^ 1`.
enum class Letter : std::uint8_t { x = 0, X = 1, y = 2, Y = 3 };

constexpr Letter inverse(Letter l) { return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1u); }
constexpr std::size_t index(Letter l) { return static_cast<std::size_t>(l); }
/// 0 for x^{+-1}, 1 for y^{+-1}.
constexpr std::size_t generator(Letter l) { return static_cast<std::size_t>(l) >> 1; }
constexpr bool is_positive(Letter l) { return (static_cast<std::uint8_t>(l) & 1u) == 0; }
char to_char(Letter l);

/// Freely reduced word in x, y.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);  // reduces
  static Word letter(Letter l) { return Word(std::vector<Letter>{l}); }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  /// Number of occurrences of g minus occurrences of g^-1 (g = 0 for x, 1 for y).
  long exponent_sum(std::size_t gen) const;

  std::string to_string() const;  // "1" for the identity

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

private:
  std::vector<Letter> letters_;
};

Word parse_word(std::string_view text);
Word multiply(const Word& a, const Word& b);
Word inverse(const Word& a);
Word power(const Word& a, long n);
Word conjugate(const Word& w, const Word& by);  // by * w * by^-1
/// Free reduction of an arbitrary letter sequence.
std::vector<Letter> free_reduce(std::vector<Letter> letters);

/// Product of powers base_1^e_1 ... base_k^e_k, never expanded. Used for
/// relators like u^(p^a) whose expansion would be too long.
struct PowerFactor {
  Word base;
  Integer exponent;
  friend bool operator==(const PowerFactor&, const PowerFactor&) = default;
};

class PowerWord {
public:
  PowerWord() = default;
  PowerWord(const Word& w) { append(w, 1); }  // NOLINT(google-explicit-constructor)
  void append(const Word& base, const Integer& exponent);
  const std::vector<PowerFactor>& factors() const noexcept { return factors_; }
  bool is_identity() const noexcept { return factors_.empty(); }
  PowerWord inverse() const;
  PowerWord operator*(const PowerWord& other) const;
  /// Expands to a reduced word; throws std::length_error past `max_letters`.
  Word expand(std::size_t max_letters = 1u << 22) const;
  std::string to_string() const;

  friend bool operator==(const PowerWord&, const PowerWord&) = default;

private:
  std::vector<PowerFactor> factors_;
};

using Permutation = std::vector<std::uint32_t>;

Permutation perm_compose(const Permutation& a, const Permutation& b);  // apply a, then b
Permutation perm_inverse(const Permutation& a);
Permutation perm_power(const Permutation& a, const Integer& n);

/// Parses the output of PowerWord::to_string: "(w)^e" groups with arbitrary
/// integer exponents, and bare letters.
PowerWord parse_power_word(std::string_view text);

/// A right action of F on points 0..n-1, given by the images of x and y.
/// Point 0 is the base point.
class PermutationAction {
public:
  PermutationAction() = default;
  PermutationAction(Permutation x_image, Permutation y_image);

  std::size_t degree() const noexcept { return images_[0].size(); }
  std::uint32_t apply(std::uint32_t point, Letter l) const { return images_[index(l)][point]; }
  std::uint32_t apply(std::uint32_t point, const Word& w) const;
  std::uint32_t apply(std::uint32_t point, const PowerWord& w) const;
  const Permutation& image(Letter l) const { return images_[index(l)]; }
  Permutation image(const Word& w) const;
  Permutation image(const PowerWord& w) const;
  /// True when w acts as the identity on every point.
  bool in_kernel(const PowerWord& w) const;

private:
  std::array<Permutation, 4> images_;
};

/// Element of Z[points]; for a regular action this is the group ring ZG.
using GroupRingElement = std::map<std::size_t, Integer>;

void add_term(GroupRingElement& a, std::size_t point, const Integer& c);
GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b);

/// Fox derivative of w with respect to generator `gen` (0 = x, 1 = y), with
/// each coefficient g in ZF pushed to the point start . g.
GroupRingElement fox_derivative(const Word& w, std::size_t gen, const PermutationAction& action,
                                std::uint32_t start = 0);

/// (d w/dx, d w/dy) evaluated from `start`, flattened to a vector of length
/// 2 * degree with index gen * degree + point. Power factors are handled by
/// the cyclic-sum power rule, so exponents may be huge.
Vec edge_vector(const PermutationAction& action, std::uint32_t start, const PowerWord& w);
Vec edge_vector(const PermutationAction& action, std::uint32_t start, const Word& w);

/// Finite group generated by the images of x and y, elements numbered in
/// breadth-first order (generator order x, y, x^-1, y^-1) from the identity.
class FiniteGroup {
public:
  explicit FiniteGroup(const PermutationAction& action, std::size_t max_order = 1u << 16);

  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t identity() const noexcept { return 0; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * order() + b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  std::size_t element_of(const Word& w) const;
  std::size_t element_of(const PowerWord& w) const;
  std::size_t generator_element(Letter l) const { return gen_[index(l)]; }
  /// Action of F on the group elements by right multiplication.
  const PermutationAction& regular_action() const noexcept { return regular_; }
  const Permutation& element(std::size_t i) const { return elements_[i]; }

private:
  std::vector<Permutation> elements_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
  std::array<std::size_t, 4> gen_{};
  PermutationAction regular_;
};

GroupRingElement group_ring_mul(const GroupRingElement& a, const GroupRingElement& b, const FiniteGroup& g);
/// The group element as a group ring element.
GroupRingElement group_ring_unit(std::size_t element);

/// Magnus embedding of the kernel of the action into Z[points]^2:
/// (d w/dx, d w/dy) pushed through the action. Throws std::invalid_argument
/// when w is not in the kernel.
std::pair<GroupRingElement, GroupRingElement> magnus_image(const Word& w, const PermutationAction& action);

}  // namespace torsion
