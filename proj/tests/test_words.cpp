#include "doctest.h"

#include "torsion/words.hpp"

#include <numeric>
#include <random>

using namespace torsion;

namespace {

Permutation random_perm(std::mt19937_64& rng, std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

Word random_word(std::mt19937_64& rng, std::size_t len) {
  std::vector<Letter> ls;
  for (std::size_t i = 0; i < len; ++i) ls.push_back(static_cast<Letter>(rng() % 4));
  return Word(ls);
}

}  // namespace

TEST_CASE("free reduction and parsing") {
  CHECK(parse_word("xXyyYx").to_string() == "yx");
  CHECK(parse_word("").is_identity());
  CHECK(parse_word("xX").to_string() == "1");
  CHECK(multiply(parse_word("xy"), parse_word("Yx")).to_string() == "xx");
  CHECK(inverse(parse_word("xyYx")).to_string() == "XX");
  CHECK(inverse(parse_word("xyXY")).to_string() == "yxYX");
  CHECK(power(parse_word("xy"), -2).to_string() == "YXYX");
  CHECK(conjugate(parse_word("y"), parse_word("x")).to_string() == "xyX");
  CHECK(parse_word("xxyXXy").exponent_sum(0) == 0);
  CHECK(parse_word("xxyXXy").exponent_sum(1) == 2);
  CHECK_THROWS_AS(parse_word("xz"), std::invalid_argument);
}

TEST_CASE("power words") {
  PowerWord w;
  w.append(parse_word("xy"), Integer("1000000000000000000000"));
  w.append(parse_word("X"), 3);
  CHECK(parse_power_word(w.to_string()) == w);
  CHECK(parse_power_word(w.inverse().to_string()) == w.inverse());
  PowerWord small;
  small.append(parse_word("xy"), 3);
  small.append(parse_word("Y"), -2);
  CHECK(small.expand() == parse_word("xyxyxyyy"));
  CHECK_THROWS_AS(w.expand(1000), std::length_error);
}

TEST_CASE("permutation actions") {
  PermutationAction a({1, 2, 0}, {0, 2, 1});
  CHECK(a.apply(0, parse_word("xx")) == 2);
  CHECK(a.apply(0, parse_word("xy")) == 2);
  CHECK(a.apply(1, parse_word("Xy")) == 0);
  CHECK(a.in_kernel(parse_word("xxx")));
  CHECK(a.in_kernel(parse_word("xyxy")));
  CHECK_FALSE(a.in_kernel(parse_word("xy")));
  CHECK(perm_power(a.image(Letter::x), Integer("300000000000000000002")) == perm_power(a.image(Letter::x), 2));
}

TEST_CASE("Klein four multiplication table") {
  FiniteGroup v4(PermutationAction({1, 0, 3, 2}, {2, 3, 0, 1}));
  REQUIRE(v4.order() == 4);
  // Breadth-first labels: e, x, y, xy, so the product is bitwise xor.
  CHECK(v4.generator_element(Letter::x) == 1);
  CHECK(v4.generator_element(Letter::y) == 2);
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(v4.inv(a) == a);
    for (std::size_t b = 0; b < 4; ++b) CHECK(v4.mul(a, b) == (a ^ b));
  }
  CHECK(v4.element_of(parse_word("xyxY")) == 0);
}

TEST_CASE("symmetric group S3") {
  FiniteGroup s3(PermutationAction({1, 2, 0}, {1, 0, 2}));
  CHECK(s3.order() == 6);
  for (std::size_t a = 0; a < 6; ++a) {
    CHECK(s3.mul(a, s3.inv(a)) == 0);
    for (std::size_t b = 0; b < 6; ++b)
      for (std::size_t c = 0; c < 6; ++c) CHECK(s3.mul(s3.mul(a, b), c) == s3.mul(a, s3.mul(b, c)));
  }
  // mul(a, b) is a followed by b.
  const Word xy = parse_word("xy");
  CHECK(s3.element_of(xy) == s3.mul(s3.generator_element(Letter::x), s3.generator_element(Letter::y)));
}

TEST_CASE("fundamental formula of the free differential calculus") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 5;
    PermutationAction act(random_perm(rng, n), random_perm(rng, n));
    const Word w = random_word(rng, 1 + rng() % 12);
    const std::uint32_t start = static_cast<std::uint32_t>(rng() % n);
    Vec lhs(n);
    for (std::size_t gen = 0; gen < 2; ++gen) {
      const Letter l = gen == 0 ? Letter::x : Letter::y;
      for (const auto& [point, c] : fox_derivative(w, gen, act, start)) {
        lhs[act.apply(static_cast<std::uint32_t>(point), l)] += c;
        lhs[point] -= c;
      }
    }
    Vec rhs(n);
    rhs[act.apply(start, w)] += 1;
    rhs[start] -= 1;
    CHECK(lhs == rhs);
    // The flattened form agrees with the map form.
    Vec ev = edge_vector(act, start, w);
    for (std::size_t gen = 0; gen < 2; ++gen)
      for (const auto& [point, c] : fox_derivative(w, gen, act, start)) CHECK(ev[gen * n + point] == c);
  }
}

TEST_CASE("power rule matches expansion") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng() % 6;
    PermutationAction act(random_perm(rng, n), random_perm(rng, n));
    const Word base = random_word(rng, 1 + rng() % 5);
    const long e = static_cast<long>(rng() % 40) - 20;
    PowerWord pw;
    pw.append(base, e);
    CHECK(edge_vector(act, 0, pw) == edge_vector(act, 0, power(base, e)));
    // Huge multiples of the cycle length scale linearly.
    const Integer k("1000000000000000000000000");
    std::size_t cycle = 1;
    while (act.apply(0, power(base, static_cast<long>(cycle))) != 0) ++cycle;
    PowerWord one, many;
    one.append(base, static_cast<long>(cycle));
    many.append(base, k * static_cast<unsigned long>(cycle));
    CHECK(edge_vector(act, 0, many) == scaled(edge_vector(act, 0, one), k));
  }
}

TEST_CASE("magnus image requires the kernel") {
  PermutationAction c2({1, 0}, {0, 1});
  auto [dx, dy] = magnus_image(parse_word("xx"), c2);
  CHECK(dx == GroupRingElement{{0, 1}, {1, 1}});
  CHECK(dy.empty());
  CHECK_THROWS_AS(magnus_image(parse_word("x"), c2), std::invalid_argument);
}
