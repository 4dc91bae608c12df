#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lfw/lfield.hpp"

using namespace lfw;

namespace {

FieldElement mono(const FieldConfigPtr& f, int e, FqCode c = 1) { return FieldElement::monomial(f, e, c); }

FieldElement random_element(const FieldConfigPtr& f, std::mt19937& rng, int lo, int hi) {
  std::uniform_int_distribution<int> code(0, static_cast<int>(f->q()) - 1);
  std::vector<Digit> ds;
  for (int e = lo; e <= hi; ++e) ds.emplace_back(e, static_cast<FqCode>(code(rng)));
  return FieldElement(f, ds);
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST(Lfield, AdditionExamples) {
  auto f2 = FieldConfig::make(2, 1);
  auto f3 = FieldConfig::make(3, 1);
  const auto x = parse_element(f3, "2*p + p^2");
  EXPECT_EQ(x + FieldElement(f3), x);
  EXPECT_TRUE((mono(f2, -1) + mono(f2, -1)).is_zero());
  EXPECT_TRUE((parse_element(f3, "2*p + p^2") + parse_element(f3, "p + 2*p^2")).is_zero());
}

TEST(Lfield, MultiplicationExamples) {
  auto f2 = FieldConfig::make(2, 1);
  const auto one_plus_p = parse_element(f2, "1 + p");
  EXPECT_EQ(one_plus_p * one_plus_p, parse_element(f2, "1 + p^2"));
  EXPECT_EQ(one_plus_p * mono(f2, 0), one_plus_p);
  for (int a = -8; a <= 8; ++a)
    for (int b = -8; b <= 8; ++b) EXPECT_EQ(mono(f2, a) * mono(f2, b), mono(f2, a + b));
}

TEST(Lfield, ValuationOfZeroIsInfinite) {
  auto f = FieldConfig::make(3, 1);
  EXPECT_EQ(FieldElement(f).valuation(), kInfiniteValuation);
  EXPECT_EQ(mono(f, -4).valuation(), -4);
  EXPECT_EQ(mono(f, -4).log_abs(), 4);
}

TEST(Lfield, UOfIndexExamples) {
  auto f2 = FieldConfig::make(2, 1);
  EXPECT_TRUE(u_of_index(f2, 0).is_zero());
  EXPECT_EQ(u_of_index(f2, 2), mono(f2, -2));
  EXPECT_EQ(index_of_u(mono(f2, -1)), 1u);
  EXPECT_EQ(index_of_u(FieldElement(f2)), 0u);
  EXPECT_THROW(index_of_u(mono(f2, 0)), std::invalid_argument);
}

TEST(Lfield, AbsoluteValueOfU) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    auto f = FieldConfig::make(p, c);
    const std::uint64_t q = f->q();
    for (std::uint64_t n = 1; n < ipow(q, 4); ++n) {
      int k = 0;
      while (ipow(q, k) <= n) ++k;  // q^{k-1} <= n < q^k
      ASSERT_EQ(u_of_index(f, n).log_abs(), k) << n;
    }
  }
}

TEST(Lfield, IndexRoundTrip) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {7, 1}}) {
    auto f = FieldConfig::make(p, c);
    for (std::uint64_t n = 0; n < 10000; ++n) ASSERT_EQ(index_of_u(u_of_index(f, n)), n);
  }
}

TEST(Lfield, FractionalPart) {
  auto f2 = FieldConfig::make(2, 1);
  auto f3 = FieldConfig::make(3, 1);
  const auto x = parse_element(f3, "1 + 2*p^3");
  EXPECT_EQ(fractional_part(x).index, 0u);
  EXPECT_EQ(fractional_part(x).remainder, x);
  const auto s = fractional_part(parse_element(f2, "p^-1 + p"));
  EXPECT_EQ(s.index, 1u);
  EXPECT_EQ(s.remainder, mono(f2, 1));
  const auto t = fractional_part(u_of_index(f3, 5) + parse_element(f3, "1 + p"));
  EXPECT_EQ(t.index, 5u);
  EXPECT_EQ(t.remainder, parse_element(f3, "1 + p"));
}

TEST(Lfield, NegationIsAnInvolutionOnIndices) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    auto f = FieldConfig::make(p, c);
    for (std::uint64_t n = 0; n < 10000; ++n) {
      const auto m = index_of_u(-u_of_index(f, n));
      ASSERT_EQ(index_of_u(-u_of_index(f, m)), n);
      // Same digit length class.
      ASSERT_EQ(u_of_index(f, m).valuation(), u_of_index(f, n).valuation());
    }
  }
}

TEST(Lfield, TranslationByUIsABijectionOnLengthClasses) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto f = FieldConfig::make(p, c);
    const std::uint64_t q = f->q();
    for (std::uint64_t l = 0; l < 64; ++l) {
      // For any K with q^K > l, n -> index(u(l) + u(n)) permutes [0, q^K).
      unsigned K = 0;
      while (ipow(q, K) <= l) ++K;
      K = std::max(K, 1u) + 1;
      std::set<std::uint64_t> seen;
      for (std::uint64_t n = 0; n < ipow(q, K); ++n) {
        const auto m = index_of_u(u_of_index(f, l) + u_of_index(f, n));
        ASSERT_LT(m, ipow(q, K));
        seen.insert(m);
      }
      ASSERT_EQ(seen.size(), ipow(q, K));
    }
  }
}

TEST(Lfield, ScalingLaw) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto f = FieldConfig::make(p, c);
    const std::uint64_t q = f->q();
    for (std::uint64_t r = 0; r < 32; ++r)
      for (unsigned k = 0; k < 4; ++k)
        for (std::uint64_t s = 0; s < ipow(q, k); ++s)
          ASSERT_EQ(u_of_index(f, r * ipow(q, k) + s), u_of_index(f, r).shifted(-static_cast<int>(k)) + u_of_index(f, s));
  }
}

TEST(Lfield, UltrametricInequality) {
  auto f = FieldConfig::make(3, 1);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> lo(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const int a = lo(rng), b = lo(rng);
    const auto x = random_element(f, rng, a, a + 3);
    const auto y = random_element(f, rng, b, b + 3);
    const auto s = x + y;
    if (x.is_zero() || y.is_zero()) continue;
    if (s.is_zero()) continue;
    ASSERT_LE(s.log_abs(), std::max(x.log_abs(), y.log_abs()));
    if (x.log_abs() != y.log_abs()) ASSERT_EQ(s.log_abs(), std::max(x.log_abs(), y.log_abs()));
  }
}

TEST(Lfield, CharacterExamples) {
  auto f2 = FieldConfig::make(2, 1);
  const auto one = mono(f2, 0);
  EXPECT_EQ(character(one, FieldElement(f2)), CycloScalar::from_rational(2, 1, 1));
  EXPECT_EQ(character(one, mono(f2, -1)), CycloScalar::from_rational(2, 1, -1));
}

TEST(Lfield, CharacterTrivialOnProductsOfCosetRepresentatives) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    auto f = FieldConfig::make(p, c);
    for (std::uint64_t k = 0; k < 256; ++k)
      for (std::uint64_t l = 0; l < 256; ++l)
        ASSERT_EQ(character_exponent(u_of_index(f, k), u_of_index(f, l)), 0u);
  }
}

TEST(Lfield, CharacterTrivialOnIntegersNontrivialOnInverseIdeal) {
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    auto f = FieldConfig::make(p, c);
    std::mt19937 rng(11);
    const auto one = mono(f, 0);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(character_exponent(one, random_element(f, rng, 0, 6)), 0u);
    bool nontrivial = false;
    for (FqCode d = 1; d < f->q(); ++d) nontrivial |= character_exponent(one, mono(f, -1, d)) != 0;
    EXPECT_TRUE(nontrivial);
  }
}

TEST(Lfield, CharacterIsAdditive) {
  auto f = FieldConfig::make(3, 1);
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto y = random_element(f, rng, -3, 2);
    const auto a = random_element(f, rng, -3, 2);
    const auto b = random_element(f, rng, -3, 2);
    EXPECT_EQ(character(y, a + b), character(y, a) * character(y, b));
  }
}

TEST(Lfield, TextRoundTrip) {
  auto f3 = FieldConfig::make(3, 1);
  EXPECT_EQ(to_string(parse_element(f3, "p^-1 + 2*p^3")), "p^-1 + 2*p^3");
  EXPECT_EQ(parse_element(f3, "u(5)"), u_of_index(f3, 5));
  EXPECT_EQ(to_string(FieldElement(f3)), "0");
  auto f4 = FieldConfig::make(2, 2);
  EXPECT_EQ(to_string(parse_element(f4, "[0,1]*p^-2 + [1,1]")), "[0,1]*p^-2 + [1,1]");
  EXPECT_THROW(parse_element(f4, "[1]"), std::invalid_argument);
  EXPECT_THROW(parse_element(f3, "p^"), std::invalid_argument);
  std::mt19937 rng(5);
  for (const auto& f : {f3, f4, FieldConfig::make(5, 1)}) {
    for (int i = 0; i < 500; ++i) {
      const auto x = random_element(f, rng, -4, 4);
      ASSERT_EQ(parse_element(f, to_string(x)), x);
    }
  }
}
