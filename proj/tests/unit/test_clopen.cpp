#include <gtest/gtest.h>

#include <random>

#include "lfw/clopen.hpp"

using namespace lfw;

namespace {

FieldElement random_point(const FieldConfigPtr& f, std::mt19937& rng, int lo, int hi) {
  std::uniform_int_distribution<int> code(0, static_cast<int>(f->q()) - 1);
  std::vector<Digit> ds;
  for (int e = lo; e <= hi; ++e) ds.emplace_back(e, static_cast<FqCode>(code(rng)));
  return FieldElement(f, ds);
}

// Random union of a few balls inside p^-2 O, scales in [-2, 3].
std::vector<Ball> random_balls(const FieldConfigPtr& f, std::mt19937& rng) {
  std::uniform_int_distribution<int> count(0, 4), scale(-2, 3);
  std::vector<Ball> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int k = scale(rng);
    out.emplace_back(random_point(f, rng, -2, k), k);
  }
  return out;
}

bool in_any(const std::vector<Ball>& balls, const FieldElement& x) {
  for (const auto& b : balls)
    if (b.contains(x)) return true;
  return false;
}

Ball ball(const FieldConfigPtr& f, const char* center, int k) { return Ball(parse_element(f, center), k); }

}  // namespace

TEST(Clopen, NormalizeExamples) {
  auto f2 = FieldConfig::make(2, 1);
  EXPECT_TRUE(cs_normalize(f2, {}).empty());
  EXPECT_EQ(cs_normalize(f2, {ball(f2, "0", 1), ball(f2, "1", 1)}), ClopenSet::integers(f2));
  EXPECT_EQ(cs_normalize(f2, {ball(f2, "0", 0), ball(f2, "0", 2)}), ClopenSet::integers(f2));
}

TEST(Clopen, BallCenterIsTruncated) {
  auto f3 = FieldConfig::make(3, 1);
  const Ball b(parse_element(f3, "p^-1 + 2*p^3"), 2);
  EXPECT_EQ(b.center(), parse_element(f3, "p^-1"));
  EXPECT_EQ(b.measure(), Rational(1, 9));
}

TEST(Clopen, SetOperationExamples) {
  for (unsigned p : {2u, 3u, 5u}) {
    auto f = FieldConfig::make(p, 1);
    const auto O = ClopenSet::integers(f);
    EXPECT_TRUE(cs_subtract(O, O).empty());
    const auto units = cs_subtract(O, ClopenSet::ideal(f, 1));
    EXPECT_EQ(units, ClopenSet::units(f));
    EXPECT_EQ(units.balls().size(), p - 1);
  }
  auto f3 = FieldConfig::make(3, 1);
  const auto w1 = cs_translate(ClopenSet::integers(f3), u_of_index(f3, 1));
  const auto w2 = cs_translate(ClopenSet::integers(f3), u_of_index(f3, 2));
  EXPECT_EQ(cs_intersect(w1, w2).measure(), 0);
}

TEST(Clopen, ScaleAndTranslate) {
  auto f3 = FieldConfig::make(3, 1);
  const auto units = ClopenSet::units(f3);
  for (int m = -3; m <= 3; ++m) {
    const auto s = cs_scale(units, m);
    EXPECT_EQ(s, ClopenSet::shell(f3, m));
    EXPECT_EQ(s.measure(), rational_power(3, -m) * Rational(2, 3));
    EXPECT_EQ(cs_scale(s, -m), units);
  }
  EXPECT_EQ(cs_scale(units, 0), units);
  EXPECT_EQ(cs_translate(units, FieldElement(f3)), units);
  const auto w1 = cs_translate(ClopenSet::integers(f3), u_of_index(f3, 1));
  EXPECT_EQ(w1.measure(), 1);
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto x = random_point(f3, rng, 0, 5) + u_of_index(f3, 1);
    ASSERT_TRUE(w1.contains(x));
    ASSERT_EQ(x.log_abs(), 1);
  }
}

TEST(Clopen, MeasureExamples) {
  auto f = FieldConfig::make(5, 1);
  EXPECT_EQ(ClopenSet(f).measure(), 0);
  EXPECT_EQ(ClopenSet::integers(f).measure(), 1);
}

TEST(Clopen, FoldExamples) {
  auto f2 = FieldConfig::make(2, 1);
  const auto O = ClopenSet::integers(f2);
  const auto w = cs_translate(O, u_of_index(f2, 1));
  const auto fold = cs_fold(w);
  ASSERT_EQ(fold.fragments.size(), 1u);
  EXPECT_EQ(fold.fragments[0].ball, Ball(FieldElement(f2), 0));
  EXPECT_EQ(fold.fragments[0].source, 1u);
  EXPECT_TRUE(fold.overlap.empty());

  for (int m = 1; m <= 3; ++m) {
    const auto s = ClopenSet::shell(f2, m);
    const auto fs = cs_fold(s);
    EXPECT_EQ(fs.image, s);
    EXPECT_TRUE(fs.overlap.empty());
    for (const auto& fr : fs.fragments) EXPECT_EQ(fr.source, 0u);
  }

  const auto two = cs_fold(cs_union(O, w));
  EXPECT_EQ(two.image, O);
  EXPECT_EQ(two.overlap, O);
}

TEST(Clopen, InverseNormIntegral) {
  for (unsigned p : {2u, 3u, 5u}) {
    auto f = FieldConfig::make(p, 1);
    EXPECT_EQ(cs_inv_norm_integral(ClopenSet(f)), (ExtendedRational{false, 0}));
    EXPECT_EQ(cs_inv_norm_integral(ClopenSet::units(f)), (ExtendedRational{false, Rational(p - 1, p)}));
    for (int k = 0; k < 4; ++k) EXPECT_TRUE(cs_inv_norm_integral(ClopenSet::ideal(f, k)).infinite);
    // Partial shell sums of p^k O grow by (1 - 1/q) per shell.
    for (int n = 1; n < 6; ++n) {
      Rational partial = 0;
      for (int s = 0; s < n; ++s) partial += cs_inv_norm_integral(ClopenSet::shell(f, s)).value;
      EXPECT_EQ(partial, Rational(n) * Rational(p - 1, p));
    }
  }
}

TEST(Clopen, Shells) {
  auto f3 = FieldConfig::make(3, 1);
  const auto units = cs_shells(ClopenSet::units(f3));
  ASSERT_EQ(units.shells.size(), 1u);
  EXPECT_EQ(units.shells[0].first, 0);
  EXPECT_FALSE(units.zero_ball.has_value());

  const auto o = cs_shells(ClopenSet::integers(f3), 3);
  ASSERT_EQ(o.shells.size(), 3u);
  for (int s = 0; s < 3; ++s) {
    EXPECT_EQ(o.shells[s].first, s);
    EXPECT_EQ(o.shells[s].second, ClopenSet::shell(f3, s));
  }
  ASSERT_TRUE(o.zero_ball.has_value());
  EXPECT_EQ(*o.zero_ball, Ball(FieldElement(f3), 3));

  std::vector<Ball> shannon;
  for (std::uint64_t i = 1; i < 3; ++i) shannon.emplace_back(u_of_index(f3, i), 0);
  const auto sh = cs_shells(ClopenSet(f3, shannon));
  ASSERT_EQ(sh.shells.size(), 1u);
  EXPECT_EQ(sh.shells[0].first, -1);
}

TEST(Clopen, PropertySuite) {
  std::mt19937 rng(2024);
  int cases = 0;
  for (auto [p, c] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto f = FieldConfig::make(p, c);
    for (int t = 0; t < 3334; ++t, ++cases) {
      const auto ra = random_balls(f, rng), rb = random_balls(f, rng), rc = random_balls(f, rng);
      const ClopenSet a(f, ra), b(f, rb), cset(f, rc);
      ASSERT_EQ(ClopenSet(f, a.balls()), a);  // idempotent
      const auto u = cs_union(a, b), i = cs_intersect(a, b), d = cs_subtract(a, b);
      ASSERT_EQ(u.measure() + i.measure(), a.measure() + b.measure());
      ASSERT_EQ(cs_subtract(cset, u), cs_intersect(cs_subtract(cset, a), cs_subtract(cset, b)));
      ASSERT_EQ(cs_subtract(cset, i), cs_union(cs_subtract(cset, a), cs_subtract(cset, b)));
      ASSERT_EQ(cs_intersect(cset, u), cs_union(cs_intersect(cset, a), cs_intersect(cset, b)));
      ASSERT_EQ(cs_subset(i, a), true);
      ASSERT_EQ(cs_subset(a, u), true);
      const auto t0 = random_point(f, rng, -2, 2);
      ASSERT_EQ(cs_translate(a, t0).measure(), a.measure());
      ASSERT_EQ(cs_scale(a, 2).measure(), a.measure() * rational_power(f->q(), -2));
      for (int k = 0; k < 3; ++k) {
        const auto x = random_point(f, rng, -3, 4);
        const bool ia = in_any(ra, x), ib = in_any(rb, x);
        ASSERT_EQ(a.contains(x), ia);
        ASSERT_EQ(u.contains(x), ia || ib);
        ASSERT_EQ(i.contains(x), ia && ib);
        ASSERT_EQ(d.contains(x), ia && !ib);
        ASSERT_EQ(cs_translate(a, t0).contains(x + t0), ia);
      }
      // Canonical form: disjoint balls, no complete sibling groups.
      for (std::size_t x = 0; x < a.balls().size(); ++x)
        for (std::size_t y = x + 1; y < a.balls().size(); ++y) ASSERT_FALSE(a.balls()[x].intersects(a.balls()[y]));
      const auto fold = cs_fold(a);
      if (fold.overlap.empty()) {
        Rational total = 0;
        for (const auto& fr : fold.fragments) total += fr.ball.measure();
        ASSERT_EQ(total, a.measure());
      }
      const auto inside = cs_intersect(a, ClopenSet::integers(f));
      const auto inv = cs_inv_norm_integral(inside);
      if (!inv.infinite) ASSERT_GE(inv.value, inside.measure());
    }
  }
  EXPECT_GE(cases, 10000);
}
