#include <gtest/gtest.h>

#include <random>

#include "lfw/verify.hpp"

using namespace lfw;

namespace {

FieldElement random_point(const FieldConfigPtr& f, std::mt19937& rng, int lo, int hi) {
  std::uniform_int_distribution<int> code(0, static_cast<int>(f->q()) - 1);
  std::vector<Digit> ds;
  for (int e = lo; e <= hi; ++e) ds.emplace_back(e, static_cast<FqCode>(code(rng)));
  return FieldElement(f, ds);
}

ClopenSet random_set(const FieldConfigPtr& f, std::mt19937& rng, bool avoid_zero) {
  std::uniform_int_distribution<int> count(1, 4), scale(-1, 3);
  std::vector<Ball> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int k = scale(rng);
    Ball b(random_point(f, rng, -2, k - 1), k);
    if (avoid_zero && b.contains_zero()) continue;
    out.push_back(b);
  }
  return ClopenSet(f, out);
}

// Every point of O truncated to the given depth.
std::vector<FieldElement> grid(const FieldConfigPtr& f, int lo, int depth) {
  std::vector<FieldElement> pts{FieldElement(f)};
  for (int e = lo; e < depth; ++e) {
    std::vector<FieldElement> next;
    for (const auto& x : pts)
      for (FqCode d = 0; d < f->q(); ++d) next.push_back(x + FieldElement::monomial(f, e, d));
    pts = std::move(next);
  }
  return pts;
}

int dilation_count(const ClopenSet& w, const FieldElement& xi) {
  int n = 0;
  for (int j = -8; j <= 8; ++j) n += w.contains(xi.shifted(j)) ? 1 : 0;
  return n;
}

int translation_count(const ClopenSet& w, const FieldElement& xi, unsigned q) {
  int n = 0;
  for (std::uint64_t k = 0; k < q * q * q; ++k) n += w.contains(xi - u_of_index(w.field(), k)) ? 1 : 0;
  return n;
}

CycloScalar direct_correlation(const StepFunction& psi, const FieldElement& xi, std::uint64_t s) {
  const auto us = u_of_index(psi.field(), s);
  CycloScalar t = psi.zero();
  for (int j = 0; j <= 12; ++j) t += psi.eval(xi.shifted(-j)) * psi.eval((xi + us).shifted(-j)).conj();
  return t;
}

ClopenSet annulus(const FieldConfigPtr& f, int m) { return ClopenSet::shell(f, m); }

std::vector<ClopenSet> shannon(const FieldConfigPtr& f) {
  std::vector<ClopenSet> out;
  for (std::uint64_t i = 1; i < f->q(); ++i) out.push_back(ClopenSet::of_ball(Ball(u_of_index(f, i), 0)));
  return out;
}

CycloScalar rat(const FieldConfigPtr& f, const Rational& r) { return CycloScalar::from_rational(f->p(), f->c(), r); }

}  // namespace

TEST(Verify, ShannonIsMultiwaveletSet) {
  for (auto [p, c] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    auto f = FieldConfig::make(p, c);
    const auto v = verify_multiwavelet_set(shannon(f));
    EXPECT_TRUE(v.passed()) << to_text(v);
    EXPECT_EQ(v.facts().at("order"), std::to_string(f->q() - 1));
  }
}

TEST(Verify, AnnulusIsParsevalButNotOrthonormal) {
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    for (int m = 1; m <= 3; ++m) {
      const auto w = annulus(f, m);
      EXPECT_TRUE(verify_pf_multiwavelet_set({w}).passed());
      const auto v = verify_multiwavelet_set({w});
      ASSERT_FALSE(v.passed());
      const auto* c = v.find("W1 translation tiling");
      ASSERT_NE(c, nullptr);
      EXPECT_FALSE(c->passed);
      ASSERT_TRUE(c->witness.ball);
      EXPECT_EQ(*c->witness.ball, Ball(FieldElement(f), m + 1));
      EXPECT_EQ(*c->witness.measure, 1 - Rational(f->q() - 1, 1) * rational_power(f->q(), -m - 1));
    }
  }
}

TEST(Verify, ZeroBallFailsDilationWithInnerWitness) {
  auto f = FieldConfig::make(3, 1);
  const auto v = check_dilation_tiling(ClopenSet::integers(f));
  ASSERT_FALSE(v.passed());
  EXPECT_EQ(*v.checks().front().witness.ball, Ball(FieldElement(f), 1));
  const auto e = check_dilation_tiling(ClopenSet(f));
  ASSERT_FALSE(e.passed());
  EXPECT_EQ(e.checks().front().witness.kind, WitnessKind::Measure);
}

TEST(Verify, OverlappingComponentsAreRejected) {
  auto f = FieldConfig::make(2, 1);
  const auto a = ClopenSet::units(f);
  const auto v = verify_pf_multiwavelet_set({a, a});
  ASSERT_FALSE(v.passed());
  EXPECT_EQ(v.checks().front().name, "components disjoint");
}

TEST(Verify, DilationTilingMatchesPointOracle) {
  std::mt19937 rng(11);
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    const auto pts = grid(f, 0, 6);
    for (int trial = 0; trial < 150; ++trial) {
      const auto w = random_set(f, rng, true);
      const auto v = check_dilation_tiling(w);
      bool oracle = true;
      for (const auto& x : pts) {
        if (x.valuation() != 0) continue;
        if (dilation_count(w, x) != 1) oracle = false;
      }
      EXPECT_EQ(v.passed(), oracle) << to_string(w);
      if (!v.passed() && !w.empty()) {
        const auto& wit = v.checks().front().witness;
        ASSERT_TRUE(wit.ball);
        const int n = dilation_count(w, wit.ball->center());
        EXPECT_NE(n, 1);
      }
    }
  }
}

TEST(Verify, TranslationMatchesPointOracle) {
  std::mt19937 rng(12);
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    const auto pts = grid(f, 0, 4);
    for (int trial = 0; trial < 150; ++trial) {
      const auto w = random_set(f, rng, false);
      int lo = 99, hi = 0;
      for (const auto& x : pts) {
        const int n = translation_count(w, x, f->q());
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
      EXPECT_EQ(check_translation(w, TranslationMode::Packing).passed(), hi <= 1) << to_string(w);
      EXPECT_EQ(check_translation(w, TranslationMode::Tiling).passed(), lo == 1 && hi == 1) << to_string(w);
    }
  }
}

TEST(Verify, IndicatorFrameAgreesWithSetCriterion) {
  std::mt19937 rng(13);
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    for (int trial = 0; trial < 150; ++trial) {
      const auto w = random_set(f, rng, true);
      const auto by_sets = verify_pf_multiwavelet_set({w}).passed();
      const auto by_frame = verify_frame_pointwise({StepFunction::indicator(w)}).passed();
      EXPECT_EQ(by_sets, by_frame) << to_string(w);
    }
    EXPECT_TRUE(verify_frame_pointwise({StepFunction::indicator(annulus(f, 2))}).passed());
    std::vector<StepFunction> family;
    for (const auto& w : shannon(f)) family.push_back(StepFunction::indicator(w));
    EXPECT_TRUE(verify_frame_pointwise(family).passed());
  }
}

TEST(Verify, TranslationCorrelationWitnessIsGenuine) {
  std::mt19937 rng(14);
  auto f = FieldConfig::make(3, 1);
  const std::vector<Rational> values{1, -1, Rational(1, 2), 2};
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  int failures = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto w = random_set(f, rng, true);
    std::vector<Cell> cells;
    for (const auto& b : w.balls()) cells.emplace_back(b, rat(f, values[pick(rng)]));
    const StepFunction psi(f, cells);
    const auto v = verify_frame_pointwise({psi});
    const auto* c = v.find("translation correlations vanish");
    ASSERT_NE(c, nullptr);
    if (c->passed) {
      for (std::uint64_t s = 1; s < 27; ++s) {
        if (s % 3 == 0) continue;
        for (int i = 0; i < 10; ++i) {
          EXPECT_TRUE(direct_correlation(psi, random_point(f, rng, -3, 5), s).is_zero());
        }
      }
    } else {
      ++failures;
      const auto s = std::stoull(c->detail.substr(4));
      EXPECT_FALSE(direct_correlation(psi, *c->witness.point, s).is_zero()) << c->detail;
    }
  }
  EXPECT_GT(failures, 0);
}

TEST(Verify, SuperwaveletExamples) {
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    const Rational q = f->q();
    for (int n = 1; n <= 3; ++n) {
      std::vector<ClopenSet> comps;
      Rational expected = 0;
      for (int i = 1; i <= n; ++i) {
        comps.push_back(annulus(f, i));
        expected += rational_power(f->q(), -i) * (1 - 1 / q);
      }
      const auto par = verify_superwavelet(comps, SuperMode::Parseval);
      EXPECT_TRUE(par.passed()) << to_text(par);
      EXPECT_EQ(par.facts().at("joint_fold_measure"), to_fraction_string(expected));
      const auto ortho = verify_superwavelet(comps, SuperMode::Orthonormal);
      ASSERT_FALSE(ortho.passed());
      const auto& last = ortho.checks().back();
      EXPECT_EQ(last.witness.kind, WitnessKind::Measure);
      EXPECT_EQ(*last.witness.measure, expected);
    }
    // O* and pO* together with pO: folds tile O exactly.
    const auto tiles = joint_fold_check(
        f, {Ball(FieldElement(f), 1), Ball(FieldElement::monomial(f, 0), 1)}, SuperMode::Orthonormal, "x");
    if (p == 2) EXPECT_TRUE(tiles.passed);
  }
}

TEST(Verify, TranslatesExamples) {
  for (unsigned p : {2u, 3u, 5u}) {
    auto f = FieldConfig::make(p, 1);
    const auto ind_pO = StepFunction::indicator(ClopenSet::ideal(f, 1));
    EXPECT_TRUE(verify_translates(ind_pO, TranslatesMode::Parseval).passed());
    EXPECT_FALSE(verify_translates(ind_pO, TranslatesMode::Orthonormal).passed());
    const auto ind_O = StepFunction::indicator(ClopenSet::integers(f));
    EXPECT_TRUE(verify_translates(ind_O, TranslatesMode::Orthonormal).passed());
    EXPECT_EQ(verify_translates(ind_O, TranslatesMode::Parseval).facts().at("indicator"), "true");
    const auto doubled = ind_O * rat(f, 2);
    EXPECT_FALSE(verify_translates(doubled, TranslatesMode::Parseval).passed());
    EXPECT_EQ(verify_translates(doubled, TranslatesMode::Parseval).facts().at("indicator"), "false");
  }
}

TEST(Verify, DecomposabilityAndExtendability) {
  for (unsigned p : {2u, 3u, 5u}) {
    auto f = FieldConfig::make(p, 1);
    const auto units = StepFunction::indicator(ClopenSet::units(f));
    const auto d = decomposability_bound(units);
    ASSERT_FALSE(d.infinite);
    EXPECT_EQ(d.value, rat(f, Rational(p - 1, p)));
    EXPECT_EQ(d.max_m, 1);
    EXPECT_TRUE(extendability_bound(units).infinite);
    const auto zero = decomposability_bound(StepFunction(f));
    EXPECT_TRUE(zero.value.is_zero());
    EXPECT_EQ(zero.max_m, 0);
    const auto full = extendability_bound(StepFunction::indicator(ClopenSet::integers(f)));
    EXPECT_TRUE(full.value.is_zero());
    EXPECT_EQ(full.max_m, 0);
    EXPECT_THROW(extendability_bound(units * rat(f, 2)), PreconditionError);
    EXPECT_TRUE(decomposability_bound(StepFunction::indicator(ClopenSet::integers(f))).infinite);
  }
}

TEST(Verify, InverseNormIntegralMatchesSetVersion) {
  std::mt19937 rng(15);
  auto f = FieldConfig::make(3, 1);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = cs_intersect(random_set(f, rng, false), ClopenSet::integers(f));
    const auto a = inv_norm_integral(StepFunction::indicator(w));
    const auto b = cs_inv_norm_integral(w);
    EXPECT_EQ(a.infinite, b.infinite);
    if (!a.infinite) EXPECT_EQ(a.value, rat(f, b.value));
  }
}

TEST(Verify, CorrelationOfOrthonormalWavelet) {
  auto f = FieldConfig::make(2, 1);
  const std::vector<StepFunction> eta{StepFunction::indicator(ClopenSet::shell(f, -1))};
  EXPECT_EQ(correlation(eta, 0), StepFunction::indicator(ClopenSet::integers(f)));
  EXPECT_TRUE(correlation(eta, 1).is_zero());
  EXPECT_TRUE(verify_super_general(eta).passed());
  const std::vector<StepFunction> pair{StepFunction::indicator(ClopenSet::shell(f, 1)),
                                       StepFunction::indicator(ClopenSet::shell(f, 2))};
  EXPECT_FALSE(verify_super_general(pair).passed());
}

TEST(Verify, CorrelationMatchesPointwiseSum) {
  std::mt19937 rng(16);
  auto f = FieldConfig::make(3, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto w = random_set(f, rng, true);
    std::vector<Cell> cells;
    for (const auto& b : w.balls()) cells.emplace_back(b, CycloScalar::zeta_power(3, 1, trial));
    const std::vector<StepFunction> eta{StepFunction(f, cells)};
    for (int n = 0; n <= 3; ++n) {
      const auto corr = correlation(eta, n);
      for (int i = 0; i < 10; ++i) {
        const auto xi = random_point(f, rng, 0, 6);
        CycloScalar direct = eta[0].zero();
        for (std::uint64_t k = 0; k < 81; ++k) {
          const auto x = xi + u_of_index(f, k);
          direct += eta[0].eval(x.shifted(-n)) * eta[0].eval(x).conj();
        }
        EXPECT_EQ(corr.eval(xi), direct);
      }
    }
  }
}

TEST(Verify, EquivalenceOfSuperwavelets) {
  auto f = FieldConfig::make(2, 1);
  const std::vector<StepFunction> a{StepFunction::indicator(ClopenSet::shell(f, -1))};
  const std::vector<StepFunction> b{StepFunction::indicator(ClopenSet::shell(f, -1)) * CycloScalar::zeta_power(2, 1, 1)};
  EXPECT_TRUE(equivalent_superwavelets(a, b).passed());
  const std::vector<StepFunction> c{StepFunction::indicator(ClopenSet::shell(f, 1))};
  const auto v = equivalent_superwavelets(a, c);
  ASSERT_FALSE(v.passed());
  EXPECT_EQ(v.checks().front().witness.kind, WitnessKind::Point);
}

TEST(Verify, MraScalingChecks) {
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    const auto shannon_set = ClopenSet::shell(f, -1);
    const auto v = mra_scaling_check(shannon_set, ClopenSet::integers(f));
    EXPECT_TRUE(v.passed()) << to_text(v);
    EXPECT_EQ(v.facts().at("mra"), "tiling (MRA)");
    for (int m = 1; m <= 3; ++m) {
      const auto pm = mra_scaling_check(annulus(f, m), ClopenSet::ideal(f, m + 1));
      EXPECT_TRUE(pm.passed()) << to_text(pm);
      EXPECT_EQ(pm.facts().at("mra"), "packing (Parseval frame MRA)");
    }
    EXPECT_FALSE(mra_scaling_check(shannon_set, ClopenSet::ideal(f, 1)).passed());
  }
}
