#include <gtest/gtest.h>

#include <random>

#include "lfw/stepfn.hpp"

using namespace lfw;

namespace {

CycloScalar rat(const FieldConfigPtr& f, Rational r) { return CycloScalar::from_rational(f->p(), f->c(), r); }

FieldElement random_point(const FieldConfigPtr& f, std::mt19937& rng, int lo, int hi) {
  std::uniform_int_distribution<int> code(0, static_cast<int>(f->q()) - 1);
  std::vector<Digit> ds;
  for (int e = lo; e <= hi; ++e) ds.emplace_back(e, static_cast<FqCode>(code(rng)));
  return FieldElement(f, ds);
}

}  // namespace

TEST(Stepfn, EvalExamples) {
  auto f = FieldConfig::make(3, 1);
  const auto ind = StepFunction::indicator(ClopenSet::units(f));
  EXPECT_EQ(ind.eval(FieldElement::monomial(f, 0)), rat(f, 1));
  EXPECT_TRUE(ind.eval(FieldElement::monomial(f, 1)).is_zero());
  EXPECT_TRUE(ind.eval(FieldElement::monomial(f, -1)).is_zero());
}

TEST(Stepfn, CommonRefinementExamples) {
  auto f2 = FieldConfig::make(2, 1);
  const auto O = ClopenSet::integers(f2);
  EXPECT_EQ(sf_common_refinement({StepFunction::indicator(O)}, {}), O.balls());
  const auto w = cs_translate(O, u_of_index(f2, 1));
  EXPECT_EQ(sf_common_refinement({StepFunction::indicator(O), StepFunction::indicator(w)}, {}).size(), 2u);
  auto f3 = FieldConfig::make(3, 1);
  const auto mesh = sf_common_refinement(
      {StepFunction::indicator(ClopenSet::integers(f3)), StepFunction::indicator(ClopenSet::ideal(f3, 1))}, {});
  EXPECT_EQ(ClopenSet(f3, {mesh[0]}), ClopenSet::ideal(f3, 1));
  std::vector<Ball> rest(mesh.begin() + 1, mesh.end());
  EXPECT_EQ(ClopenSet(f3, rest), ClopenSet::units(f3));
}

TEST(Stepfn, RejectsOverlappingCells) {
  auto f = FieldConfig::make(2, 1);
  EXPECT_THROW(StepFunction(f, {{Ball(FieldElement(f), 0), rat(f, 1)}, {Ball(FieldElement(f), 1), rat(f, 1)}}),
               std::invalid_argument);
}

TEST(Stepfn, SiblingMerge) {
  auto f = FieldConfig::make(2, 1);
  const StepFunction g(f, {{Ball(FieldElement(f), 1), rat(f, Rational(1, 2))},
                           {Ball(FieldElement::monomial(f, 0), 1), rat(f, Rational(1, 2))}});
  ASSERT_EQ(g.cells().size(), 1u);
  EXPECT_EQ(g.cells()[0].first, Ball(FieldElement(f), 0));
}

TEST(Stepfn, WeightExamples) {
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    const auto w1 = sf_weight(StepFunction::indicator(ClopenSet::ideal(f, 1)));
    EXPECT_EQ(w1, StepFunction::indicator(ClopenSet::ideal(f, 1)));
    const auto w0 = sf_weight(StepFunction::indicator(ClopenSet::integers(f)));
    EXPECT_EQ(w0, StepFunction::indicator(ClopenSet::integers(f)));
  }
  auto f2 = FieldConfig::make(2, 1);
  const auto O = ClopenSet::integers(f2);
  const auto two = sf_weight(StepFunction::indicator(cs_union(O, cs_translate(O, u_of_index(f2, 1)))));
  EXPECT_EQ(two, StepFunction::constant_on(O, rat(f2, 2)));
  // Big ball p^-1 O contains q translates of O.
  const auto big = sf_weight(StepFunction::indicator(ClopenSet::ideal(f2, -1)));
  EXPECT_EQ(big, StepFunction::constant_on(O, rat(f2, 2)));
}

TEST(Stepfn, WeightMatchesPointwiseSum) {
  std::mt19937 rng(17);
  auto f = FieldConfig::make(3, 1);
  std::uniform_int_distribution<int> scale(-1, 3), val(-3, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<Ball> balls;
    for (int i = 0; i < 3; ++i) {
      const int k = scale(rng);
      balls.emplace_back(random_point(f, rng, -2, k), k);
    }
    const ClopenSet s(f, balls);
    std::vector<Cell> cells;
    for (const auto& b : s.balls())
      cells.emplace_back(b, rat(f, val(rng)) + CycloScalar::zeta_power(3, 1, 1).scaled(val(rng)));
    const StepFunction phi(f, cells);
    const auto w = sf_weight(phi);
    for (int i = 0; i < 10; ++i) {
      const auto xi = random_point(f, rng, 0, 5);
      CycloScalar direct(3, 1);
      for (std::uint64_t k = 0; k < 27; ++k) direct += cy_abs_sq(phi.eval(xi + u_of_index(f, k)));
      ASSERT_EQ(w.eval(xi), direct);
      // Integral periodicity.
      const auto l = u_of_index(f, i + 1);
      ASSERT_EQ(sf_eval_periodic(w, xi + l), sf_eval_periodic(w, xi));
    }
  }
}

TEST(Stepfn, AccumulateIsLinear) {
  std::mt19937 rng(5);
  auto f = FieldConfig::make(2, 1);
  std::uniform_int_distribution<int> scale(-1, 3), val(-3, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<Cell> cells;
    for (int i = 0; i < 4; ++i) {
      const int k = scale(rng);
      cells.emplace_back(Ball(random_point(f, rng, -2, k), k), rat(f, val(rng)));
    }
    const auto g = StepFunction::accumulate(f, cells);
    for (int i = 0; i < 10; ++i) {
      const auto xi = random_point(f, rng, -2, 5);
      CycloScalar direct(2, 1);
      for (const auto& [b, v] : cells)
        if (b.contains(xi)) direct += v;
      ASSERT_EQ(g.eval(xi), direct);
    }
  }
}
