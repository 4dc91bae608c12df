#include <gtest/gtest.h>

#include "lfw/construct.hpp"

using namespace lfw;

namespace {

Rational joint_measure(const std::vector<ClopenSet>& sets) {
  Rational m = 0;
  for (const auto& s : sets) m += s.measure();
  return m;
}

}  // namespace

TEST(Construct, ShannonFamily) {
  auto f2 = FieldConfig::make(2, 1);
  const auto s2 = shannon_multiwavelet(f2);
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0], ClopenSet::of_ball(Ball(parse_element(f2, "p^-1"), 0)));
  auto f3 = FieldConfig::make(3, 1);
  const auto s3 = shannon_multiwavelet(f3);
  ASSERT_EQ(s3.size(), 2u);
  for (const auto& w : s3) EXPECT_EQ(w.measure(), 1);
  auto f4 = FieldConfig::make(2, 2);
  EXPECT_TRUE(verify_multiwavelet_set(shannon_multiwavelet(f4)).passed());
}

TEST(Construct, AnnulusAndScaledShannon) {
  auto f2 = FieldConfig::make(2, 1);
  const auto a = annulus_wavelet(f2, 1);
  EXPECT_EQ(a, ClopenSet::of_ball(Ball(parse_element(f2, "p"), 2)));
  EXPECT_EQ(a.measure(), Rational(1, 4));
  EXPECT_THROW(annulus_wavelet(f2, 0), std::invalid_argument);
  auto f3 = FieldConfig::make(3, 1);
  for (int m = 1; m <= 2; ++m) {
    const auto w = scaled_shannon(f3, m);
    ASSERT_EQ(w.size(), 2u);
    for (const auto& c : w) EXPECT_EQ(c.measure(), rational_power(3, -m));
    EXPECT_TRUE(verify_pf_multiwavelet_set(w).passed());
    EXPECT_FALSE(verify_multiwavelet_set(w).passed());
  }
}

TEST(Construct, ScaledShannonTranslatesAreDisjoint) {
  // (W_i + u(q^m k)) are disjoint for distinct k.
  auto f3 = FieldConfig::make(3, 1);
  for (int m = 1; m <= 2; ++m) {
    for (const auto& w : scaled_shannon(f3, m)) {
      for (std::uint64_t k = 0; k < 6; ++k) {
        for (std::uint64_t l = k + 1; l < 6; ++l) {
          const auto a = cs_translate(w, u_of_index(f3, k * 9));
          const auto b = cs_translate(w, u_of_index(f3, l * 9));
          EXPECT_TRUE(cs_intersect(a, b).empty());
        }
      }
    }
  }
}

TEST(Construct, ShellSuperwaveletMeasures) {
  auto f2 = FieldConfig::make(2, 1);
  const auto fam = shell_superwavelet(f2, 3);
  EXPECT_EQ(joint_measure(fam), Rational(7, 16));
  EXPECT_TRUE(verify_superwavelet(fam, SuperMode::Parseval).passed());
  EXPECT_FALSE(verify_superwavelet(fam, SuperMode::Orthonormal).passed());
}

TEST(Construct, ScalingSets) {
  for (auto [p, c] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    auto f = FieldConfig::make(p, c);
    const auto s = scaling_set(cs_union_all(f, shannon_multiwavelet(f)), 3);
    EXPECT_TRUE(s.certified);
    EXPECT_EQ(s.set, ClopenSet::integers(f));
    for (int m = 1; m <= 3; ++m) {
      const auto sm = scaling_set(annulus_wavelet(f, m), 2);
      EXPECT_TRUE(sm.certified);
      EXPECT_EQ(sm.set, ClopenSet::ideal(f, m + 1));
      const auto w = cs_union_all(f, scaled_shannon(f, m));
      const auto ss = scaling_set(w, 2);
      EXPECT_TRUE(ss.certified);
      EXPECT_EQ(ss.set.measure(), rational_power(f->q(), -m));
      EXPECT_EQ(ss.set.measure(), w.measure() / Rational(f->q() - 1));
    }
  }
  auto f3 = FieldConfig::make(3, 1);
  EXPECT_THROW(scaling_set(ClopenSet::integers(f3), 2), PreconditionError);
}

TEST(Construct, SolverFindsShannonFromScratch) {
  auto f2 = FieldConfig::make(2, 1);
  SolveRequest req;
  req.target = ClopenSet::integers(f2);
  req.shell_lo = -1;
  req.shell_hi = -1;
  req.max_scale = 0;
  const auto r = solve_complement(req);
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_EQ(*r.set, shannon_multiwavelet(f2)[0]);
  EXPECT_TRUE(r.verification->passed());
}

TEST(Construct, SolverFindsWaveletSetAtWiderResolution) {
  auto f2 = FieldConfig::make(2, 1);
  SolveRequest req;
  req.target = ClopenSet::integers(f2);
  req.shell_lo = -3;
  req.shell_hi = 3;
  req.max_scale = 5;
  const auto r = solve_complement(req);
  ASSERT_EQ(r.status, SolveStatus::Solved) << r.nodes;
  EXPECT_TRUE(r.verification->passed()) << to_text(*r.verification);
  EXPECT_TRUE(verify_multiwavelet_set({*r.set}).passed());
}

TEST(Construct, NoSingleClopenWaveletSetForOddQ) {
  // Every candidate covers an odd number of cells on both sides; O* has an
  // even number of cells and O an odd number.
  auto f3 = FieldConfig::make(3, 1);
  SolveRequest req;
  req.target = ClopenSet::integers(f3);
  req.shell_lo = -2;
  req.shell_hi = 2;
  req.max_scale = 3;
  const auto r = solve_complement(req);
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_EQ(r.certificate, "count mod (q-1)");
}

TEST(Construct, UnitsCompletionUnsatForEvenQ) {
  auto f2 = FieldConfig::make(2, 1);
  SolveRequest req;
  req.existing = {ClopenSet::units(f2)};
  req.shell_lo = -3;
  req.shell_hi = 3;
  req.max_scale = 5;
  const auto r = solve_complement(req);
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_EQ(r.target, ClopenSet::ideal(f2, 1));
  EXPECT_EQ(r.pool_size, 242u);
}

TEST(Construct, MissingComponentPrintedAndCorrected) {
  for (unsigned p : {2u, 3u}) {
    auto f = FieldConfig::make(p, 1);
    const Rational q = f->q();
    for (int n = 2; n <= 3; ++n) {
      const auto fam = missing_component_family(f, n);
      const auto printed = missing_component_joint_fold(fam, fam.printed_target, "printed");
      ASSERT_FALSE(printed.passed);
      EXPECT_EQ(*printed.witness.measure, 1 + rational_power(f->q(), 1 - n) * (q - 1));
      EXPECT_TRUE(missing_component_joint_fold(fam, fam.corrected_target, "corrected").passed);

      SolveRequest req;
      req.existing = fam.existing;
      req.shell_lo = -3;
      req.shell_hi = 3;
      req.max_scale = 5;
      const auto r = solve_complement(req);
      EXPECT_EQ(r.target, fam.corrected_target);
      if (p == 2) {
        EXPECT_EQ(r.status, SolveStatus::Unsat) << "n=" << n;
        EXPECT_EQ(r.certificate, "exhaustive");
      } else {
        EXPECT_EQ(r.status, SolveStatus::Unsat);
        EXPECT_EQ(r.certificate, "count mod (q-1)");
      }
    }
  }
}

TEST(Construct, PrintedTargetCompletionFailsJointFold) {
  auto f2 = FieldConfig::make(2, 1);
  for (int n = 2; n <= 2; ++n) {
    const auto fam = missing_component_family(f2, n);
    SolveRequest req;
    req.existing = fam.existing;
    req.target = fam.printed_target;
    req.shell_lo = -3;
    req.shell_hi = 3;
    req.max_scale = 5;
    const auto r = solve_complement(req);
    ASSERT_EQ(r.status, SolveStatus::Solved);
    ASSERT_TRUE(r.verification);
    EXPECT_FALSE(r.verification->passed());
    EXPECT_EQ(r.verification->facts().at("joint_fold_measure"),
              to_fraction_string(1 + rational_power(2, 1 - n)));
  }
}

TEST(Construct, SolverPreconditionsAndCaps) {
  auto f2 = FieldConfig::make(2, 1);
  SolveRequest bad;
  bad.existing = {ClopenSet::integers(f2)};
  bad.shell_lo = -1;
  bad.shell_hi = 1;
  bad.max_scale = 3;
  EXPECT_THROW(solve_complement(bad), PreconditionError);
  SolveRequest overlap;
  overlap.existing = {ClopenSet::units(f2), ClopenSet::units(f2)};
  overlap.shell_lo = -1;
  overlap.shell_hi = 1;
  overlap.max_scale = 3;
  EXPECT_THROW(solve_complement(overlap), PreconditionError);
  SolveRequest capped;
  capped.existing = {ClopenSet::units(f2)};
  capped.shell_lo = -3;
  capped.shell_hi = 3;
  capped.max_scale = 5;
  capped.limits.max_nodes = 1;
  EXPECT_EQ(solve_complement(capped).status, SolveStatus::ResourceCap);
}

TEST(Construct, SolverExhaustiveUnsat) {
  // Shell 0 alone folds onto O*, never onto pO.
  auto f2 = FieldConfig::make(2, 1);
  SolveRequest req;
  req.existing = {ClopenSet::units(f2)};
  req.shell_lo = 0;
  req.shell_hi = 0;
  req.max_scale = 3;
  const auto r = solve_complement(req);
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_EQ(r.certificate, "exhaustive");
}
