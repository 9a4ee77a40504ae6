#include <gtest/gtest.h>

#include "abelianizer/jfunctions.hpp"

using namespace abelianizer;

namespace {

PClass H(const ProductSpace& s, int i) { return PClass::hyperplane(s, i); }

ZPClass zp(std::initializer_list<std::pair<int, PClass>> terms) {
  ZPClass out;
  for (const auto& [p, c] : terms) accumulate(out, p, c);
  return out;
}

}  // namespace

TEST(JFunctionP, UnitAtDegreeZero) {
  const ProductSpace s(2, 3);
  const auto J = j_function_P(s, 2);
  EXPECT_EQ(J.coefficients.at(Multidegree({0, 0})), zp({{1, PClass::one(s)}}));
}

TEST(JFunctionP, ProjectiveLineDegreeOne) {
  const ProductSpace s(1, 2);
  const auto J = j_function_P(s, 1);
  const ZPClass expect = zp({{-1, PClass::one(s)}, {-2, Scalar(-2) * H(s, 0)}});
  EXPECT_EQ(J.coefficients.at(Multidegree{1}), expect);
}

TEST(JFunctionP, TensorFactorization) {
  const ProductSpace s(2, 2);
  const auto J = j_function_P(s, 2);
  const auto line = j_function_P(ProductSpace(1, 2), 2);
  // J^{(1,1)} is the product of the two factor coefficients, with one leading z removed.
  const ZPClass one_factor = zp({{-1, PClass::one(s)}, {-2, Scalar(-2) * H(s, 0)}});
  const ZPClass other = zp({{-1, PClass::one(s)}, {-2, Scalar(-2) * H(s, 1)}});
  ZPClass expect;
  for (const auto& [p, c] : one_factor * other) accumulate(expect, p - 1, c);
  EXPECT_EQ(J.coefficients.at(Multidegree({1, 1})), expect);
  EXPECT_EQ(line.coefficients.size(), 3u);
}

TEST(JFunctionP, TensorConsistency) {
  for (const auto& s : {ProductSpace(2, 2), ProductSpace(2, 3), ProductSpace(3, 2)}) {
    const auto rep = check_tensor_consistency(s, 3);
    EXPECT_TRUE(rep.pass()) << s.k << "," << s.n;
    EXPECT_GT(rep.instances, 0u);
  }
}

TEST(JFunctionP, DivisorDerivative) {
  EXPECT_TRUE(check_divisor_derivative(ProductSpace(2, 3), 3).pass());
  EXPECT_TRUE(check_divisor_derivative(ProductSpace(1, 4), 3).pass());
}

TEST(JFunctionGr, DivisorDerivative) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(1, 3)}) {
    const auto rep = check_divisor_derivative_Gr(box, 3);
    EXPECT_TRUE(rep.pass()) << box.k << "," << box.n;
  }
}

TEST(IFunction, DegreeZeroIsDelta) {
  const BoxSpec box(2, 4);
  const ProductSpace s(box);
  const auto I = i_function(box, 0);
  EXPECT_EQ(I.coefficients.at(0), zp({{1, delta(s)}}));
}

TEST(IFunction, ProjectiveSpaceEqualsJ) {
  for (int n = 2; n <= 5; ++n) {
    const BoxSpec box(1, n);
    const auto I = i_function(box, 3);
    const auto J = j_function_P(ProductSpace(box), 3);
    for (int d = 0; d <= 3; ++d) EXPECT_EQ(I.coefficients.at(d), J.coefficients.at(Multidegree{d})) << n << " " << d;
  }
}

TEST(IFunction, GrassmannianDegreeOne) {
  const BoxSpec box(2, 4);
  const ProductSpace s(box);
  const auto J = j_function_P(s, 1);
  const PClass r = H(s, 0) - H(s, 1);
  const ZPClass plus = zp({{0, r}, {1, PClass::one(s)}});
  const ZPClass minus = zp({{0, r}, {1, Scalar(-1) * PClass::one(s)}});
  ZPClass expect;
  for (const auto& [p, c] : plus * J.coefficients.at(Multidegree({1, 0}))) accumulate(expect, p, Scalar(-1) * c);
  for (const auto& [p, c] : minus * J.coefficients.at(Multidegree({0, 1}))) accumulate(expect, p, Scalar(-1) * c);
  EXPECT_EQ(i_function(box, 1).coefficients.at(1), expect);
}

TEST(IFunction, AntiInvariant) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(3, 6)}) {
    const auto rep = check_anti_invariance(i_function(box, 2));
    EXPECT_TRUE(rep.pass()) << box.k << "," << box.n;
    EXPECT_GT(rep.instances, 0u);
  }
}

TEST(IFunction, ZTruncationKeepsLeadingWindow) {
  const BoxSpec box(2, 4);
  const auto full = i_function(box, 2);
  const auto cut = i_function(box, 2, 2);
  for (const auto& [d, series] : full.coefficients)
    for (const auto& [p, c] : series) {
      const bool kept = p >= 1 - box.n * d - 2;
      EXPECT_EQ(cut.coefficients.at(d).count(p) == 1, kept) << d << "," << p;
    }
}

TEST(IFunction, JsonRecords) {
  const auto j = to_json(i_function(BoxSpec(2, 4), 0));
  ASSERT_EQ(j.size(), 2u);
  for (const auto& rec : j) {
    EXPECT_EQ(rec["q_power"], 0);
    EXPECT_EQ(rec["z_power"], 1);
    EXPECT_EQ(rec["denominator"], "1");
  }
  EXPECT_EQ(j[0]["basis"], "H2");
  EXPECT_EQ(j[0]["numerator"], "-1");
  EXPECT_EQ(j[1]["basis"], "H1");
  EXPECT_EQ(j[1]["numerator"], "1");
}

TEST(JI, GrassmannianTwoFourIsConsistent) {
  CSolution sol;
  const auto rep = check_j_i(BoxSpec(2, 4), 3, -1, &sol);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(sol.consistent());
  EXPECT_EQ(sol.unchecked_terms, 0u);
  EXPECT_TRUE(sol.collapses());
}

TEST(JI, LeadingCoefficientIsInverseOfC) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5)}) {
    CSolution sol;
    check_j_i(box, 2, 8, &sol);
    ASSERT_TRUE(sol.d_coeffs.count(Partition{}));
    EXPECT_EQ(sol.d_coeffs.at(Partition{}).at({0, 0}), 1);
    EXPECT_EQ(sol.describe(ProductSpace(box).c_squared()), "C^[] = c*(-2 q^0 z^0); ");
  }
}

TEST(JI, ProjectiveSpaceCoefficientIsOne) {
  for (int n = 2; n <= 5; ++n) {
    CSolution sol;
    EXPECT_TRUE(check_j_i(BoxSpec(1, n), 3, -1, &sol).pass());
    EXPECT_TRUE(sol.collapses());
    EXPECT_EQ(sol.describe(1), "C^[] = c*(1 q^0 z^0); ");
  }
}

TEST(JI, ThreeSixWithinWindow) {
  CSolution sol;
  const auto rep = check_j_i(BoxSpec(3, 6), 2, 8, &sol);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(sol.collapses());
}

TEST(JI, PerturbedIHasResidual) {
  const BoxSpec box(2, 4);
  const ProductSpace s(box);
  ISeries I = i_function(box, 2);
  accumulate(I.coefficients.at(1), -3, PClass::monomial(s, {1, 1}));
  const CSolution sol = solve_c_coefficients(I, j_function_Gr(box, 2), 2);
  EXPECT_FALSE(sol.consistent());
  EXPECT_TRUE(sol.residual.count({1, -3}));
}

TEST(JI, DepthWindowCountsUncheckedTerms) {
  const BoxSpec box(2, 4);
  const ProductSpace s(box);
  ISeries I = i_function(box, 2);
  accumulate(I.coefficients.at(1), -8, PClass::monomial(s, {1, 1}));
  const auto J = j_function_Gr(box, 2);
  const CSolution narrow = solve_c_coefficients(I, J, 2, 1);
  EXPECT_TRUE(narrow.consistent());
  EXPECT_EQ(narrow.unchecked_terms, 1u);
  EXPECT_FALSE(solve_c_coefficients(I, J, 2, 8).consistent());
}

TEST(DeformedFlatness, Passes) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(1, 3)}) {
    const auto rep = check_deformed_flatness(box, 2);
    EXPECT_TRUE(rep.pass()) << box.k << "," << box.n;
    EXPECT_GT(rep.instances, 0u);
  }
}
