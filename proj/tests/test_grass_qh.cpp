#include <gtest/gtest.h>

#include "abelianizer/grass_qh.hpp"

using namespace abelianizer;

namespace {

SchubertVector sv(const BoxSpec& box, std::initializer_list<std::pair<Partition, Scalar>> terms) {
  SchubertVector v(box);
  for (const auto& [p, c] : terms) v.add(p, c);
  return v;
}

}  // namespace

TEST(QuantumCup, Examples) {
  const BoxSpec box(2, 4);
  const QSchubertVector a{{0, sv(box, {{Partition({2, 2}), 1}})}, {1, sv(box, {{Partition{}, 1}})}};
  EXPECT_EQ(quantum_cup_Gr(Partition{1}, Partition({2, 1}), box), a);
  const QSchubertVector b{{1, sv(box, {{Partition{1}, 1}})}};
  EXPECT_EQ(quantum_cup_Gr(Partition{1}, Partition({2, 2}), box), b);
}

TEST(QuantumCup, Unit) {
  const BoxSpec box(2, 5);
  for (const auto& p : box_partitions(box)) {
    const QSchubertVector expect{{0, SchubertVector::basis(box, p)}};
    EXPECT_EQ(quantum_cup_Gr(Partition{}, p, box), expect);
  }
}

TEST(QuantumCup, ClassicalPartIsMartinProduct) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(3, 6)}) {
    const GrassmannianQH qh(box);
    for (const auto& a : qh.basis())
      for (const auto& b : qh.basis()) {
        const auto prod = qh.quantum_cup(a, b);
        const SchubertVector classical = prod.count(0) ? prod.at(0) : SchubertVector(box);
        EXPECT_EQ(classical, martin_cup_Gr(a, b, box)) << a.str() << b.str();
      }
  }
}

TEST(QuantumCup, Commutative) {
  const GrassmannianQH qh(BoxSpec(3, 6));
  for (const auto& a : qh.basis())
    for (const auto& b : qh.basis()) EXPECT_EQ(qh.quantum_cup(a, b), qh.quantum_cup(b, a));
}

TEST(QuantumCup, Associative) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(3, 6)}) {
    const auto rep = check_associativity(GrassmannianQH(box));
    EXPECT_TRUE(rep.pass()) << rep.violations.size();
  }
}

TEST(QuantumCup, GradingIsHomogeneous) {
  const BoxSpec box(2, 5);
  const GrassmannianQH qh(box);
  for (const auto& a : qh.basis())
    for (const auto& b : qh.basis())
      for (const auto& [q, v] : qh.quantum_cup(a, b))
        for (const auto& [p, c] : v.coeffs()) EXPECT_EQ(p.weight() + box.n * q, a.weight() + b.weight());
}

TEST(QuantumCup, OutsideBoxThrows) {
  EXPECT_THROW(quantum_cup_Gr(Partition{3}, Partition{1}, BoxSpec(2, 4)), OutsideBoxError);
}

TEST(ThreePointGr, Examples) {
  const BoxSpec box(2, 4);
  EXPECT_EQ(three_point_Gr(Partition{1}, Partition({2, 1}), Partition({2, 2}), 1, box), 1);
  EXPECT_EQ(three_point_Gr(Partition{1}, Partition{1}, Partition{1}, 1, box), 0);
  for (const auto& p : box_partitions(box))
    EXPECT_EQ(three_point_Gr(Partition{}, p, complement(p, box), 0, box), 1) << p.str();
}

TEST(ThreePointGr, ConicThroughThreePoints) {
  const BoxSpec box(2, 4);
  const Partition pt({2, 2});
  EXPECT_EQ(three_point_Gr(pt, pt, pt, 2, box), 1);
}

TEST(TwoPointGr, Examples) {
  const BoxSpec box(2, 4);
  EXPECT_EQ(two_point_Gr(Partition({2, 1}), Partition({2, 2}), 1, box), 1);
  EXPECT_EQ(two_point_Gr(Partition({2, 2}), Partition({2, 2}), 1, box), 0);
  EXPECT_EQ(two_point_Gr(Partition{1}, Partition{1}, 1, box), 0);
  EXPECT_THROW(two_point_Gr(Partition{1}, Partition({2, 1}), 0, box), Error);
}

TEST(Calibration, DefaultSignIsNonnegative) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(3, 6)}) {
    const auto rep = check_nonnegativity(box, 2, kDefaultRimHookSign);
    EXPECT_TRUE(rep.pass()) << box.k << "," << box.n;
    EXPECT_GT(rep.instances, 0u);
  }
}

TEST(Calibration, AlternativeSignProducesNegativeConstant) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5)})
    EXPECT_FALSE(check_nonnegativity(box, 2, RimHookSign::HeightMinusOne).pass());
}

TEST(JFunctionGr, UnitNormalization) {
  const BoxSpec box(2, 4);
  const auto J = j_function_Gr(box, 2).series();
  SchubertVector one = SchubertVector::basis(box, Partition{});
  ASSERT_TRUE(J.count({0, 1}));
  EXPECT_EQ(J.at({0, 1}), one);
  for (const auto& [qz, v] : J)
    if (qz.first == 0) {
      EXPECT_EQ(qz.second, 1);
    }
}

TEST(JFunctionGr, ProjectiveLine) {
  // q^1 term of P^1: z (z + H)^{-2} = z^{-1} - 2 H z^{-2}.
  const BoxSpec box(1, 2);
  const auto J = j_function_Gr(box, 1).series();
  ASSERT_TRUE(J.count({1, -1}));
  ASSERT_TRUE(J.count({1, -2}));
  EXPECT_EQ(J.at({1, -1}), SchubertVector::basis(box, Partition{}));
  EXPECT_EQ(J.at({1, -2}), Scalar(-2) * SchubertVector::basis(box, Partition{1}));
  std::size_t terms = 0;
  for (const auto& [qz, v] : J) terms += qz.first == 1;
  EXPECT_EQ(terms, 2u);
}

TEST(JFunctionGr, Homogeneous) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5)}) {
    const auto fund = j_function_Gr(box, 3);
    for (std::size_t col = 0; col < fund.basis.size(); ++col) {
      const int shift = fund.basis[col].weight();
      for (const auto& [qz, v] : fund.column(col))
        for (const auto& [p, c] : v.coeffs()) {
          EXPECT_EQ(qz.second + box.n * qz.first + p.weight(), 1 + shift);
          EXPECT_GE(qz.second, -(box.n * qz.first + box.dim()));
        }
    }
  }
}

TEST(JFunctionGr, ZTruncationKeepsLeadingWindow) {
  const BoxSpec box(2, 4);
  const auto full = j_function_Gr(box, 2).series();
  const auto cut = j_function_Gr(box, 2, 1).series();
  for (const auto& [qz, v] : full) {
    const bool kept = qz.second >= 1 - box.n * qz.first - 1;
    EXPECT_EQ(cut.count(qz) == 1, kept) << qz.first << "," << qz.second;
  }
}

TEST(JFunctionGr, JsonRecords) {
  const BoxSpec box(1, 2);
  const auto j = to_json(j_function_Gr(box, 1).series());
  ASSERT_TRUE(j.is_array());
  bool found = false;
  for (const auto& rec : j) {
    if (rec["q_power"] == 1 && rec["z_power"] == -2) {
      EXPECT_EQ(rec["basis"], "[1]");
      EXPECT_EQ(rec["numerator"], "-2");
      EXPECT_EQ(rec["denominator"], "1");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}
