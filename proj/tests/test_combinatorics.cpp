#include <gtest/gtest.h>

#include <functional>
#include <set>
#include <tuple>

#include "abelianizer/combinatorics.hpp"

using namespace abelianizer;

namespace {

Polynomial x(std::size_t nv, std::size_t i) { return Polynomial::variable(nv, i); }

// Sum of x^T over semistandard tableaux of shape lambda with entries 1..k.
Polynomial ssyt_sum(const Partition& lambda, int k) {
  const auto nv = static_cast<std::size_t>(k);
  Polynomial out(nv);
  std::vector<std::vector<int>> t;
  for (std::size_t r = 0; r < lambda.length(); ++r) t.emplace_back(static_cast<std::size_t>(lambda[r]), 0);
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t r, std::size_t c) {
    if (r == t.size()) {
      Exponent e(nv, 0);
      for (const auto& row : t)
        for (int v : row) ++e[static_cast<std::size_t>(v)];
      out.add_term(e, 1);
      return;
    }
    if (c == t[r].size()) return fill(r + 1, 0);
    int lo = c > 0 ? t[r][c - 1] : 0;
    if (r > 0) lo = std::max(lo, t[r - 1][c] + 1);
    for (int v = lo; v < k; ++v) {
      t[r][c] = v;
      fill(r, c + 1);
    }
  };
  fill(0, 0);
  return out;
}

}  // namespace

TEST(BoxPartitions, TwoByTwoInGradedOrder) {
  const std::vector<Partition> expect{{}, {1}, {2}, {1, 1}, {2, 1}, {2, 2}};
  EXPECT_EQ(box_partitions(BoxSpec(2, 4)), expect);
}

TEST(BoxPartitions, OneByOne) {
  const std::vector<Partition> expect{{}, {1}};
  EXPECT_EQ(box_partitions(BoxSpec(1, 2)), expect);
}

TEST(BoxPartitions, CountIsBinomial) {
  EXPECT_EQ(box_partitions(BoxSpec(2, 5)).size(), 10u);
  EXPECT_EQ(box_partitions(BoxSpec(3, 6)).size(), 20u);
}

TEST(BoxSpec, RejectsInvalidTargets) {
  EXPECT_THROW(BoxSpec(0, 3), Error);
  EXPECT_THROW(BoxSpec(3, 3), Error);
}

TEST(Partition, RejectsIncreasingParts) { EXPECT_THROW(Partition({1, 2}), Error); }

TEST(Partition, ParseRoundTrip) {
  EXPECT_EQ(Partition::parse("[2, 1]"), Partition({2, 1}));
  EXPECT_EQ(Partition::parse("[]"), Partition{});
  EXPECT_EQ(Partition({3, 1, 0}).str(), "[3,1]");
  EXPECT_THROW(Partition::parse("2,1"), Error);
  EXPECT_THROW(Partition::parse("[2,x]"), Error);
}

TEST(Complement, Examples) {
  const BoxSpec box(2, 4);
  EXPECT_EQ(complement(Partition{1}, box), Partition({2, 1}));
  EXPECT_EQ(complement(Partition({2, 2}), box), Partition{});
  EXPECT_EQ(complement(Partition{}, box), Partition({2, 2}));
}

TEST(Complement, IsAnInvolution) {
  const BoxSpec box(3, 6);
  for (const auto& p : box_partitions(box)) EXPECT_EQ(complement(complement(p, box), box), p);
}

TEST(Complement, OutsideBoxThrows) { EXPECT_THROW(complement(Partition{3}, BoxSpec(2, 4)), OutsideBoxError); }

TEST(Schur, Examples) {
  EXPECT_EQ(schur_polynomial(Partition{1}, 2), x(2, 0) + x(2, 1));
  EXPECT_EQ(schur_polynomial(Partition({1, 1}), 2), x(2, 0) * x(2, 1));
  EXPECT_EQ(schur_polynomial(Partition{2}, 2), x(2, 0) * x(2, 0) + x(2, 0) * x(2, 1) + x(2, 1) * x(2, 1));
}

TEST(Schur, TooManyRowsThrows) { EXPECT_THROW(schur_polynomial(Partition({1, 1, 1}), 2), Error); }

TEST(Schur, MatchesTableauSum) {
  for (int k = 1; k <= 3; ++k)
    for (int w = 0; w <= 5; ++w)
      for (const auto& p : partitions_of(w, k)) EXPECT_EQ(schur_polynomial(p, k), ssyt_sum(p, k)) << p.str();
}

TEST(Lifts, Compositions) {
  const std::vector<Multidegree> expect{{2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(lifts(2, 2), expect);
  EXPECT_EQ(lifts(0, 3), std::vector<Multidegree>{Multidegree({0, 0, 0})});
  EXPECT_EQ(lifts(1, 3).size(), 3u);
  EXPECT_TRUE(lifts(-1, 2).empty());
}

TEST(Epsilon, Examples) {
  EXPECT_EQ(epsilon(1, 2), 1);
  EXPECT_EQ(epsilon(2, 3), 0);
  for (int d = 0; d < 5; ++d) EXPECT_EQ(epsilon(d, 1), 0);
}

TEST(RimHook, Examples) {
  const BoxSpec box(2, 4);
  const auto a = rim_hook_reduce(Partition({3, 2}), box);
  EXPECT_EQ(a.sign, 1);
  EXPECT_EQ(a.q_power, 1);
  EXPECT_EQ(a.reduced, Partition{1});

  const auto b = rim_hook_reduce(Partition({2, 1}), box);
  EXPECT_EQ(b.sign, 1);
  EXPECT_EQ(b.q_power, 0);
  EXPECT_EQ(b.reduced, Partition({2, 1}));

  const auto c = rim_hook_reduce(Partition{4}, box);
  EXPECT_EQ(c.q_power, 1);
  EXPECT_EQ(c.reduced, Partition{});
  EXPECT_EQ(c.sign, -1);
}

TEST(RimHook, AnnihilatedClass) {
  const auto r = rim_hook_reduce(Partition{3}, BoxSpec(2, 4));
  EXPECT_FALSE(r.reduced.has_value());
}

TEST(RimHook, SignRulesAgreeForOddK) {
  const BoxSpec box(3, 6);
  for (int w = 0; w <= 12; ++w)
    for (const auto& p : partitions_of(w, 3)) {
      const auto a = rim_hook_reduce(p, box, RimHookSign::KMinusHeight);
      const auto b = rim_hook_reduce(p, box, RimHookSign::HeightMinusOne);
      EXPECT_EQ(a.sign, b.sign) << p.str();
    }
}

// Stripping n-hooks in any order reaches the same core with the same sign.
TEST(RimHook, Confluence) {
  for (const auto& box : {BoxSpec(2, 4), BoxSpec(2, 5), BoxSpec(3, 6)}) {
    const int k = box.k;
    for (int w = 0; w <= 3 * box.n; ++w) {
      for (const auto& p : partitions_of(w, k)) {
        if (p[0] > 3 * box.n) continue;
        std::set<std::tuple<Partition, int, int>> ends;
        std::function<void(const Partition&, int, int)> walk = [&](const Partition& cur, int sign, int q) {
          bool moved = false;
          for (int row = 0; row < k; ++row) {
            if (auto step = remove_rim_hook(cur, k, box.n, row)) {
              moved = true;
              walk(step->result, sign * hook_sign(step->height, k, kDefaultRimHookSign), q + 1);
            }
          }
          if (!moved) ends.emplace(cur, sign, q);
        };
        walk(p, 1, 0);
        ASSERT_EQ(ends.size(), 1u) << p.str();
        const auto& [core, sign, q] = *ends.begin();
        const auto r = rim_hook_reduce(p, box);
        if (core.fits(box)) {
          ASSERT_TRUE(r.reduced.has_value()) << p.str();
          EXPECT_EQ(*r.reduced, core);
          EXPECT_EQ(r.sign, sign);
          EXPECT_EQ(r.q_power, q);
        } else {
          EXPECT_FALSE(r.reduced.has_value()) << p.str();
        }
      }
    }
  }
}

TEST(Permutation, Parity) {
  const std::vector<int> id{0, 1, 2}, swap{1, 0, 2}, cyc{1, 2, 0};
  EXPECT_EQ(permutation_parity(id), 0);
  EXPECT_EQ(permutation_parity(swap), 1);
  EXPECT_EQ(permutation_parity(cyc), 0);
}
