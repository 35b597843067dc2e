#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace eos;

namespace {

using Chain = EpsilonChain<int>;

NestedFamily<int> family(int x, int y, std::vector<std::vector<int>> stages) {
  NestedFamily<int> f{x, y, {}, {}};
  int n = 1;
  for (auto& s : stages) {
    f.stages.push_back({std::move(s), dyadic(n)});
    f.epsilons.push_back(dyadic(n++));
  }
  return f;
}

}  // namespace

TEST(Concat, Examples) {
  Chain a{{1, 2}, Rational(1, 2)}, b{{3, 4}, Rational(1, 2)};
  EXPECT_EQ(concat(a, b).points, (std::vector<int>{1, 2, 3, 4}));
  Chain x{{0}, Rational(1, 2)}, t{{5, 6, 7}, Rational(1, 2)};
  EXPECT_EQ(concat(x, t).points, (std::vector<int>{0, 5, 6, 7}));
  EXPECT_THROW(concat(a, Chain{{}, Rational(1, 2)}), std::invalid_argument);
  EXPECT_THROW(concat(a, Chain{{3}, Rational(1, 4)}), std::invalid_argument);
  Chain c{{8, 9}, Rational(1, 2)};
  EXPECT_EQ(concat(concat(a, b), c).points, concat(a, concat(b, c)).points);
}

TEST(StripEndpoints, Examples) {
  EXPECT_EQ(strip_endpoints(Chain{{1, 2, 3, 4}, Rational(1)}).points, (std::vector<int>{2, 3}));
  EXPECT_EQ(strip_endpoints(Chain{{1, 2, 3}, Rational(1)}).points, (std::vector<int>{2}));
  EXPECT_THROW(strip_endpoints(Chain{{1, 2}, Rational(1)}), std::invalid_argument);
}

TEST(LimitOrder, SingleChain) {
  auto lim = limit_order(family(0, 9, {{0, 1, 2, 9}}));
  EXPECT_TRUE(lim.linear);
  EXPECT_EQ(lim.elements, (std::vector<int>{1, 2}));
  EXPECT_LT(lim.position(1), lim.position(2));
}

TEST(LimitOrder, InsertionBefore) {
  auto lim = limit_order(family(0, 9, {{0, 1, 9}, {0, 3, 1, 9}}));
  EXPECT_TRUE(lim.linear);
  EXPECT_EQ(lim.elements, (std::vector<int>{3, 1}));
  EXPECT_EQ(lim.first_stage, (std::vector<int>{2, 1}));
}

TEST(LimitOrder, SwapIsFlagged) {
  auto lim = limit_order(family(0, 9, {{0, 1, 2, 9}, {0, 2, 1, 9}}));
  EXPECT_FALSE(lim.linear);
  ASSERT_TRUE(lim.witness.has_value());
  std::set<int> w{lim.witness->first, lim.witness->second};
  EXPECT_EQ(w, (std::set<int>{1, 2}));
}

TEST(LimitOrder, EndpointsExcluded) {
  auto lim = limit_order(family(0, 9, {{0, 4, 9}, {0, 5, 4, 6, 9}}));
  EXPECT_EQ(lim.elements, (std::vector<int>{5, 4, 6}));
}

TEST(LimitOrder, MatchesBruteForceOnRandomCompatibleFamilies) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    // Grow a hidden linear order by random insertions; stages are its prefixes.
    std::vector<int> hidden;
    std::vector<std::vector<int>> stages;
    int next = 1;
    int nstages = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < nstages; ++s) {
      int add = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < add; ++i) {
        auto at = hidden.begin() + static_cast<std::ptrdiff_t>(rng() % (hidden.size() + 1));
        hidden.insert(at, next++);
      }
      std::vector<int> st{0};
      st.insert(st.end(), hidden.begin(), hidden.end());
      st.push_back(-1);
      stages.push_back(st);
    }
    auto fam = family(0, -1, stages);
    auto lim = limit_order(fam);
    ASSERT_TRUE(lim.linear);
    EXPECT_EQ(lim.elements, hidden);
    for (int a : hidden)
      for (int b : hidden) {
        if (a == b) continue;
        int v = eos::testing::brute_compare(fam, a, b);
        ASSERT_NE(v, 2);
        ASSERT_NE(v, 0);
        EXPECT_EQ(v < 0, lim.position(a) < lim.position(b));
      }
  }
}

TEST(LimitOrder, StabilizesUnderCompatibleExtension) {
  auto base = family(0, 9, {{0, 1, 2, 9}, {0, 1, 3, 2, 9}});
  auto more = family(0, 9, {{0, 1, 2, 9}, {0, 1, 3, 2, 9}, {0, 4, 1, 3, 2, 5, 9}});
  auto a = limit_order(base), b = limit_order(more);
  for (int p : a.elements)
    for (int q : a.elements)
      if (p != q) {
        EXPECT_EQ(a.position(p) < a.position(q), b.position(p) < b.position(q));
      }
}
