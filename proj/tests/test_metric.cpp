#include "pcnsm/metric.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace pcnsm;
using pcnsm::testing::oracle_discounted;
using pcnsm::testing::oracle_match_length;

namespace {

Observation vec2(double a, double b) { return Eigen::Vector2d(a, b); }
Observation scalar(double a) { return Observation::Constant(1, a); }

History history_of(const std::vector<Observation> &chronological) {
  History h(chronological.front().size());
  for (std::size_t i = 0; i < chronological.size(); ++i) {
    std::optional<ActionId> a;
    if (i > 0)
      a = ActionId{0};
    h.append({a, chronological[i], 0.0}, 0.0);
  }
  return h;
}

MetricSpec unwindowed(double lambda) {
  MetricSpec s;
  s.kind = MetricKind::discounted;
  s.lambda = lambda;
  s.window = 1000;
  s.obs_scale_bound = 100.0;
  return s;
}

} // namespace

TEST(MatchLength, DifferentLastTriplesGiveZero) {
  History h(1);
  h.append({std::nullopt, scalar(0), 0.0}, 0.0);
  h.append({ActionId{0}, scalar(1), 0.0}, 0.0);
  h.append({ActionId{0}, scalar(2), 0.0}, 0.0);
  EXPECT_EQ(match_length(h, 2, 3), 0u);
  EXPECT_EQ(match_length(h, 0, 3), 0u);
}

TEST(MatchLength, SelfComparisonCoversWholePrefix) {
  std::mt19937_64 gen(1);
  const History h = pcnsm::testing::random_discrete_history(gen, 6, 3, 4);
  EXPECT_EQ(match_length(h, 3, 3), 3u);
  EXPECT_EQ(match_length(h, 6, 6), 6u);
}

TEST(MatchLength, HandRecursionExample) {
  // <A, B> against <C, B>: the B triples agree, the earlier ones do not.
  History h(1);
  h.append({std::nullopt, scalar(10), 0.0}, 0.0); // A
  h.append({ActionId{1}, scalar(20), 0.0}, 0.0);  // B
  h.append({ActionId{1}, scalar(30), 0.0}, 0.0);  // C
  h.append({ActionId{1}, scalar(20), 0.0}, 0.0);  // B
  EXPECT_EQ(match_length(h, 2, 4), 1u);
  EXPECT_EQ(match_length(h, 4, 2), 1u);
}

TEST(MatchLength, TriplesCompareActionAndReward) {
  History h(1);
  h.append({std::nullopt, scalar(0), 0.0}, 0.0);
  h.append({ActionId{0}, scalar(1), 0.0}, 0.0);
  h.append({ActionId{1}, scalar(1), 0.0}, 0.0); // same observation, other action
  h.append({ActionId{0}, scalar(1), 5.0}, 0.0); // same observation, other reward
  EXPECT_EQ(match_length(h, 2, 3), 0u);
  EXPECT_EQ(match_length(h, 2, 4), 0u);
}

TEST(MatchLength, AgreesWithRecursiveOracle) {
  std::mt19937_64 gen(11);
  for (int round = 0; round < 200; ++round) {
    const History h = pcnsm::testing::random_discrete_history(gen, 30, 2, 2, 1);
    for (TimeIndex t = 1; t <= h.size(); t += 3)
      for (TimeIndex u = 1; u <= h.size(); u += 2)
        ASSERT_EQ(match_length(h, t, u), oracle_match_length(h, t, u));
  }
}

TEST(NsmDistance, FormulaValues) {
  History h(1);
  for (int i = 0; i < 8; ++i) {
    std::optional<ActionId> a;
    if (i > 0)
      a = ActionId{0};
    h.append({a, scalar(i % 4 == 3 ? 9 : 0), 0.0}, 0.0);
  }
  // Entries 1..8: 0 0 0 9 0 0 0 9.
  EXPECT_EQ(match_length(h, 4, 5), 0u);
  EXPECT_EQ(nsm_distance(h, 4, 5), 1.0);
  EXPECT_EQ(match_length(h, 4, 8), 3u); // entry 1 carries no action
  EXPECT_EQ(nsm_distance(h, 4, 8), 0.25);
  EXPECT_EQ(match_length(h, 5, 6), 1u);
  EXPECT_EQ(match_length(h, 7, 3), 2u);
  EXPECT_GT(nsm_distance(h, 5, 6), nsm_distance(h, 7, 3));
  EXPECT_EQ(nsm_distance(h, 5, 6), 0.5);
  EXPECT_DOUBLE_EQ(nsm_distance(h, 7, 3), 1.0 / 3.0);
}

TEST(NsmDistance, OrderingMatchesDescendingMatchLength) {
  std::mt19937_64 gen(3);
  for (int round = 0; round < 100; ++round) {
    const History h = pcnsm::testing::random_discrete_history(gen, 25, 2, 2, 1);
    const TimeIndex t = h.size();
    std::vector<TimeIndex> by_mu, by_n;
    for (TimeIndex u = 1; u < t; ++u) {
      by_mu.push_back(u);
      by_n.push_back(u);
    }
    std::stable_sort(by_mu.begin(), by_mu.end(), [&](TimeIndex a, TimeIndex b) {
      return nsm_distance(h, t, a) < nsm_distance(h, t, b);
    });
    std::stable_sort(by_n.begin(), by_n.end(), [&](TimeIndex a, TimeIndex b) {
      return match_length(h, t, a) > match_length(h, t, b);
    });
    ASSERT_EQ(by_mu, by_n);
  }
}

TEST(DiscountedDistance, SuffixExampleFive) {
  Eigen::Matrix2d a, b;
  a << 3, 0, 4, 0; // columns newest first: (3,4), (0,0)
  b.setZero();
  EXPECT_EQ(discounted_suffix_distance(a, b, 0.5), 5.0);

  const History ha = history_of({vec2(0, 0), vec2(3, 4)});
  const History hb = history_of({vec2(0, 0), vec2(0, 0)});
  EXPECT_EQ(discounted_distance(ha, 2, hb, 2, unwindowed(0.5)), 5.0);
}

TEST(DiscountedDistance, SuffixExampleFivePointFive) {
  Eigen::Matrix2d a, b;
  a << 3, 1, 4, 0; // (3,4), (1,0)
  b.setZero();
  EXPECT_EQ(discounted_suffix_distance(a, b, 0.5), 5.5);

  const History ha = history_of({vec2(1, 0), vec2(3, 4)});
  const History hb = history_of({vec2(0, 0), vec2(0, 0)});
  EXPECT_EQ(discounted_distance(ha, 2, hb, 2, unwindowed(0.5)), 5.5);
  EXPECT_EQ(oracle_discounted(ha, 2, hb, 2, 0.5), 5.5);
}

TEST(DiscountedDistance, IdenticalSuffixesAreZero) {
  std::mt19937_64 gen(5);
  const History h = pcnsm::testing::random_history(gen, 3, 20, 2);
  for (TimeIndex t = 1; t <= h.size(); ++t)
    EXPECT_EQ(discounted_distance(h, t, t, unwindowed(0.8)), 0.0);
}

TEST(DiscountedDistance, LambdaZeroIsNewestEuclidean) {
  std::mt19937_64 gen(9);
  const History h = pcnsm::testing::random_history(gen, 4, 15, 2);
  MetricSpec s = make_discounted_metric(0.0, 4.0, 1e-6);
  EXPECT_EQ(s.window, 1u);
  for (TimeIndex t = 1; t <= h.size(); ++t)
    for (TimeIndex u = 1; u <= h.size(); ++u)
      ASSERT_EQ(discounted_distance(h, t, u, s),
                (h.observation(t) - h.observation(u)).norm());
}

TEST(DiscountedDistance, UnequalLengthsUseSharedSuffix) {
  const History longer = history_of({scalar(100), scalar(100), scalar(1), scalar(2)});
  const History shorter = history_of({scalar(0), scalar(0)});
  // Only two terms exist on the shorter side: |1-0| * 0.5 + |2-0|.
  EXPECT_EQ(discounted_distance(longer, 4, shorter, 2, unwindowed(0.5)), 2.5);
  const History wide = history_of({vec2(0, 0)});
  EXPECT_THROW(discounted_distance(longer, 1, wide, 1, unwindowed(0.5)),
               std::invalid_argument);
}

TEST(DiscountedDistance, MatchesTermwiseOracle) {
  std::mt19937_64 gen(17);
  for (int round = 0; round < 200; ++round) {
    const Eigen::Index dim = 1 + round % 5;
    const History a = pcnsm::testing::random_history(gen, dim, 1 + gen() % 30, 3);
    const History b = pcnsm::testing::random_history(gen, dim, 1 + gen() % 30, 3);
    const double lambda = (gen() % 100) / 100.0;
    const MetricSpec spec = make_discounted_metric(lambda, 2.0 * std::sqrt(dim), 1e-6);
    const TimeIndex t = 1 + gen() % a.size(), u = 1 + gen() % b.size();
    const double got = discounted_distance(a, t, b, u, spec);
    const double want = oracle_discounted(a, t, b, u, lambda, spec.window);
    ASSERT_NEAR(got, want, 1e-12 * (1.0 + want));
  }
}

TEST(DiscountedDistance, BoundedVariantIsExactOrInfinite) {
  std::mt19937_64 gen(23);
  const History h = pcnsm::testing::random_history(gen, 3, 60, 2);
  const MetricSpec spec = make_discounted_metric(0.8, 2.0 * std::sqrt(3.0), 1e-6);
  for (TimeIndex t = 1; t <= h.size(); ++t) {
    const double full = discounted_distance(h, t, h.size(), spec);
    EXPECT_EQ(discounted_distance_bounded(h, t, h.size(), spec, full * 2 + 1), full);
    if (full > 0.0)
      EXPECT_TRUE(std::isinf(discounted_distance_bounded(h, t, h.size(), spec, full * 0.5)));
    EXPECT_EQ(history_distance(h, t, h.size(), spec), full);
  }
}

TEST(DeriveWindow, Examples) {
  EXPECT_EQ(derive_window(0.0, 1.0, 1e-6), 1u);
  EXPECT_EQ(derive_window(0.5, 1.0, 2.0), 1u);
  EXPECT_THROW(derive_window(1.0, 1.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(derive_window(-0.1, 1.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(derive_window(0.5, 0.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(derive_window(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST(DeriveWindow, SmallestWindowMeetingTheTailBound) {
  for (double lambda : {0.1, 0.5, 0.8, 0.9, 0.99})
    for (double bound : {0.5, 1.0, std::sqrt(11.0)})
      for (double tol : {1e-2, 1e-6, 1e-9}) {
        const std::size_t w = derive_window(lambda, bound, tol);
        auto tail = [&](std::size_t n) {
          return std::pow(lambda, static_cast<double>(n)) * bound / (1.0 - lambda);
        };
        EXPECT_LE(tail(w), tol);
        if (w > 1)
          EXPECT_GT(tail(w - 1), tol);
      }
}

TEST(DeriveWindow, GrowsAsToleranceShrinks) {
  EXPECT_LT(derive_window(0.8, 1.0, 1e-3), derive_window(0.8, 1.0, 1e-9));
  EXPECT_LE(derive_window(0.8, 1.0, 1e-9), derive_window(0.8, 1.0, 1e-12));
}

TEST(MetricSpec, Validation) {
  EXPECT_NO_THROW(make_discounted_metric(0.8, 1.0, 1e-6).validate(1e-6));
  MetricSpec s = make_discounted_metric(0.8, 1.0, 1e-6);
  s.window = 2;
  EXPECT_THROW(s.validate(1e-6), std::invalid_argument);
  s.window = 0;
  EXPECT_THROW(s.validate(1e-6), std::invalid_argument);
  EXPECT_NO_THROW(make_match_length_metric().validate(1e-6));
}
