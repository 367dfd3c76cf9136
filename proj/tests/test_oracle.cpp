#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "flexauc/channelization.hpp"
#include "flexauc/oracle.hpp"

using namespace flexauc;
using namespace flexauc::oracle;

namespace {

using Rows = std::vector<std::vector<double>>;

BidMatrix triple_fixture() { return BidMatrix(Rows{{5, 3}, {4, 1}, {2, 1}}); }

}  // namespace

TEST(CompositionCount, SmallCases) {
  EXPECT_EQ(composition_count(1, 5), 1.0);
  EXPECT_EQ(composition_count(2, 2), 3.0);
  EXPECT_EQ(composition_count(3, 2), 6.0);
  EXPECT_EQ(composition_count(5, 6), 210.0);
}

TEST(BruteForceWelfare, Examples) {
  const auto r = brute_force_welfare(BidMatrix(Rows{{5, 3}, {4, 1}}), 2);
  EXPECT_EQ(r.welfare, 9.0);
  EXPECT_EQ(r.witness.counts, (std::vector<std::size_t>{1, 1}));

  const auto single = brute_force_welfare(BidMatrix(Rows{{4, 2, 1}}), 3);
  EXPECT_EQ(single.witness.counts, (std::vector<std::size_t>{3}));
  EXPECT_EQ(single.welfare, 7.0);
}

TEST(BruteForceWelfare, Guards) {
  Rng rng(1);
  const auto big = random_bid_matrix(20, 20, rng);
  EXPECT_THROW(brute_force_welfare(big, 20), oracle_scale_error);
  EXPECT_THROW(brute_force_welfare(triple_fixture(), 0), domain_error);
  EXPECT_THROW(brute_force_welfare(triple_fixture(), 7), domain_error);
}

TEST(BruteForceWelfare, EqualsWinnerDetermination) {
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto bids = random_bid_matrix(n, c, rng, 100.0, rng.bernoulli(0.5));
    const auto a = determine_winners(bids, c).allocation;
    ASSERT_EQ(allocated_value(bids, a), brute_force_welfare(bids, c).welfare) << "instance " << t;
  }
}

TEST(RandomBidMatrix, ShapeAndMonotone) {
  Rng rng(2);
  const auto m = random_bid_matrix(4, 6, rng, 10.0, true);
  EXPECT_EQ(m.wsp_count(), 4u);
  EXPECT_EQ(m.channel_count(), 6u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_EQ(m(i, k), std::floor(m(i, k)));
      EXPECT_LE(m(i, k), 10.0);
    }
  }
}

TEST(PerturbBids, Contract) {
  Rng rng(3);
  const BidVector truthful{{9, 7, 7, 3, 0}};
  for (int t = 0; t < 1000; ++t) {
    const auto p = perturb_bids(truthful, rng);
    ASSERT_EQ(p.size(), truthful.size());
    ASSERT_TRUE(p.is_non_increasing());
    ASSERT_NE(p, truthful);
    for (const double v : p.values) ASSERT_GE(v, 0.0);
  }
}

TEST(PerturbBids, DeterministicForSeed) {
  const BidVector truthful{{9, 7, 3}};
  Rng a(4), b(4);
  EXPECT_EQ(perturb_bids(truthful, a), perturb_bids(truthful, b));
}

TEST(PerturbBids, LiftsAllZeroVector) {
  Rng rng(5);
  const BidVector zero{{0, 0, 0}};
  const auto p = perturb_bids(zero, rng);
  EXPECT_NE(p, zero);
  EXPECT_TRUE(p.is_non_increasing());
}

TEST(PerturbBids, RejectsIncreasingInput) {
  Rng rng(6);
  EXPECT_THROW(perturb_bids(BidVector{{1, 2}}, rng), domain_error);
}

TEST(Classify, Tolerance) {
  EXPECT_EQ(classify(1.0, 1.0), Relation::equal);
  EXPECT_EQ(classify(1.0 + 1e-10, 1.0), Relation::equal);
  EXPECT_EQ(classify(1.0 + 1e-8, 1.0), Relation::greater);
  EXPECT_EQ(classify(1.0 - 1e-8, 1.0), Relation::less);
  EXPECT_EQ(to_string(Relation::greater), "greater");
}

TEST(TruthfulnessTrial, LosingAValuableChannelIsWorse) {
  const auto bids = triple_fixture();
  for (const auto m : {Mechanism::vcg, Mechanism::uniform, Mechanism::partial_uniform}) {
    const auto t = truthfulness_trial(bids, 0, m, BidVector{{1.5, 1.5}});
    EXPECT_EQ(t.relation, Relation::less) << to_string(m);
    EXPECT_EQ(t.truthful_channels, 1u);
    EXPECT_EQ(t.deviant_channels, 0u);
    EXPECT_EQ(t.deviant_utility, 0.0);
  }
}

TEST(TruthfulnessTrial, IrrelevantChangeIsEqual) {
  const auto bids = triple_fixture();
  for (const auto m : {Mechanism::vcg, Mechanism::uniform, Mechanism::partial_uniform}) {
    const auto t = truthfulness_trial(bids, 0, m, BidVector{{6, 3}});
    EXPECT_EQ(t.relation, Relation::equal) << to_string(m);
    EXPECT_EQ(t.truthful_utility, 3.0);
  }
}

TEST(TruthfulnessTrial, UtilityUsesTrueValues) {
  // Overbidding to win a second channel: value counted at the true 3, not
  // the submitted 4.5.
  const auto bids = triple_fixture();
  const auto t = truthfulness_trial(bids, 0, Mechanism::vcg, BidVector{{5, 4.5}});
  EXPECT_EQ(t.deviant_channels, 2u);
  // Pays W2's 4 and W3's 2 for values 5 + 3.
  EXPECT_EQ(t.deviant_utility, 2.0);
  EXPECT_EQ(t.relation, Relation::less);
}

TEST(TruthfulnessTrial, VcgResistsDemandReduction) {
  const BidMatrix bids(Rows{{10, 6}, {5, 0}, {1, 0}});
  const auto t = truthfulness_trial(bids, 0, Mechanism::vcg, BidVector{{10, 0}});
  EXPECT_EQ(t.truthful_utility, 10.0);
  EXPECT_EQ(t.deviant_utility, 9.0);
  EXPECT_EQ(t.relation, Relation::less);
}

// Uniform and partial-uniform prices ignore the winner's own effect on
// which WSPs lose, so dropping a marginal bid can lower the price paid on
// the channel it keeps.
TEST(TruthfulnessTrial, UniformPricesRewardDemandReduction) {
  const BidMatrix bids(Rows{{10, 6}, {5, 0}, {1, 0}});
  for (const auto m : {Mechanism::uniform, Mechanism::partial_uniform}) {
    const auto t = truthfulness_trial(bids, 0, m, BidVector{{10, 0}});
    EXPECT_EQ(t.truthful_channels, 2u);
    EXPECT_EQ(t.truthful_utility, 6.0) << to_string(m);
    EXPECT_EQ(t.deviant_channels, 1u);
    EXPECT_EQ(t.deviant_utility, 9.0) << to_string(m);
    EXPECT_EQ(t.relation, Relation::greater);
  }
}

TEST(TruthfulnessTrial, VcgNeverGainsOnRandomInstances) {
  Rng rng(32);
  for (int t = 0; t < 3000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto bids = random_bid_matrix(n, c, rng, 100.0, rng.bernoulli(0.5));
    const auto wsp = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
    const auto trial = truthfulness_trial(bids, wsp, Mechanism::vcg, rng);
    ASSERT_NE(trial.relation, Relation::greater) << instance_json(bids, c).dump();
  }
}

TEST(RationalityViolations, CleanOnFixtures) {
  const auto bids = triple_fixture();
  for (const auto m : {Mechanism::vcg, Mechanism::uniform, Mechanism::partial_uniform, Mechanism::onebid}) {
    EXPECT_TRUE(rationality_violations(bids, run_auction(bids, 2, m)).empty()) << to_string(m);
  }
}

TEST(RationalityViolations, FlagsBadOutcomes) {
  const auto bids = triple_fixture();
  auto out = run_auction(bids, 2, Mechanism::vcg);
  out.payments = {6, 3, 1};  // W1 over its bid and above b^s_3; loser W3 charged
  const auto v = rationality_violations(bids, out);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].what, "payment exceeds winning bids");
  EXPECT_EQ(v[1].what, "unit price exceeds b^s_{C+1}");
  EXPECT_EQ(v[2].what, "loser charged");
}

TEST(RationalityViolations, NoneOnRandomInstances) {
  Rng rng(33);
  for (int t = 0; t < 3000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 10));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 10));
    const auto bids = random_bid_matrix(n, c, rng);
    for (const auto m : {Mechanism::vcg, Mechanism::uniform, Mechanism::partial_uniform, Mechanism::onebid}) {
      if (m == Mechanism::uniform && c >= n) continue;
      ASSERT_TRUE(rationality_violations(bids, run_auction(bids, c, m)).empty());
    }
  }
}

TEST(DominanceCheck, Examples) {
  const auto r = dominance_check(triple_fixture(), 2);
  EXPECT_EQ(r.vcg, 5.0);
  ASSERT_TRUE(r.uniform.has_value());
  EXPECT_EQ(*r.uniform, 4.0);
  EXPECT_EQ(r.partial, 5.0);

  const BidMatrix flat(Rows(5, std::vector<double>(3, 2.0)));
  const auto f = dominance_check(flat, 3);
  EXPECT_EQ(f.vcg, f.partial);
  EXPECT_EQ(*f.uniform, f.partial);

  const auto no_uniform = dominance_check(BidMatrix(Rows{{5, 3}, {4, 1}}), 2);
  EXPECT_FALSE(no_uniform.uniform.has_value());
}

TEST(DominanceCheck, HoldsOnRandomInstances) {
  Rng rng(34);
  for (int t = 0; t < 3000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 10));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 10));
    const auto bids = random_bid_matrix(n, c, rng, 10.0, rng.bernoulli(0.5));
    ASSERT_NO_THROW(dominance_check(bids, c)) << instance_json(bids, c).dump();
  }
}

TEST(DominanceViolation, CarriesCounterexample) {
  const DominanceViolation e("x", instance_json(triple_fixture(), 2));
  EXPECT_EQ(e.counterexample().at("channels"), 2);
  EXPECT_EQ(e.counterexample().at("bids").size(), 3u);
}

TEST(PriceGridCheck, Examples) {
  const auto grid = default_price_ratios();
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.1);
  EXPECT_DOUBLE_EQ(grid.back(), 2.0);
  const std::vector<double> only = {1.0};
  EXPECT_EQ(price_grid_check(0.3, 1e9, 2, 1e7, only), 1.0);
  const std::vector<double> coarse = {0.5, 1.0, 1.5};
  ASSERT_EQ(optimal_price(0.3, 1e10, 2, 1e7).regime, PriceRegime::scarce);
  EXPECT_EQ(price_grid_check(0.3, 1e10, 2, 1e7, coarse), 1.0);
  const std::vector<double> missing = {0.5, 1.5};
  EXPECT_THROW(price_grid_check(0.3, 1e10, 2, 1e7, missing), domain_error);
}

TEST(PriceGridCheck, OptimalOnRandomInstances) {
  Rng rng(35);
  const auto grid = default_price_ratios();
  for (int t = 0; t < 2000; ++t) {
    const double alpha = rng.uniform(0.2, 0.4);
    const double g = std::exp(rng.uniform(std::log(1e7), std::log(1e11)));
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 20));
    const double b = rng.uniform(1e5, 5e7);
    ASSERT_EQ(price_grid_check(alpha, g, k, b, grid), 1.0);
  }
}

TEST(TightnessInstance, Shape) {
  const auto b = tightness_instance(4, 2);
  EXPECT_EQ(b(0, 0), 10.0);
  EXPECT_EQ(b(1, 0), 10.0);
  EXPECT_EQ(b(2, 0), 5.0);
  EXPECT_EQ(b(3, 0), 1.0);
  EXPECT_THROW(tightness_instance(2, 2), domain_error);
}
