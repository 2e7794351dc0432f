// Copyright 2026 The regret-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regret_audit/mechanism.hpp"

#include <vector>

#include <gtest/gtest.h>

#include "regret_audit/builtin_mechanisms.hpp"
#include "regret_audit/errors.hpp"
#include "regret_audit/grid.hpp"
#include "regret_audit/valuation.hpp"

namespace regret_audit {
namespace {

TEST(BidProfile, RejectsOutOfRangeAndWrongSize) {
  EXPECT_THROW(BidProfile({2, 2}, {0.1, 0.2, 0.3}), InvalidInput);
  EXPECT_THROW(BidProfile({1, 2}, {0.1, 1.2}), InvalidInput);
  EXPECT_THROW(BidProfile({0, 2}), InvalidInput);
  BidProfile p({1, 2});
  EXPECT_THROW(p.set(0, 0, -0.1), InvalidInput);
  EXPECT_THROW(p.set_row(0, std::vector<double>{0.5}), InvalidInput);
}

TEST(SecondPrice, TextbookSingleItem) {
  const auto mech = make_second_price({2, 1});
  const Outcome out = mech->run(BidProfile({2, 1}, {0.8, 0.5}));
  EXPECT_EQ(out.allocation(0, 0), 1.0);
  EXPECT_EQ(out.allocation(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(out.payments.pay[0], 0.5);
  EXPECT_EQ(out.payments.pay[1], 0.0);
}

TEST(SecondPrice, UtilityOfWinner) {
  const auto mech = make_second_price({2, 1});
  const BidProfile bids({2, 1}, {0.8, 0.5});
  const std::vector<double> v{0.8};
  EXPECT_DOUBLE_EQ(utility(*mech, v, bids, 0), 0.3);
}

TEST(SecondPrice, AllZeroTieGoesToLowestIndex) {
  const auto mech = make_second_price({3, 2});
  const Outcome out = mech->run(BidProfile({3, 2}));
  EXPECT_EQ(out.allocation(0, 0), 1.0);
  EXPECT_EQ(out.allocation(0, 1), 1.0);
  EXPECT_EQ(out.payments.pay[0], 0.0);
}

TEST(SecondPrice, SingleBidderPaysNothing) {
  const auto mech = make_second_price({1, 2});
  const Outcome out = mech->run(BidProfile({1, 2}, {0.4, 0.9}));
  EXPECT_EQ(out.allocation(0, 0), 1.0);
  EXPECT_EQ(out.payments.pay[0], 0.0);
}

TEST(FirstPrice, PerItemWinnersPayOwnBid) {
  const auto mech = make_per_item_first_price({2, 2});
  const Outcome out = mech->run(BidProfile({2, 2}, {0.6, 0.2, 0.3, 0.9}));
  EXPECT_EQ(out.allocation(0, 0), 1.0);
  EXPECT_EQ(out.allocation(1, 1), 1.0);
  EXPECT_EQ(out.allocation(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(out.payments.pay[0], 0.6);
  EXPECT_DOUBLE_EQ(out.payments.pay[1], 0.9);
}

TEST(Utility, ZeroValuationZeroPaymentIsZero) {
  const auto mech = make_second_price({2, 2});
  const BidProfile bids({2, 2}, {0.0, 0.0, 0.3, 0.4});
  EXPECT_EQ(utility(*mech, std::vector<double>{0.0, 0.0}, bids, 0), 0.0);
}

TEST(Utility, DimensionMismatchThrows) {
  const auto mech = make_second_price({2, 2});
  EXPECT_THROW(utility(*mech, std::vector<double>{0.5}, BidProfile({2, 2}), 0), InvalidInput);
  EXPECT_THROW(utility(*mech, std::vector<double>{0.5, 0.5}, BidProfile({2, 3}), 0), InvalidInput);
  EXPECT_THROW(utility(*mech, std::vector<double>{0.5, 0.5}, BidProfile({2, 2}), 2), InvalidInput);
  EXPECT_THROW(mech->run(BidProfile({3, 2})), InvalidInput);
}

TEST(Mechanism, CounterIncrementsOncePerRun) {
  const auto mech = make_per_item_first_price({2, 2});
  const BidProfile bids({2, 2}, {0.6, 0.2, 0.3, 0.9});
  EXPECT_EQ(mech->evaluations(), 0u);
  mech->run(bids);
  Outcome out;
  mech->run(bids, out);
  EXPECT_EQ(mech->evaluations(), 2u);
  utility(*mech, bids.row(0), bids, 0);
  EXPECT_EQ(mech->evaluations(), 3u);
}

TEST(Mechanism, BuiltinsArePureFeasibleAndNonnegative) {
  for (const AuctionSetting setting : {AuctionSetting{1, 3}, AuctionSetting{2, 2}, AuctionSetting{4, 3}}) {
    for (const auto& mech : {make_second_price(setting), make_per_item_first_price(setting)}) {
      for (std::uint64_t s = 0; s < 200; ++s) {
        const BidProfile bids = sample_valuations({}, setting, s, 99);
        const Outcome a = mech->run(bids);
        const Outcome b = mech->run(bids);
        ASSERT_EQ(a.allocation.probs, b.allocation.probs);
        ASSERT_EQ(a.payments.pay, b.payments.pay);
        ASSERT_NO_THROW(check_outcome(a));
      }
    }
  }
}

TEST(Gradient, ConstantMechanismHasZeroGradient) {
  Outcome fixed({2, 2});
  fixed.allocation(0, 0) = 0.5;
  fixed.allocation(1, 1) = 0.25;
  fixed.payments.pay = {0.1, 0.2};
  const auto mech = make_constant({2, 2}, fixed);
  const BidProfile bids({2, 2}, {0.3, 0.7, 0.2, 0.1});
  const auto g = utility_and_gradient(*mech, bids.row(0), bids, 0);
  EXPECT_EQ(g.gradient, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(g.evaluations, 5u);
  EXPECT_DOUBLE_EQ(g.utility, 0.3 * 0.5 - 0.1);
}

TEST(Gradient, SecondPriceWinnerAwayFromThresholdIsFlat) {
  const auto mech = make_second_price({2, 2});
  const BidProfile bids({2, 2}, {0.8, 0.6, 0.3, 0.2});
  EXPECT_EQ(utility_gradient(*mech, bids.row(0), bids, 0), (std::vector<double>{0.0, 0.0}));
}

TEST(Gradient, FirstPriceWinnerSlopeIsMinusOne) {
  const auto mech = make_per_item_first_price({2, 1});
  const BidProfile bids({2, 1}, {0.8, 0.3});
  const auto g = utility_gradient(*mech, bids.row(0), bids, 0);
  EXPECT_NEAR(g[0], -1.0, 1e-9);
}

TEST(Gradient, BoundaryUsesOneSidedDifference) {
  const auto mech = make_per_item_first_price({2, 1});
  const BidProfile bids({2, 1}, {1.0, 0.3});
  const auto g = utility_gradient(*mech, std::vector<double>{1.0}, bids, 0);
  EXPECT_NEAR(g[0], -1.0, 1e-9);
}

TEST(Dsic, SecondPriceTruthfulDominatesGridMisreports) {
  const GridSpec grid(20);
  for (const AuctionSetting setting : {AuctionSetting{2, 1}, AuctionSetting{3, 2}}) {
    const auto mech = make_second_price(setting);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const BidProfile truth = sample_valuations({}, setting, s, 5);
      for (std::size_t i = 0; i < setting.bidders; ++i) {
        const double truthful = utility(*mech, truth.row(i), truth, i);
        BidProfile bids = truth;
        for (std::size_t j = 0; j < setting.items; ++j) {
          for (double b : grid.points()) {
            bids.set(i, j, b);
            ASSERT_GE(truthful, utility(*mech, truth.row(i), bids, i));
          }
          bids.set(i, j, truth(i, j));
        }
      }
    }
  }
}

TEST(CheckOutcome, FlagsViolations) {
  Outcome out({2, 1});
  out.allocation(0, 0) = 0.7;
  out.allocation(1, 0) = 0.4;
  EXPECT_THROW(check_outcome(out), InvalidInput);
  out.allocation(1, 0) = 0.3;
  EXPECT_NO_THROW(check_outcome(out));
  out.payments.pay[1] = -0.01;
  EXPECT_THROW(check_outcome(out), InvalidInput);
}

}  // namespace
}  // namespace regret_audit
