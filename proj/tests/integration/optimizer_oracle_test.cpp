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

// Slow comparisons of the continuous optimizers against the grid oracle on
// the seeded neural mechanism.

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "regret_audit/misreport_optimizer.hpp"
#include "regret_audit/neural_mechanism.hpp"
#include "regret_audit/regret_oracle.hpp"
#include "regret_audit/valuation.hpp"

namespace regret_audit {
namespace {

constexpr AuctionSetting kSetting{2, 2};

double tolerance(double reference, double absolute) {
  return std::max(0.02 * std::abs(reference), absolute);
}

TEST(OptimizerVsOracle, ConvergedPgaMatchesGridOracle) {
  const auto mech = load_neural_mechanism(generate_neural_spec(kSetting, 16, 42));
  const GridSpec grid(50);
  const PgaConfig converged{0.1, 200, 2000};
  const PgaConfig weak{0.1, 1, 50};
  double weak_sum = 0.0;
  double converged_sum = 0.0;
  int outside = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const BidProfile truth = sample_valuations({}, kSetting, s, 7);
    for (std::size_t i = 0; i < kSetting.bidders; ++i) {
      const double oracle = exhaustive_regret(*mech, truth, i, grid).value;
      const double pga = random_restart_pga(*mech, truth, i, converged, s * 2 + i).value;
      const double tol = tolerance(oracle, 2.0 / 50.0);
      if (std::abs(pga - oracle) > tol) {
        ++outside;
        ADD_FAILURE() << "sample " << s << " bidder " << i << ": pga " << pga << " oracle "
                      << oracle;
      }
      converged_sum += pga;
      weak_sum += random_restart_pga(*mech, truth, i, weak, s * 2 + i).value;
    }
  }
  EXPECT_EQ(outside, 0);
  EXPECT_LE(weak_sum, converged_sum);
}

TEST(OptimizerVsOracle, GuidedMatchesConvergedPgaCheaply) {
  const auto mech = load_neural_mechanism(generate_neural_spec(kSetting, 16, 42));
  const GridSpec grid(1000);
  const PortfolioConfig guided_cfg{0, 0.0, 0.0, {0.1, 1, 200}};
  const PgaConfig reference_cfg{0.1, 1000, 2000};
  for (std::uint64_t s = 0; s < 8; ++s) {
    const BidProfile truth = sample_valuations({}, kSetting, s, 7);
    for (std::size_t i = 0; i < kSetting.bidders; ++i) {
      const auto guided = guided_refinement(*mech, truth, i, grid, guided_cfg, s);
      const auto reference = random_restart_pga(*mech, truth, i, reference_cfg, s);
      EXPECT_NEAR(guided.value, reference.value, tolerance(reference.value, 2e-3))
          << "sample " << s << " bidder " << i;
      EXPECT_LT(guided.gradient_steps * 20, reference.gradient_steps);
    }
  }
}

TEST(OptimizerVsOracle, GuidedStartsAtCombinatorialCandidateAndImproves) {
  const auto mech = load_neural_mechanism(generate_neural_spec(kSetting, 16, 42));
  const GridSpec grid(50);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const BidProfile truth = sample_valuations({}, kSetting, s, 7);
    const ItemScan scan = scan_items(*mech, truth, 0, grid);
    BidProfile at_start = truth;
    at_start.set_row(0, scan.argmax);
    const double start_utility = utility(*mech, truth.row(0), at_start, 0);
    const auto r = pga_single(*mech, truth, 0, scan.argmax, 0.1, 200);
    EXPECT_GE(r.best_utility, start_utility);
    const double oracle = exhaustive_regret(*mech, truth, 0, grid).value;
    const double refined = std::max(0.0, r.best_utility - scan.truthful_utility);
    EXPECT_GE(refined, oracle - tolerance(oracle, 2.0 / 50.0)) << "sample " << s;
  }
}

}  // namespace
}  // namespace regret_audit
