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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regret_audit/mechanism.hpp"

namespace regret_audit {

enum class DistributionKind { uniform01, truncated_normal_context };

std::string to_string(DistributionKind kind);
DistributionKind distribution_from_string(const std::string& text);

/// Valuation prior. For the contextual kind each bidder i has a context
/// x_i and each item j a context y_j, both in 1..10, and
/// v_ij ~ N(((x_i + y_j) mod 10 + 1) / 11, std^2) truncated to [0, 1].
/// When contexts are not given they are drawn uniformly per sample.
struct ValuationDistribution {
  DistributionKind kind = DistributionKind::uniform01;
  std::optional<std::vector<int>> x_contexts;
  std::optional<std::vector<int>> y_contexts;
  double std = 0.05;

  void validate(const AuctionSetting& setting) const;

  friend bool operator==(const ValuationDistribution&, const ValuationDistribution&) = default;
};

/// Mean of the untruncated normal for context pair (x, y).
double context_mean(int x, int y);

/// Draws profile `sample_index` from Stream(seed).child(kValuations).child(sample_index).
/// Truncated normals are drawn by rejection: out-of-range draws are redrawn.
BidProfile sample_valuations(const ValuationDistribution& dist, const AuctionSetting& setting,
                             std::uint64_t sample_index, std::uint64_t seed);

}  // namespace regret_audit
