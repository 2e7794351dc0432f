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

#include <memory>

#include "regret_audit/mechanism.hpp"

namespace regret_audit {

/// Per-item second-price (Vickrey) auction. Highest bid wins each item, ties
/// to the lowest bidder index; the winner pays the second-highest bid (0 when
/// n = 1). DSIC, so its regret is zero.
std::unique_ptr<Mechanism> make_second_price(AuctionSetting setting);

/// Per-item first-price auction: same winner rule, the winner pays its own bid.
std::unique_ptr<Mechanism> make_per_item_first_price(AuctionSetting setting);

/// Ignores the bids and always returns `fixed`. Useful as a zero-gradient
/// fixture.
std::unique_ptr<Mechanism> make_constant(AuctionSetting setting, Outcome fixed);

}  // namespace regret_audit
