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

#include "regret_audit/builtin_mechanisms.hpp"

#include <algorithm>

#include "regret_audit/errors.hpp"

namespace regret_audit {

namespace {

enum class PriceRule { second, first };

class PerItemAuction final : public Mechanism {
 public:
  PerItemAuction(AuctionSetting setting, PriceRule rule) : Mechanism(setting), rule_(rule) {}

  std::string name() const override {
    return rule_ == PriceRule::second ? "second_price" : "first_price";
  }
  bool separable() const override { return true; }

 protected:
  void evaluate(const BidProfile& bids, Outcome& out) const override {
    const std::size_t n = bids.bidders();
    const std::size_t m = bids.items();
    std::fill(out.allocation.probs.begin(), out.allocation.probs.end(), 0.0);
    std::fill(out.payments.pay.begin(), out.payments.pay.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t winner = 0;
      double best = bids(0, j);
      double runner_up = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        const double b = bids(i, j);
        if (b > best) {
          runner_up = best;
          best = b;
          winner = i;
        } else if (b > runner_up) {
          runner_up = b;
        }
      }
      out.allocation(winner, j) = 1.0;
      out.payments.pay[winner] += rule_ == PriceRule::second ? runner_up : best;
    }
  }

 private:
  PriceRule rule_;
};

class ConstantMechanism final : public Mechanism {
 public:
  ConstantMechanism(AuctionSetting setting, Outcome fixed)
      : Mechanism(setting), fixed_(std::move(fixed)) {
    if (fixed_.allocation.bidders != setting.bidders || fixed_.allocation.items != setting.items) {
      throw InvalidInput("constant outcome does not match setting " + to_string(setting));
    }
    check_outcome(fixed_);
  }

  std::string name() const override { return "constant"; }
  bool separable() const override { return true; }

 protected:
  void evaluate(const BidProfile&, Outcome& out) const override { out = fixed_; }

 private:
  Outcome fixed_;
};

}  // namespace

std::unique_ptr<Mechanism> make_second_price(AuctionSetting setting) {
  return std::make_unique<PerItemAuction>(setting, PriceRule::second);
}

std::unique_ptr<Mechanism> make_per_item_first_price(AuctionSetting setting) {
  return std::make_unique<PerItemAuction>(setting, PriceRule::first);
}

std::unique_ptr<Mechanism> make_constant(AuctionSetting setting, Outcome fixed) {
  return std::make_unique<ConstantMechanism>(setting, std::move(fixed));
}

}  // namespace regret_audit
