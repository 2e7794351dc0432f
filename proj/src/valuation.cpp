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

#include "regret_audit/valuation.hpp"

#include <cmath>

#include "regret_audit/errors.hpp"
#include "regret_audit/rng.hpp"

namespace regret_audit {

namespace {

constexpr int kMinContext = 1;
constexpr int kMaxContext = 10;

void check_contexts(const std::optional<std::vector<int>>& contexts, std::size_t expected,
                    const char* field) {
  if (!contexts) return;
  if (contexts->size() != expected) {
    throw InvalidInput(std::string(field) + " has " + std::to_string(contexts->size()) +
                       " entries, expected " + std::to_string(expected));
  }
  for (int c : *contexts) {
    if (c < kMinContext || c > kMaxContext) {
      throw InvalidInput(std::string(field) + " entry " + std::to_string(c) + " outside 1..10");
    }
  }
}

double truncated_normal(Xoshiro256& rng, double mean, double stddev) {
  for (;;) {
    const double v = rng.normal(mean, stddev);
    if (v >= 0.0 && v <= 1.0) return v;
  }
}

}  // namespace

std::string to_string(DistributionKind kind) {
  return kind == DistributionKind::uniform01 ? "uniform01" : "ctxnormal";
}

DistributionKind distribution_from_string(const std::string& text) {
  if (text == "uniform01" || text == "uniform") return DistributionKind::uniform01;
  if (text == "ctxnormal" || text == "truncated_normal_context") {
    return DistributionKind::truncated_normal_context;
  }
  throw InvalidInput("unknown valuation distribution '" + text + "'");
}

void ValuationDistribution::validate(const AuctionSetting& setting) const {
  setting.validate();
  if (kind == DistributionKind::uniform01) return;
  if (!(std > 0.0) || !std::isfinite(std)) throw InvalidInput("valuation std must be > 0");
  check_contexts(x_contexts, setting.bidders, "x_contexts");
  check_contexts(y_contexts, setting.items, "y_contexts");
}

double context_mean(int x, int y) { return static_cast<double>((x + y) % 10 + 1) / 11.0; }

BidProfile sample_valuations(const ValuationDistribution& dist, const AuctionSetting& setting,
                             std::uint64_t sample_index, std::uint64_t seed) {
  dist.validate(setting);
  const std::size_t n = setting.bidders;
  const std::size_t m = setting.items;
  const Stream stream = Stream(seed).child(stream_tag::kValuations).child(sample_index);
  Xoshiro256 rng = stream.generator();
  std::vector<double> values(n * m);

  if (dist.kind == DistributionKind::uniform01) {
    for (double& v : values) v = rng.uniform();
    return BidProfile(setting, std::move(values));
  }

  std::vector<int> x(n);
  std::vector<int> y(m);
  Xoshiro256 context_rng = stream.child(stream_tag::kContexts).generator();
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = dist.x_contexts ? (*dist.x_contexts)[i]
                           : static_cast<int>(context_rng.uniform_int(kMinContext, kMaxContext));
  }
  for (std::size_t j = 0; j < m; ++j) {
    y[j] = dist.y_contexts ? (*dist.y_contexts)[j]
                           : static_cast<int>(context_rng.uniform_int(kMinContext, kMaxContext));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      values[i * m + j] = truncated_normal(rng, context_mean(x[i], y[j]), dist.std);
    }
  }
  return BidProfile(setting, std::move(values));
}

}  // namespace regret_audit
