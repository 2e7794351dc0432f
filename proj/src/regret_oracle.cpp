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

#include "regret_audit/regret_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "regret_audit/errors.hpp"
#include "regret_audit/parallel.hpp"

namespace regret_audit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_args(const Mechanism& mech, const BidProfile& profile, std::size_t bidder) {
  if (profile.setting() != mech.setting()) {
    throw InvalidInput("profile is " + to_string(profile.setting()) + ", mechanism expects " +
                       to_string(mech.setting()));
  }
  if (bidder >= profile.bidders()) throw InvalidInput("bidder index out of range");
}

bool row_on_grid(std::span<const double> row, const GridSpec& grid) {
  return std::all_of(row.begin(), row.end(), [&](double v) { return grid.contains(v); });
}

struct ChunkBest {
  double utility = -std::numeric_limits<double>::infinity();
  std::vector<double> row;
  std::uint64_t evaluations = 0;
};

// Rows whose first coordinate is axes[0][first], in lexicographic order.
ChunkBest scan_chunk(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                     std::span<const double> valuation,
                     const std::vector<std::vector<double>>& axes, std::size_t first) {
  const std::size_t m = profile.items();

  BidProfile work = profile;
  auto row = work.mutable_row(bidder);
  std::vector<std::size_t> index(m, 0);
  index[0] = first;
  for (std::size_t j = 0; j < m; ++j) row[j] = axes[j][index[j]];

  UtilityProbe probe(mech);
  ChunkBest best;
  for (;;) {
    const double u = probe(valuation, work, bidder);
    ++best.evaluations;
    if (u > best.utility) {
      best.utility = u;
      best.row.assign(row.begin(), row.end());
    }
    // Odometer over coordinates 1..m-1, last coordinate fastest.
    std::size_t j = m;
    while (j > 1) {
      --j;
      if (++index[j] < axes[j].size()) {
        row[j] = axes[j][index[j]];
        break;
      }
      index[j] = 0;
      row[j] = axes[j][0];
      if (j == 1) return best;
    }
    if (m == 1) return best;
  }
}

std::vector<std::vector<double>> scan_axes(std::span<const double> valuation,
                                           const GridSpec& grid, ExhaustiveScan scan) {
  std::vector<std::vector<double>> axes(valuation.size(), grid.points());
  if (scan == ExhaustiveScan::truthful_coordinates) {
    for (std::size_t j = 0; j < valuation.size(); ++j) {
      if (grid.contains(valuation[j])) continue;
      auto& axis = axes[j];
      axis.insert(std::upper_bound(axis.begin(), axis.end(), valuation[j]), valuation[j]);
    }
  }
  return axes;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::exhaustive: return "exhaustive";
    case Method::item: return "item";
    case Method::lower_bound: return "lower_bound";
    case Method::item_wise: return "item_wise";
    case Method::pga: return "pga";
    case Method::guided: return "guided";
  }
  return "unknown";
}

Method method_from_string(const std::string& text) {
  for (Method m : {Method::exhaustive, Method::item, Method::lower_bound, Method::item_wise,
                   Method::pga, Method::guided}) {
    if (text == to_string(m)) return m;
  }
  if (text == "lower-bound") return Method::lower_bound;
  if (text == "item-wise") return Method::item_wise;
  throw InvalidInput("unknown method '" + text + "'");
}

std::string to_string(ExhaustiveScan scan) {
  return scan == ExhaustiveScan::grid_rows ? "grid_rows" : "truthful_coordinates";
}

ExhaustiveScan exhaustive_scan_from_string(const std::string& text) {
  if (text == "grid_rows" || text == "grid-rows") return ExhaustiveScan::grid_rows;
  if (text == "truthful_coordinates" || text == "truthful-coordinates") {
    return ExhaustiveScan::truthful_coordinates;
  }
  throw InvalidInput("unknown exhaustive scan '" + text + "'");
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exponent) {
  std::uint64_t result = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result *= base;
  }
  return result;
}

bool better_misreport(double utility_a, std::span<const double> row_a, double utility_b,
                      std::span<const double> row_b) {
  if (utility_a != utility_b) return utility_a > utility_b;
  return std::lexicographical_compare(row_a.begin(), row_a.end(), row_b.begin(), row_b.end());
}

RegretEstimate exhaustive_regret(const Mechanism& mech, const BidProfile& profile,
                                 std::size_t bidder, const GridSpec& grid,
                                 const OracleOptions& options) {
  check_args(mech, profile, bidder);
  const auto start = Clock::now();
  const auto valuation = profile.row(bidder);
  const auto axes = scan_axes(valuation, grid, options.scan);
  std::uint64_t rows = 1;
  for (const auto& axis : axes) {
    rows = axis.size() != 0 && rows > std::numeric_limits<std::uint64_t>::max() / axis.size()
               ? std::numeric_limits<std::uint64_t>::max()
               : rows * axis.size();
  }
  if (rows > options.max_evaluations) throw BudgetExceeded(rows, options.max_evaluations);

  UtilityProbe probe(mech);
  const double truthful = probe(valuation, profile, bidder);

  std::vector<ChunkBest> chunks(axes[0].size());
  parallel_for(chunks.size(), options.threads, [&](std::size_t c) {
    chunks[c] = scan_chunk(mech, profile, bidder, valuation, axes, c);
  });

  RegretEstimate est;
  est.method = Method::exhaustive;
  est.bidder = bidder;
  est.mech_evals = 1;
  double best_utility = -std::numeric_limits<double>::infinity();
  std::vector<double> best_row;
  for (auto& chunk : chunks) {
    est.mech_evals += chunk.evaluations;
    // Chunks are in lexicographic order, so strict > keeps the smallest row.
    if (chunk.utility > best_utility) {
      best_utility = chunk.utility;
      best_row = std::move(chunk.row);
    }
  }
  if (options.scan == ExhaustiveScan::grid_rows && !row_on_grid(valuation, grid)) {
    const double u = probe(valuation, profile, bidder);
    ++est.mech_evals;
    if (better_misreport(u, valuation, best_utility, best_row)) {
      best_utility = u;
      best_row.assign(valuation.begin(), valuation.end());
    }
  }
  // No profitable deviation: truthful reporting is itself a maximizer.
  if (best_utility <= truthful) best_row.assign(valuation.begin(), valuation.end());
  est.value = std::max(0.0, best_utility - truthful);
  est.best_misreport = std::move(best_row);
  est.wall_seconds = seconds_since(start);
  return est;
}

ItemScan scan_items(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                    const GridSpec& grid) {
  check_args(mech, profile, bidder);
  const std::size_t m = profile.items();
  const auto valuation = profile.row(bidder);
  UtilityProbe probe(mech);

  ItemScan scan;
  scan.truthful_utility = probe(valuation, profile, bidder);
  scan.evaluations = 1;
  scan.best_utility.resize(m);
  scan.argmax.resize(m);
  scan.gain.resize(m);

  BidProfile work = profile;
  auto row = work.mutable_row(bidder);
  for (std::size_t j = 0; j < m; ++j) {
    const double truth = valuation[j];
    double best = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (double point : grid.points()) {
      row[j] = point;
      const double u = probe(valuation, work, bidder);
      ++scan.evaluations;
      if (u > best) {
        best = u;
        arg = point;
      }
    }
    if (!grid.contains(truth)) {
      row[j] = truth;
      const double u = probe(valuation, work, bidder);
      ++scan.evaluations;
      if (u > best || (u == best && truth < arg)) {
        best = u;
        arg = truth;
      }
    }
    row[j] = truth;
    scan.best_utility[j] = best;
    scan.argmax[j] = arg;
    scan.gain[j] = std::max(0.0, best - scan.truthful_utility);
  }
  return scan;
}

RegretEstimate item_regret(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                           std::size_t item, const GridSpec& grid) {
  check_args(mech, profile, bidder);
  if (item >= profile.items()) throw InvalidInput("item index out of range");
  const auto start = Clock::now();
  const auto valuation = profile.row(bidder);
  UtilityProbe probe(mech);

  RegretEstimate est;
  est.method = Method::item;
  est.bidder = bidder;
  est.item = item;
  const double truthful = probe(valuation, profile, bidder);
  est.mech_evals = 1;

  BidProfile work = profile;
  auto row = work.mutable_row(bidder);
  const double truth = valuation[item];
  double best = -std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (double point : grid.points()) {
    row[item] = point;
    const double u = probe(valuation, work, bidder);
    ++est.mech_evals;
    if (u > best) {
      best = u;
      arg = point;
    }
  }
  if (!grid.contains(truth)) {
    row[item] = truth;
    const double u = probe(valuation, work, bidder);
    ++est.mech_evals;
    if (u > best || (u == best && truth < arg)) {
      best = u;
      arg = truth;
    }
  }
  row[item] = best > truthful ? arg : truth;
  est.value = std::max(0.0, best - truthful);
  est.best_misreport = std::vector<double>(row.begin(), row.end());
  est.wall_seconds = seconds_since(start);
  return est;
}

RegretEstimate lower_bound_regret(const Mechanism& mech, const BidProfile& profile,
                                  std::size_t bidder, const GridSpec& grid) {
  const auto start = Clock::now();
  const ItemScan scan = scan_items(mech, profile, bidder, grid);
  const auto valuation = profile.row(bidder);

  std::size_t best_item = 0;
  for (std::size_t j = 1; j < scan.gain.size(); ++j) {
    if (scan.gain[j] > scan.gain[best_item]) best_item = j;
  }
  RegretEstimate est;
  est.method = Method::lower_bound;
  est.bidder = bidder;
  est.value = scan.gain[best_item];
  std::vector<double> deviation(valuation.begin(), valuation.end());
  if (est.value > 0.0) deviation[best_item] = scan.argmax[best_item];
  est.best_misreport = std::move(deviation);
  est.mech_evals = scan.evaluations;
  est.wall_seconds = seconds_since(start);
  return est;
}

RegretEstimate item_wise_regret(const Mechanism& mech, const BidProfile& profile,
                                std::size_t bidder, const GridSpec& grid) {
  const auto start = Clock::now();
  const ItemScan scan = scan_items(mech, profile, bidder, grid);
  RegretEstimate est;
  est.method = Method::item_wise;
  est.bidder = bidder;
  for (double g : scan.gain) est.value += g;
  est.mech_evals = scan.evaluations;
  est.wall_seconds = seconds_since(start);
  return est;
}

bool is_grid_method(Method method) {
  return method == Method::exhaustive || method == Method::item || method == Method::lower_bound ||
         method == Method::item_wise;
}

std::vector<RegretEstimate> audit_all_bidders(const Mechanism& mech, const BidProfile& profile,
                                              const GridSpec& grid,
                                              const std::set<Method>& methods,
                                              const OracleOptions& options) {
  for (Method method : methods) {
    if (!is_grid_method(method)) {
      throw InvalidInput("audit_all_bidders runs grid methods only, got " + to_string(method));
    }
  }
  std::vector<RegretEstimate> out;
  for (std::size_t i = 0; i < profile.bidders(); ++i) {
    for (Method method : methods) {
      switch (method) {
        case Method::exhaustive:
          out.push_back(exhaustive_regret(mech, profile, i, grid, options));
          break;
        case Method::item:
          for (std::size_t j = 0; j < profile.items(); ++j) {
            out.push_back(item_regret(mech, profile, i, j, grid));
          }
          break;
        case Method::lower_bound:
          out.push_back(lower_bound_regret(mech, profile, i, grid));
          break;
        case Method::item_wise:
          out.push_back(item_wise_regret(mech, profile, i, grid));
          break;
        default:
          break;
      }
    }
  }
  return out;
}

}  // namespace regret_audit
