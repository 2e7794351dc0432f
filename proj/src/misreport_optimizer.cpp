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

#include "regret_audit/misreport_optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "regret_audit/errors.hpp"
#include "regret_audit/rng.hpp"

namespace regret_audit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_args(const Mechanism& mech, const BidProfile& profile, std::size_t bidder) {
  if (profile.setting() != mech.setting()) {
    throw InvalidInput("profile is " + to_string(profile.setting()) + ", mechanism expects " +
                       to_string(mech.setting()));
  }
  if (bidder >= profile.bidders()) throw InvalidInput("bidder index out of range");
}

// Utility (and optionally gradient) of the bidder at the current working
// profile. Allocation-free after construction.
class AscentOracle {
 public:
  AscentOracle(const Mechanism& mech, std::span<const double> valuation, std::size_t bidder)
      : mech_(mech), valuation_(valuation), bidder_(bidder), probe_(mech) {}

  double utility(const BidProfile& bids, std::uint64_t& evals) {
    ++evals;
    return probe_(valuation_, bids, bidder_);
  }

  double utility_and_gradient(BidProfile& bids, std::span<double> gradient,
                              std::uint64_t& evals) {
    if (mech_.has_analytic_gradient()) {
      ++evals;
      return mech_.analytic_utility_gradient(valuation_, bids, bidder_, gradient);
    }
    const double u = utility(bids, evals);
    auto row = bids.mutable_row(bidder_);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double centre = row[j];
      const double hi = std::min(1.0, centre + kFiniteDifferenceStep);
      const double lo = std::max(0.0, centre - kFiniteDifferenceStep);
      row[j] = hi;
      const double u_hi = utility(bids, evals);
      row[j] = lo;
      const double u_lo = utility(bids, evals);
      row[j] = centre;
      gradient[j] = (u_hi - u_lo) / (hi - lo);
    }
    return u;
  }

 private:
  const Mechanism& mech_;
  std::span<const double> valuation_;
  std::size_t bidder_;
  UtilityProbe probe_;
};

PgaResult ascend(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                 std::span<const double> valuation, std::span<const double> start, double gamma,
                 std::size_t steps) {
  const std::size_t m = profile.items();
  BidProfile work = profile;
  auto row = work.mutable_row(bidder);
  for (std::size_t j = 0; j < m; ++j) row[j] = clamp01(start[j]);

  AscentOracle oracle(mech, valuation, bidder);
  std::vector<double> gradient(m, 0.0);
  PgaResult result;
  result.best_utility = -std::numeric_limits<double>::infinity();

  for (std::size_t r = 0;; ++r) {
    const bool last = r == steps;
    const double u = last ? oracle.utility(work, result.evaluations)
                          : oracle.utility_and_gradient(work, gradient, result.evaluations);
    if (!std::isfinite(u)) {
      result.aborted = true;
      break;
    }
    if (u > result.best_utility) {
      result.best_utility = u;
      result.best_bid.assign(row.begin(), row.end());
    }
    if (last) break;
    if (!std::all_of(gradient.begin(), gradient.end(), [](double g) { return std::isfinite(g); })) {
      result.aborted = true;
      break;
    }
    for (std::size_t j = 0; j < m; ++j) row[j] = clamp01(row[j] + gamma * gradient[j]);
    ++result.steps;
  }
  if (result.best_bid.empty()) {
    // Non-finite utility at the start itself.
    result.best_bid.assign(start.begin(), start.end());
    for (double& b : result.best_bid) b = clamp01(b);
  }
  return result;
}

struct Incumbent {
  double utility = -std::numeric_limits<double>::infinity();
  std::vector<double> bid;

  void offer(const PgaResult& r) {
    if (bid.empty() || better_misreport(r.best_utility, r.best_bid, utility, bid)) {
      utility = r.best_utility;
      bid = r.best_bid;
    }
  }
};

void finish_estimate(RegretEstimate& est, const Incumbent& best, double truthful,
                     std::span<const double> valuation) {
  if (!best.bid.empty() && best.utility > truthful) {
    est.value = best.utility - truthful;
    est.best_misreport = best.bid;
  } else {
    est.value = 0.0;
    est.best_misreport = std::vector<double>(valuation.begin(), valuation.end());
  }
}

}  // namespace

void PgaConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be > 0");
  if (restarts < 1) throw InvalidInput("restart count L must be >= 1");
  if (steps < 1) throw InvalidInput("step count R must be >= 1");
}

PgaConfig PgaConfig::preset(const std::string& name) {
  if (name == "regretnet") return regretnet();
  if (name == "algnet") return algnet();
  if (name == "regretformer") return regretformer();
  if (name == "citransnet") return citransnet();
  throw InvalidInput("unknown optimizer preset '" + name + "'");
}

void PortfolioConfig::validate() const {
  if (!(sigma_opt >= 0.0) || !(sigma_truth >= 0.0)) {
    throw InvalidInput("portfolio noise scales must be >= 0");
  }
  if (!(refine.gamma > 0.0) || !std::isfinite(refine.gamma)) {
    throw InvalidInput("refinement gamma must be > 0");
  }
  if (refine.steps < 1) throw InvalidInput("refinement step count must be >= 1");
}

PortfolioConfig PortfolioConfig::preset(const std::string& name) {
  if (name == "regretnet") return regretnet();
  if (name == "algnet") return algnet();
  if (name == "regretformer") return regretformer();
  throw InvalidInput("unknown portfolio preset '" + name + "'");
}

std::string to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::combinatorial: return "combinatorial";
    case CandidateKind::single_item: return "single_item";
    case CandidateKind::perturbed_comb: return "perturbed_comb";
    case CandidateKind::perturbed_truth: return "perturbed_truth";
    case CandidateKind::global_random: return "global_random";
  }
  return "unknown";
}

std::size_t Portfolio::count(CandidateKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      candidates.begin(), candidates.end(), [kind](const Candidate& c) { return c.kind == kind; }));
}

PgaResult pga_single(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                     std::span<const double> start, double gamma, std::size_t steps) {
  check_args(mech, profile, bidder);
  if (start.size() != profile.items()) throw InvalidInput("start length does not match item count");
  for (double s : start) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidInput("start point outside [0,1]^m");
  }
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  return ascend(mech, profile, bidder, profile.row(bidder), start, gamma, steps);
}

RegretEstimate random_restart_pga(const Mechanism& mech, const BidProfile& profile,
                                  std::size_t bidder, const PgaConfig& cfg, std::uint64_t seed) {
  check_args(mech, profile, bidder);
  cfg.validate();
  const auto start_time = Clock::now();
  const std::size_t m = profile.items();
  const auto valuation = profile.row(bidder);

  RegretEstimate est;
  est.method = Method::pga;
  est.bidder = bidder;
  UtilityProbe probe(mech);
  const double truthful = probe(valuation, profile, bidder);
  est.mech_evals = 1;

  const Stream root(seed);
  std::vector<double> start(m);
  Incumbent best;
  for (std::size_t l = 0; l < cfg.restarts; ++l) {
    Xoshiro256 rng = root.child(l).generator();
    for (double& s : start) s = rng.uniform();
    const PgaResult r = ascend(mech, profile, bidder, valuation, start, cfg.gamma, cfg.steps);
    est.mech_evals += r.evaluations;
    est.gradient_steps += r.steps;
    if (r.aborted) ++est.aborted_candidates;
    best.offer(r);
  }
  finish_estimate(est, best, truthful, valuation);
  est.wall_seconds = seconds_since(start_time);
  return est;
}

Portfolio build_portfolio(const BidProfile& profile, std::size_t bidder,
                          std::span<const double> item_argmaxes, const PortfolioConfig& cfg,
                          std::uint64_t seed) {
  cfg.validate();
  const std::size_t m = profile.items();
  if (item_argmaxes.size() != m) throw InvalidInput("item argmax length does not match item count");
  const auto truth = profile.row(bidder);

  Portfolio portfolio;
  portfolio.candidates.reserve(cfg.size(m));
  std::vector<double> combinatorial(item_argmaxes.begin(), item_argmaxes.end());
  for (double& b : combinatorial) b = clamp01(b);
  portfolio.candidates.push_back({CandidateKind::combinatorial, 0, combinatorial});

  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> bid(truth.begin(), truth.end());
    bid[j] = combinatorial[j];
    portfolio.candidates.push_back({CandidateKind::single_item, j, std::move(bid)});
  }

  const Stream root(seed);
  auto perturbed = [&](std::uint64_t group, CandidateKind kind, std::span<const double> centre,
                       double sigma) {
    for (std::size_t r = 0; r < cfg.k; ++r) {
      Xoshiro256 rng = root.child(group).child(r).generator();
      std::vector<double> bid(centre.begin(), centre.end());
      for (double& b : bid) b = clamp01(b + sigma * rng.normal());
      portfolio.candidates.push_back({kind, r, std::move(bid)});
    }
  };
  perturbed(0, CandidateKind::perturbed_comb, combinatorial, cfg.sigma_opt);
  perturbed(1, CandidateKind::perturbed_truth, truth, cfg.sigma_truth);
  for (std::size_t r = 0; r < cfg.k; ++r) {
    Xoshiro256 rng = root.child(2).child(r).generator();
    std::vector<double> bid(m);
    for (double& b : bid) b = rng.uniform();
    portfolio.candidates.push_back({CandidateKind::global_random, r, std::move(bid)});
  }
  return portfolio;
}

RegretEstimate guided_refinement(const Mechanism& mech, const BidProfile& profile,
                                 std::size_t bidder, const GridSpec& grid,
                                 const PortfolioConfig& cfg, std::uint64_t seed) {
  check_args(mech, profile, bidder);
  cfg.validate();
  const auto start_time = Clock::now();
  const auto valuation = profile.row(bidder);

  RegretEstimate est;
  est.method = Method::guided;
  est.bidder = bidder;

  const ItemScan scan = scan_items(mech, profile, bidder, grid);
  est.mech_evals = scan.evaluations;

  const Portfolio portfolio = build_portfolio(profile, bidder, scan.argmax, cfg, seed);
  Incumbent best;
  for (const Candidate& candidate : portfolio.candidates) {
    const PgaResult r =
        ascend(mech, profile, bidder, valuation, candidate.bid, cfg.refine.gamma, cfg.refine.steps);
    est.mech_evals += r.evaluations;
    est.gradient_steps += r.steps;
    if (r.aborted) ++est.aborted_candidates;
    best.offer(r);
  }
  finish_estimate(est, best, scan.truthful_utility, valuation);
  est.wall_seconds = seconds_since(start_time);
  return est;
}

}  // namespace regret_audit
