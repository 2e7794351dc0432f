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

#include "regret_audit/audit.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "regret_audit/builtin_mechanisms.hpp"
#include "regret_audit/errors.hpp"
#include "regret_audit/neural_mechanism.hpp"
#include "regret_audit/parallel.hpp"
#include "regret_audit/rng.hpp"

namespace regret_audit {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw InvalidInput("");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse " + what + " from '" + text + "'");
  }
}

std::unique_ptr<Mechanism> load_mechanism_unchecked(const std::string& source,
                                                    const AuctionSetting& setting) {
  if (source == "second_price" || source == "second-price") return make_second_price(setting);
  if (source == "first_price" || source == "first-price") return make_per_item_first_price(setting);
  if (source.rfind("neural:", 0) == 0) {
    const std::string rest = source.substr(7);
    const auto colon = rest.find(':');
    const std::uint64_t seed = parse_u64(rest.substr(0, colon), "neural seed");
    const std::size_t hidden = colon == std::string::npos
                                   ? kDefaultHiddenWidth
                                   : parse_u64(rest.substr(colon + 1), "hidden width");
    return load_neural_mechanism(generate_neural_spec(setting, hidden, seed));
  }
  const NeuralMechanismSpec spec = read_neural_spec(source);
  if (spec.setting != setting) {
    throw InvalidInput("mechanism file " + source + " is for " + to_string(spec.setting) +
                       ", run is " + to_string(setting));
  }
  return load_neural_mechanism(spec);
}

}  // namespace

std::unique_ptr<Mechanism> load_mechanism(const std::string& source,
                                          const AuctionSetting& setting) {
  setting.validate();
  try {
    return load_mechanism_unchecked(source, setting);
  } catch (const IoError& e) {
    throw IoError(std::string("mechanism load: ") + e.what());
  } catch (const FormatError& e) {
    throw InvalidInput(std::string("mechanism load: ") + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("mechanism load: ") + e.what());
  }
}

void AuditRunConfig::validate() const {
  setting.validate();
  distribution.validate(setting);
  if (grid_q < 1) throw InvalidInput("grid q must be >= 1");
  if (guided_grid_q && *guided_grid_q < 1) throw InvalidInput("guided grid q must be >= 1");
  if (methods.empty()) throw InvalidInput("at least one method is required");
  if (samples < 1) throw InvalidInput("samples must be >= 1");
  if (methods.contains(Method::pga)) pga.validate();
  if (methods.contains(Method::guided)) portfolio.validate();
}

const MethodSummary& AuditReport::summary(Method method) const {
  for (const auto& s : summaries) {
    if (s.method == method) return s;
  }
  throw InvalidInput("report has no summary for method " + to_string(method));
}

std::vector<const SampleRecord*> AuditReport::records_for(Method method) const {
  std::vector<const SampleRecord*> out;
  for (const auto& r : records) {
    if (r.estimate.method == method) out.push_back(&r);
  }
  return out;
}

std::uint64_t optimizer_seed(std::uint64_t run_seed, Method method, std::size_t sample,
                             std::size_t bidder) {
  const std::uint64_t tag = method == Method::pga ? stream_tag::kPga : stream_tag::kGuided;
  return Stream(run_seed).child(tag).child(sample).child(bidder).seed();
}

std::vector<RegretEstimate> audit_profile(const Mechanism& mech, const BidProfile& profile,
                                          const AuditRunConfig& cfg, std::size_t sample) {
  const GridSpec grid = cfg.grid();
  const OracleOptions oracle{cfg.max_exhaustive_evals, cfg.exhaustive_scan, 1};
  std::vector<RegretEstimate> out;
  for (std::size_t i = 0; i < profile.bidders(); ++i) {
    for (Method method : cfg.methods) {
      switch (method) {
        case Method::exhaustive:
          out.push_back(exhaustive_regret(mech, profile, i, grid, oracle));
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
        case Method::pga:
          out.push_back(random_restart_pga(mech, profile, i, cfg.pga,
                                           optimizer_seed(cfg.seed, Method::pga, sample, i)));
          break;
        case Method::guided:
          out.push_back(guided_refinement(mech, profile, i, cfg.guided_grid(), cfg.portfolio,
                                          optimizer_seed(cfg.seed, Method::guided, sample, i)));
          break;
      }
    }
  }
  return out;
}

std::vector<MethodSummary> summarize(const AuditRunConfig& cfg,
                                     const std::vector<SampleRecord>& records) {
  std::vector<MethodSummary> summaries;
  for (Method method : cfg.methods) {
    MethodSummary s;
    s.method = method;
    s.samples = cfg.samples;
    std::vector<double> per_sample(cfg.samples, 0.0);
    for (const auto& r : records) {
      if (r.estimate.method != method) continue;
      if (r.sample >= cfg.samples) throw InvalidInput("record sample index out of range");
      per_sample[r.sample] = std::max(per_sample[r.sample], r.estimate.value);
      s.mech_evals += r.estimate.mech_evals;
      s.gradient_steps += r.estimate.gradient_steps;
      s.aborted_candidates += r.estimate.aborted_candidates;
      s.wall_seconds += r.estimate.wall_seconds;
    }
    double total = 0.0;
    for (double v : per_sample) total += v;
    s.mean_regret = total / static_cast<double>(cfg.samples);
    summaries.push_back(s);
  }
  return summaries;
}

AuditReport run_audit(const AuditRunConfig& cfg, const Mechanism& mech) {
  cfg.validate();
  if (mech.setting() != cfg.setting) {
    throw InvalidInput("mechanism is " + to_string(mech.setting()) + ", run is " +
                       to_string(cfg.setting));
  }
  // Fail before any work when the exhaustive scan cannot fit.
  if (cfg.methods.contains(Method::exhaustive)) {
    const std::uint64_t extra = cfg.exhaustive_scan == ExhaustiveScan::truthful_coordinates ? 1 : 0;
    const std::uint64_t rows = saturating_pow(cfg.grid().size() + extra, cfg.setting.items);
    if (rows > cfg.max_exhaustive_evals) throw BudgetExceeded(rows, cfg.max_exhaustive_evals);
  }

  std::vector<std::vector<RegretEstimate>> per_sample(cfg.samples);
  parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
    const BidProfile profile = sample_valuations(cfg.distribution, cfg.setting, s, cfg.seed);
    per_sample[s] = audit_profile(mech, profile, cfg, s);
  });

  AuditReport report;
  report.config = cfg;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    for (auto& est : per_sample[s]) report.records.push_back({s, std::move(est)});
  }
  report.summaries = summarize(cfg, report.records);
  if (!cfg.output.empty()) write_report(report, cfg.output);
  return report;
}

AuditReport run_audit(const AuditRunConfig& cfg) {
  cfg.validate();
  const auto mech = load_mechanism(cfg.mechanism, cfg.setting);
  return run_audit(cfg, *mech);
}

std::vector<SweepRow> run_sweep(const AuditRunConfig& base, const std::vector<std::size_t>& l_values,
                                const std::vector<std::size_t>& r_values, const Mechanism& mech) {
  if (l_values.empty() || r_values.empty()) throw InvalidInput("sweep needs L and R values");
  std::vector<SweepRow> rows;
  for (std::size_t l : l_values) {
    for (std::size_t r : r_values) {
      AuditRunConfig cfg = base;
      cfg.methods = {Method::pga};
      cfg.pga.restarts = l;
      cfg.pga.steps = r;
      cfg.output.clear();
      const auto start = Clock::now();
      const AuditReport report = run_audit(cfg, mech);
      const MethodSummary& s = report.summary(Method::pga);
      rows.push_back({l, r, s.mean_regret, s.mech_evals, s.gradient_steps,
                      std::chrono::duration<double>(Clock::now() - start).count()});
    }
  }
  if (!base.output.empty()) write_sweep_csv(rows, base.output);
  return rows;
}

std::vector<SweepRow> run_sweep(const AuditRunConfig& base, const std::vector<std::size_t>& l_values,
                                const std::vector<std::size_t>& r_values) {
  base.validate();
  const auto mech = load_mechanism(base.mechanism, base.setting);
  return run_sweep(base, l_values, r_values, *mech);
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "L,R,mean_regret,mech_evals,gradient_steps,wall_seconds\n";
  char buffer[64];
  for (const auto& row : rows) {
    out += std::to_string(row.restarts) + "," + std::to_string(row.steps) + ",";
    std::snprintf(buffer, sizeof buffer, "%.17g", row.mean_regret);
    out += buffer;
    out += "," + std::to_string(row.mech_evals) + "," + std::to_string(row.gradient_steps) + ",";
    std::snprintf(buffer, sizeof buffer, "%.6f", row.wall_seconds);
    out += buffer;
    out += "\n";
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << sweep_to_csv(rows);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace regret_audit
