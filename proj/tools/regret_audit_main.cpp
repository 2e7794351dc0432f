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

// regret-audit: ex-post regret estimators for auction mechanisms.
//
//   regret-audit eval     --mechanism neural:42 --bidders 2 --items 2 --methods lower_bound,guided ...
//   regret-audit sweep    --l-values 1,50,200 --r-values 50,500,2000 ... --out sweep.csv
//   regret-audit gen-mech --bidders 2 --items 2 --hidden 16 --seed 42 --out spec.json
//
// Exit codes: 0 success, 2 invalid config, 3 budget exceeded, 4 I/O.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regret_audit/audit.hpp"
#include "regret_audit/errors.hpp"
#include "regret_audit/neural_mechanism.hpp"

namespace ra = regret_audit;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

struct RunOptions {
  std::size_t bidders = 2;
  std::size_t items = 2;
  std::string mechanism = "second_price";
  std::string dist = "uniform01";
  std::vector<int> x_contexts;
  std::vector<int> y_contexts;
  double dist_std = 0.05;
  std::size_t grid_q = ra::kDefaultGridQ;
  std::string grid_style = "inclusive";
  std::size_t guided_grid_q = 0;
  std::string exhaustive_scan = "grid_rows";
  std::string methods = "lower_bound,item_wise,guided";
  std::string pga_preset;
  std::string portfolio_preset;
  double gamma = 0.1;
  std::size_t restarts = 1000;
  std::size_t steps = 2000;
  double guided_gamma = 0.0;
  std::size_t guided_steps = 0;
  std::size_t k = 0;
  double sigma_opt = 0.0;
  double sigma_truth = 0.0;
  std::size_t samples = ra::kDefaultSamples;
  std::uint64_t seed = 0;
  std::uint64_t max_evals = ra::kDefaultExhaustiveBudget;
  std::string out;
};

void add_run_options(CLI::App& cmd, RunOptions& o) {
  cmd.add_option("--mechanism", o.mechanism,
                 "second_price | first_price | neural:<seed>[:<hidden>] | spec file path");
  cmd.add_option("--bidders", o.bidders, "Number of bidders n")->check(CLI::PositiveNumber);
  cmd.add_option("--items", o.items, "Number of items m")->check(CLI::PositiveNumber);
  cmd.add_option("--dist", o.dist, "uniform01 | ctxnormal");
  cmd.add_option("--x-contexts", o.x_contexts, "Bidder contexts in 1..10 (ctxnormal)")->delimiter(',');
  cmd.add_option("--y-contexts", o.y_contexts, "Item contexts in 1..10 (ctxnormal)")->delimiter(',');
  cmd.add_option("--dist-std", o.dist_std, "Normal std for ctxnormal");
  cmd.add_option("--grid-q", o.grid_q, "Grid subdivisions Q");
  cmd.add_option("--grid-style", o.grid_style, "inclusive | open_left");
  cmd.add_option("--guided-grid-q", o.guided_grid_q, "Grid Q for guided item scans (default: --grid-q)");
  cmd.add_option("--exhaustive-scan", o.exhaustive_scan, "grid_rows | truthful_coordinates");
  cmd.add_option("--methods", o.methods,
                 "Comma list of exhaustive,item,lower_bound,item_wise,pga,guided");
  cmd.add_option("--pga-preset", o.pga_preset, "regretnet | algnet | regretformer | citransnet");
  cmd.add_option("--portfolio-preset", o.portfolio_preset, "regretnet | algnet | regretformer");
  cmd.add_option("--gamma", o.gamma, "PGA step size");
  cmd.add_option("--L", o.restarts, "PGA random restarts");
  cmd.add_option("--R", o.steps, "PGA steps per restart");
  cmd.add_option("--guided-gamma", o.guided_gamma, "Refinement step size (default: --gamma)");
  cmd.add_option("--guided-R", o.guided_steps, "Refinement steps (default: --R)");
  cmd.add_option("--k", o.k, "Randomized candidates per portfolio group");
  cmd.add_option("--sigma-opt", o.sigma_opt, "Noise around the combinatorial candidate");
  cmd.add_option("--sigma-truth", o.sigma_truth, "Noise around the truthful row");
  cmd.add_option("--samples", o.samples, "Valuation profiles");
  cmd.add_option("--seed", o.seed, "Run seed");
  cmd.add_option("--max-evals", o.max_evals, "Exhaustive evaluation budget");
  cmd.add_option("--out", o.out, "Output path");
}

std::size_t threads_from_env() {
  const char* env = std::getenv("REGRET_AUDIT_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    return std::stoul(env);
  } catch (const std::exception&) {
    throw ra::InvalidInput(std::string("REGRET_AUDIT_THREADS is not a count: ") + env);
  }
}

std::set<ra::Method> parse_methods(const std::string& text) {
  std::set<ra::Method> methods;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) methods.insert(ra::method_from_string(token));
  }
  return methods;
}

ra::AuditRunConfig to_config(const CLI::App& cmd, const RunOptions& o) {
  ra::AuditRunConfig cfg;
  cfg.setting = {o.bidders, o.items};
  cfg.mechanism = o.mechanism;
  cfg.distribution.kind = ra::distribution_from_string(o.dist);
  if (!o.x_contexts.empty()) cfg.distribution.x_contexts = o.x_contexts;
  if (!o.y_contexts.empty()) cfg.distribution.y_contexts = o.y_contexts;
  cfg.distribution.std = o.dist_std;
  cfg.grid_q = o.grid_q;
  cfg.grid_style = ra::grid_style_from_string(o.grid_style);
  if (o.guided_grid_q > 0) cfg.guided_grid_q = o.guided_grid_q;
  cfg.exhaustive_scan = ra::exhaustive_scan_from_string(o.exhaustive_scan);
  cfg.methods = parse_methods(o.methods);

  // Presets first, explicit flags override.
  cfg.pga = o.pga_preset.empty() ? ra::PgaConfig{o.gamma, o.restarts, o.steps}
                                 : ra::PgaConfig::preset(o.pga_preset);
  if (!o.pga_preset.empty()) {
    if (cmd.count("--gamma")) cfg.pga.gamma = o.gamma;
    if (cmd.count("--L")) cfg.pga.restarts = o.restarts;
    if (cmd.count("--R")) cfg.pga.steps = o.steps;
  }
  if (o.portfolio_preset.empty()) {
    cfg.portfolio = {o.k, o.sigma_opt, o.sigma_truth, {cfg.pga.gamma, 1, cfg.pga.steps}};
  } else {
    cfg.portfolio = ra::PortfolioConfig::preset(o.portfolio_preset);
    if (cmd.count("--k")) cfg.portfolio.k = o.k;
    if (cmd.count("--sigma-opt")) cfg.portfolio.sigma_opt = o.sigma_opt;
    if (cmd.count("--sigma-truth")) cfg.portfolio.sigma_truth = o.sigma_truth;
  }
  if (o.guided_gamma > 0.0) cfg.portfolio.refine.gamma = o.guided_gamma;
  if (o.guided_steps > 0) cfg.portfolio.refine.steps = o.guided_steps;

  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.max_exhaustive_evals = o.max_evals;
  cfg.threads = threads_from_env();
  cfg.output = o.out;
  return cfg;
}

void print_summary(const ra::AuditReport& report) {
  std::cout << "method,samples,mean_regret,mech_evals,gradient_steps,wall_seconds\n";
  for (const auto& s : report.summaries) {
    std::cout << ra::to_string(s.method) << ',' << s.samples << ',' << s.mean_regret << ','
              << s.mech_evals << ',' << s.gradient_steps << ',' << s.wall_seconds << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ex-post regret auditing for auction mechanisms"};
  app.require_subcommand(1);

  RunOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Estimate regret over sampled valuation profiles");
  add_run_options(*eval, eval_opts);

  RunOptions sweep_opts;
  sweep_opts.methods = "pga";
  std::vector<std::size_t> l_values;
  std::vector<std::size_t> r_values;
  auto* sweep = app.add_subcommand("sweep", "PGA regret over an (L, R) grid, CSV output");
  add_run_options(*sweep, sweep_opts);
  sweep->add_option("--l-values", l_values, "Restart counts")->delimiter(',')->required();
  sweep->add_option("--r-values", r_values, "Step counts")->delimiter(',')->required();

  std::size_t gen_bidders = 2;
  std::size_t gen_items = 2;
  std::size_t gen_hidden = ra::kDefaultHiddenWidth;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-mech", "Write a seeded neural mechanism spec");
  gen->add_option("--bidders", gen_bidders)->check(CLI::PositiveNumber);
  gen->add_option("--items", gen_items)->check(CLI::PositiveNumber);
  gen->add_option("--hidden", gen_hidden)->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (*eval) {
      const auto report = ra::run_audit(to_config(*eval, eval_opts));
      print_summary(report);
    } else if (*sweep) {
      auto cfg = to_config(*sweep, sweep_opts);
      cfg.methods = {ra::Method::pga};
      const auto rows = ra::run_sweep(cfg, l_values, r_values);
      if (cfg.output.empty()) std::cout << ra::sweep_to_csv(rows);
    } else if (*gen) {
      ra::write_neural_spec(ra::generate_neural_spec({gen_bidders, gen_items}, gen_hidden, gen_seed),
                            gen_out);
    }
  } catch (const ra::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ra::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ra::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const ra::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return 0;
}
