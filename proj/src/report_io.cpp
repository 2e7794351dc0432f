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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regret_audit/audit.hpp"
#include "regret_audit/errors.hpp"

namespace regret_audit {

namespace {

using nlohmann::json;

json config_to_json(const AuditRunConfig& cfg) {
  json dist{{"kind", to_string(cfg.distribution.kind)}, {"std", cfg.distribution.std}};
  dist["x_contexts"] = cfg.distribution.x_contexts ? json(*cfg.distribution.x_contexts) : json();
  dist["y_contexts"] = cfg.distribution.y_contexts ? json(*cfg.distribution.y_contexts) : json();

  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));

  return json{
      {"setting", {{"bidders", cfg.setting.bidders}, {"items", cfg.setting.items}}},
      {"mechanism", cfg.mechanism},
      {"distribution", dist},
      {"grid", {{"q", cfg.grid_q}, {"style", to_string(cfg.grid_style)}}},
      {"guided_grid_q", cfg.guided_grid_q ? json(*cfg.guided_grid_q) : json()},
      {"methods", methods},
      {"pga", {{"gamma", cfg.pga.gamma}, {"L", cfg.pga.restarts}, {"R", cfg.pga.steps}}},
      {"portfolio",
       {{"k", cfg.portfolio.k},
        {"sigma_opt", cfg.portfolio.sigma_opt},
        {"sigma_truth", cfg.portfolio.sigma_truth},
        {"refine", {{"gamma", cfg.portfolio.refine.gamma}, {"R", cfg.portfolio.refine.steps}}}}},
      {"samples", cfg.samples},
      {"seed", cfg.seed},
      {"max_exhaustive_evals", cfg.max_exhaustive_evals},
      {"exhaustive_scan", to_string(cfg.exhaustive_scan)},
  };
}

AuditRunConfig config_from_json(const json& j) {
  AuditRunConfig cfg;
  cfg.setting.bidders = j.at("setting").at("bidders").get<std::size_t>();
  cfg.setting.items = j.at("setting").at("items").get<std::size_t>();
  cfg.mechanism = j.at("mechanism").get<std::string>();
  const json& dist = j.at("distribution");
  cfg.distribution.kind = distribution_from_string(dist.at("kind").get<std::string>());
  cfg.distribution.std = dist.at("std").get<double>();
  if (!dist.at("x_contexts").is_null()) cfg.distribution.x_contexts = dist["x_contexts"].get<std::vector<int>>();
  if (!dist.at("y_contexts").is_null()) cfg.distribution.y_contexts = dist["y_contexts"].get<std::vector<int>>();
  cfg.grid_q = j.at("grid").at("q").get<std::size_t>();
  cfg.grid_style = grid_style_from_string(j.at("grid").at("style").get<std::string>());
  if (!j.at("guided_grid_q").is_null()) cfg.guided_grid_q = j["guided_grid_q"].get<std::size_t>();
  cfg.methods.clear();
  for (const auto& m : j.at("methods")) cfg.methods.insert(method_from_string(m.get<std::string>()));
  cfg.pga.gamma = j.at("pga").at("gamma").get<double>();
  cfg.pga.restarts = j.at("pga").at("L").get<std::size_t>();
  cfg.pga.steps = j.at("pga").at("R").get<std::size_t>();
  const json& pf = j.at("portfolio");
  cfg.portfolio.k = pf.at("k").get<std::size_t>();
  cfg.portfolio.sigma_opt = pf.at("sigma_opt").get<double>();
  cfg.portfolio.sigma_truth = pf.at("sigma_truth").get<double>();
  cfg.portfolio.refine.gamma = pf.at("refine").at("gamma").get<double>();
  cfg.portfolio.refine.steps = pf.at("refine").at("R").get<std::size_t>();
  cfg.samples = j.at("samples").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.max_exhaustive_evals = j.at("max_exhaustive_evals").get<std::uint64_t>();
  cfg.exhaustive_scan = exhaustive_scan_from_string(j.at("exhaustive_scan").get<std::string>());
  return cfg;
}

json estimate_to_json(const SampleRecord& r) {
  const RegretEstimate& e = r.estimate;
  return json{
      {"sample", r.sample},
      {"bidder", e.bidder},
      {"method", to_string(e.method)},
      {"item", e.item ? json(*e.item) : json()},
      {"value", e.value},
      {"best_misreport", e.best_misreport ? json(*e.best_misreport) : json()},
      {"mech_evals", e.mech_evals},
      {"gradient_steps", e.gradient_steps},
      {"aborted_candidates", e.aborted_candidates},
      {"wall_seconds", e.wall_seconds},
  };
}

SampleRecord estimate_from_json(const json& j) {
  SampleRecord r;
  r.sample = j.at("sample").get<std::size_t>();
  RegretEstimate& e = r.estimate;
  e.bidder = j.at("bidder").get<std::size_t>();
  e.method = method_from_string(j.at("method").get<std::string>());
  if (!j.at("item").is_null()) e.item = j["item"].get<std::size_t>();
  e.value = j.at("value").get<double>();
  if (!j.at("best_misreport").is_null()) {
    e.best_misreport = j["best_misreport"].get<std::vector<double>>();
  }
  e.mech_evals = j.at("mech_evals").get<std::uint64_t>();
  e.gradient_steps = j.at("gradient_steps").get<std::uint64_t>();
  e.aborted_candidates = j.at("aborted_candidates").get<std::uint64_t>();
  e.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

json report_json(const AuditReport& report) {
  if (report.config.samples < 1) throw InvalidInput("report write: report has zero samples");
  json summaries = json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back({
        {"method", to_string(s.method)},
        {"samples", s.samples},
        {"mean_regret", s.mean_regret},
        {"mech_evals", s.mech_evals},
        {"gradient_steps", s.gradient_steps},
        {"aborted_candidates", s.aborted_candidates},
        {"wall_seconds", s.wall_seconds},
    });
  }
  json records = json::array();
  for (const auto& r : report.records) records.push_back(estimate_to_json(r));
  return json{
      {"format_version", report.format_version},
      {"config", config_to_json(report.config)},
      {"summaries", summaries},
      {"records", records},
  };
}

void strip_timings(json& j) {
  if (j.is_object()) {
    j.erase("wall_seconds");
    for (auto& [key, value] : j.items()) strip_timings(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_timings(value);
  }
}

}  // namespace

std::string report_to_json(const AuditReport& report) { return report_json(report).dump(1); }

std::string report_to_json_without_timings(const AuditReport& report) {
  json j = report_json(report);
  strip_timings(j);
  return j.dump(1);
}

AuditReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_number_integer()) {
    throw FormatError("report lacks an integer format_version");
  }
  if (j["format_version"].get<int>() != kReportFormatVersion) {
    throw FormatError("unsupported report format_version " + j["format_version"].dump());
  }
  AuditReport report;
  try {
    report.config = config_from_json(j.at("config"));
    for (const auto& s : j.at("summaries")) {
      MethodSummary summary;
      summary.method = method_from_string(s.at("method").get<std::string>());
      summary.samples = s.at("samples").get<std::size_t>();
      summary.mean_regret = s.at("mean_regret").get<double>();
      summary.mech_evals = s.at("mech_evals").get<std::uint64_t>();
      summary.gradient_steps = s.at("gradient_steps").get<std::uint64_t>();
      summary.aborted_candidates = s.at("aborted_candidates").get<std::uint64_t>();
      summary.wall_seconds = s.at("wall_seconds").get<double>();
      report.summaries.push_back(summary);
    }
    for (const auto& r : j.at("records")) report.records.push_back(estimate_from_json(r));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
  return report;
}

void write_report(const AuditReport& report, const std::filesystem::path& path) {
  const std::string text = report_to_json(report);
  std::ofstream out(path);
  if (!out) throw IoError("report write: cannot open " + path.string());
  out << text << '\n';
  if (!out) throw IoError("report write: failed writing " + path.string());
}

AuditReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("report read: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

}  // namespace regret_audit
