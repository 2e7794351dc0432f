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

#include "regret_audit/neural_mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regret_audit/errors.hpp"
#include "regret_audit/rng.hpp"

namespace regret_audit {

namespace {

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* field) {
  if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
    throw InvalidSpec(std::string(field) + " is " + std::to_string(m.rows) + "x" +
                      std::to_string(m.cols) + ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

void expect_length(const std::vector<double>& v, std::size_t len, const char* field) {
  if (v.size() != len) {
    throw InvalidSpec(std::string(field) + " has length " + std::to_string(v.size()) +
                      ", expected " + std::to_string(len));
  }
}

void expect_finite(const std::vector<double>& v, const char* field) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidSpec(std::string(field) + " has a non-finite entry");
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Activations kept for the backward pass.
struct Workspace {
  std::vector<double> hidden;
  std::vector<double> scores;  // becomes the full (n+1) x m softmax in place
  std::vector<double> pay_gate;
  std::vector<double> d_scores;
  std::vector<double> d_hidden;
};

class NeuralMechanism final : public Mechanism {
 public:
  explicit NeuralMechanism(NeuralMechanismSpec spec)
      : Mechanism(spec.setting), spec_(std::move(spec)) {}

  std::string name() const override { return "neural"; }
  bool has_analytic_gradient() const override { return true; }

 protected:
  void evaluate(const BidProfile& bids, Outcome& out) const override {
    forward(bids, out, workspace());
  }

  double evaluate_utility_gradient(std::span<const double> valuation, const BidProfile& bids,
                                   std::size_t bidder, std::span<double> gradient) const override {
    Workspace& ws = workspace();
    Outcome& out = outcome_buffer();
    forward(bids, out, ws);
    const double u = bidder_utility(out, valuation, bidder);

    const std::size_t n = spec_.setting.bidders;
    const std::size_t m = spec_.setting.items;
    const std::size_t hidden = spec_.hidden_width;
    const auto row = bids.row(bidder);
    const double gate = ws.pay_gate[bidder];

    double allocated_value = 0.0;
    for (std::size_t j = 0; j < m; ++j) allocated_value += out.allocation(bidder, j) * row[j];

    // du/ds_{r,j} = a_j * g_{ij} * (delta_{ri} - g_{rj}), a_j = v_j - gate * b_ij.
    ws.d_scores.assign((n + 1) * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double g_ij = out.allocation(bidder, j);
      const double a_j = valuation[j] - gate * row[j];
      for (std::size_t r = 0; r <= n; ++r) {
        const double g_rj = ws.scores[r * m + j];
        ws.d_scores[r * m + j] = a_j * g_ij * ((r == bidder ? 1.0 : 0.0) - g_rj);
      }
    }
    const double d_pay_logit = -gate * (1.0 - gate) * allocated_value;

    ws.d_hidden.assign(hidden, 0.0);
    for (std::size_t k = 0; k < hidden; ++k) {
      double acc = spec_.weights_pay(k, bidder) * d_pay_logit;
      for (std::size_t c = 0; c < (n + 1) * m; ++c) acc += spec_.weights_alloc(k, c) * ws.d_scores[c];
      const double h = ws.hidden[k];
      ws.d_hidden[k] = acc * (1.0 - h * h);
    }

    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t input = bidder * m + t;
      double acc = 0.0;
      for (std::size_t k = 0; k < hidden; ++k) acc += spec_.weights_in(input, k) * ws.d_hidden[k];
      gradient[t] = acc - gate * out.allocation(bidder, t);
    }
    return u;
  }

 private:
  void forward(const BidProfile& bids, Outcome& out, Workspace& ws) const {
    const std::size_t n = spec_.setting.bidders;
    const std::size_t m = spec_.setting.items;
    const std::size_t hidden = spec_.hidden_width;
    const auto x = bids.values();

    ws.hidden.assign(spec_.bias_in.begin(), spec_.bias_in.end());
    for (std::size_t a = 0; a < n * m; ++a) {
      const double xa = x[a];
      for (std::size_t k = 0; k < hidden; ++k) ws.hidden[k] += xa * spec_.weights_in(a, k);
    }
    for (double& h : ws.hidden) h = std::tanh(h);

    const std::size_t outputs = (n + 1) * m;
    ws.scores.assign(spec_.bias_alloc.begin(), spec_.bias_alloc.end());
    ws.pay_gate.assign(spec_.bias_pay.begin(), spec_.bias_pay.end());
    for (std::size_t k = 0; k < hidden; ++k) {
      const double hk = ws.hidden[k];
      for (std::size_t c = 0; c < outputs; ++c) ws.scores[c] += hk * spec_.weights_alloc(k, c);
      for (std::size_t i = 0; i < n; ++i) ws.pay_gate[i] += hk * spec_.weights_pay(k, i);
    }

    for (std::size_t j = 0; j < m; ++j) {
      double peak = ws.scores[j];
      for (std::size_t r = 1; r <= n; ++r) peak = std::max(peak, ws.scores[r * m + j]);
      double total = 0.0;
      for (std::size_t r = 0; r <= n; ++r) {
        double& s = ws.scores[r * m + j];
        s = std::exp(s - peak);
        total += s;
      }
      for (std::size_t r = 0; r <= n; ++r) ws.scores[r * m + j] /= total;
    }

    for (std::size_t i = 0; i < n; ++i) {
      ws.pay_gate[i] = sigmoid(ws.pay_gate[i]);
      double allocated_value = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double g = ws.scores[i * m + j];
        out.allocation(i, j) = g;
        allocated_value += g * x[i * m + j];
      }
      out.payments.pay[i] = ws.pay_gate[i] * allocated_value;
    }
  }

  static Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
  }

  Outcome& outcome_buffer() const {
    thread_local Outcome out;
    if (out.allocation.bidders != spec_.setting.bidders || out.allocation.items != spec_.setting.items) {
      out.reset(spec_.setting);
    }
    return out;
  }

  NeuralMechanismSpec spec_;
};

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_object()) throw FormatError(std::string(field) + " must be an object");
  Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  return m;
}

}  // namespace

void NeuralMechanismSpec::validate() const {
  setting.validate();
  if (hidden_width < 1) throw InvalidSpec("hidden_width must be at least 1");
  const std::size_t n = setting.bidders;
  const std::size_t m = setting.items;
  expect_shape(weights_in, n * m, hidden_width, "weights_in");
  expect_length(bias_in, hidden_width, "bias_in");
  expect_shape(weights_alloc, hidden_width, (n + 1) * m, "weights_alloc");
  expect_length(bias_alloc, (n + 1) * m, "bias_alloc");
  expect_shape(weights_pay, hidden_width, n, "weights_pay");
  expect_length(bias_pay, n, "bias_pay");
  expect_finite(weights_in.data, "weights_in");
  expect_finite(bias_in, "bias_in");
  expect_finite(weights_alloc.data, "weights_alloc");
  expect_finite(bias_alloc, "bias_alloc");
  expect_finite(weights_pay.data, "weights_pay");
  expect_finite(bias_pay, "bias_pay");
}

NeuralMechanismSpec NeuralMechanismSpec::zeros(AuctionSetting setting, std::size_t hidden_width) {
  setting.validate();
  const std::size_t n = setting.bidders;
  const std::size_t m = setting.items;
  NeuralMechanismSpec spec;
  spec.setting = setting;
  spec.hidden_width = hidden_width;
  spec.weights_in = Matrix(n * m, hidden_width);
  spec.bias_in.assign(hidden_width, 0.0);
  spec.weights_alloc = Matrix(hidden_width, (n + 1) * m);
  spec.bias_alloc.assign((n + 1) * m, 0.0);
  spec.weights_pay = Matrix(hidden_width, n);
  spec.bias_pay.assign(n, 0.0);
  return spec;
}

NeuralMechanismSpec generate_neural_spec(AuctionSetting setting, std::size_t hidden_width,
                                         std::uint64_t seed) {
  if (hidden_width < 1) throw InvalidInput("hidden_width must be at least 1");
  NeuralMechanismSpec spec = NeuralMechanismSpec::zeros(setting, hidden_width);
  Xoshiro256 rng = Stream(seed).generator();
  auto fill = [&rng](std::vector<double>& v) {
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
  };
  fill(spec.weights_in.data);
  fill(spec.bias_in);
  fill(spec.weights_alloc.data);
  fill(spec.bias_alloc);
  fill(spec.weights_pay.data);
  fill(spec.bias_pay);
  return spec;
}

std::unique_ptr<Mechanism> load_neural_mechanism(const NeuralMechanismSpec& spec) {
  spec.validate();
  return std::make_unique<NeuralMechanism>(spec);
}

std::string neural_spec_to_json(const NeuralMechanismSpec& spec) {
  spec.validate();
  json j;
  j["format_version"] = kNeuralSpecFormatVersion;
  j["setting"] = {{"bidders", spec.setting.bidders}, {"items", spec.setting.items}};
  j["hidden_width"] = spec.hidden_width;
  j["weights_in"] = matrix_to_json(spec.weights_in);
  j["bias_in"] = spec.bias_in;
  j["weights_alloc"] = matrix_to_json(spec.weights_alloc);
  j["bias_alloc"] = spec.bias_alloc;
  j["weights_pay"] = matrix_to_json(spec.weights_pay);
  j["bias_pay"] = spec.bias_pay;
  return j.dump(2);
}

NeuralMechanismSpec neural_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("neural spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version")) {
    throw FormatError("neural spec lacks format_version");
  }
  if (j["format_version"] != kNeuralSpecFormatVersion) {
    throw FormatError("unsupported neural spec format_version " + j["format_version"].dump());
  }
  NeuralMechanismSpec spec;
  try {
    spec.setting.bidders = j.at("setting").at("bidders").get<std::size_t>();
    spec.setting.items = j.at("setting").at("items").get<std::size_t>();
    spec.hidden_width = j.at("hidden_width").get<std::size_t>();
    spec.weights_in = matrix_from_json(j.at("weights_in"), "weights_in");
    spec.bias_in = j.at("bias_in").get<std::vector<double>>();
    spec.weights_alloc = matrix_from_json(j.at("weights_alloc"), "weights_alloc");
    spec.bias_alloc = j.at("bias_alloc").get<std::vector<double>>();
    spec.weights_pay = matrix_from_json(j.at("weights_pay"), "weights_pay");
    spec.bias_pay = j.at("bias_pay").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed neural spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

void write_neural_spec(const NeuralMechanismSpec& spec, const std::filesystem::path& path) {
  const std::string text = neural_spec_to_json(spec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

NeuralMechanismSpec read_neural_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return neural_spec_from_json(buffer.str());
}

}  // namespace regret_audit
