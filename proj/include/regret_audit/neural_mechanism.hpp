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
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "regret_audit/mechanism.hpp"

namespace regret_audit {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Fixed weights of a one-hidden-layer allocation/payment network.
///
/// Forward pass on a bid profile b (flattened row-major to length n*m):
///   h      = tanh(b * weights_in + bias_in)
///   scores = h * weights_alloc + bias_alloc, viewed as (n+1) x m; row n is a
///            dummy "unallocated" bidder
///   g      = column-wise softmax of scores, dummy row dropped
///   p_i    = sigmoid(h * weights_pay + bias_pay)_i * sum_j g_ij * b_ij
struct NeuralMechanismSpec {
  AuctionSetting setting;
  std::size_t hidden_width = 0;
  Matrix weights_in;           // (n*m) x hidden
  std::vector<double> bias_in;  // hidden
  Matrix weights_alloc;        // hidden x ((n+1)*m)
  std::vector<double> bias_alloc;
  Matrix weights_pay;  // hidden x n
  std::vector<double> bias_pay;

  /// Throws InvalidSpec naming the first inconsistent dimension or
  /// non-finite entry.
  void validate() const;

  /// All weights and biases zero, shapes consistent with the setting.
  static NeuralMechanismSpec zeros(AuctionSetting setting, std::size_t hidden_width);

  friend bool operator==(const NeuralMechanismSpec&, const NeuralMechanismSpec&) = default;
};

/// Draws every weight i.i.d. uniform on [-1, 1] from Stream(seed) in the
/// order weights_in, bias_in, weights_alloc, bias_alloc, weights_pay,
/// bias_pay (row-major within each).
NeuralMechanismSpec generate_neural_spec(AuctionSetting setting, std::size_t hidden_width,
                                         std::uint64_t seed);

/// A pure mechanism with a closed-form utility gradient.
std::unique_ptr<Mechanism> load_neural_mechanism(const NeuralMechanismSpec& spec);

inline constexpr int kNeuralSpecFormatVersion = 1;

std::string neural_spec_to_json(const NeuralMechanismSpec& spec);
NeuralMechanismSpec neural_spec_from_json(const std::string& text);

void write_neural_spec(const NeuralMechanismSpec& spec, const std::filesystem::path& path);
NeuralMechanismSpec read_neural_spec(const std::filesystem::path& path);

}  // namespace regret_audit
