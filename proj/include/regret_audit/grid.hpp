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

#include <cstddef>
#include <string>
#include <vector>

namespace regret_audit {

enum class GridStyle {
  /// q+1 points t/q for t = 0..q.
  inclusive,
  /// q points t/q for t = 1..q (drops the zero bid).
  open_left,
};

std::string to_string(GridStyle style);
GridStyle grid_style_from_string(const std::string& text);

/// Uniform discretization of the per-item bid interval [0, 1].
class GridSpec {
 public:
  explicit GridSpec(std::size_t q, GridStyle style = GridStyle::inclusive);

  std::size_t q() const { return q_; }
  GridStyle style() const { return style_; }
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// Exact membership test.
  bool contains(double value) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.q_ == b.q_ && a.style_ == b.style_;
  }

 private:
  std::size_t q_;
  GridStyle style_;
  std::vector<double> points_;
};

/// Default precision: 1e-3 spacing.
inline constexpr std::size_t kDefaultGridQ = 1000;

}  // namespace regret_audit
