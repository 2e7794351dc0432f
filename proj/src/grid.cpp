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

#include "regret_audit/grid.hpp"

#include <algorithm>

#include "regret_audit/errors.hpp"

namespace regret_audit {

std::string to_string(GridStyle style) {
  return style == GridStyle::inclusive ? "inclusive" : "open_left";
}

GridStyle grid_style_from_string(const std::string& text) {
  if (text == "inclusive") return GridStyle::inclusive;
  if (text == "open_left" || text == "open-left") return GridStyle::open_left;
  throw InvalidInput("unknown grid style '" + text + "'");
}

GridSpec::GridSpec(std::size_t q, GridStyle style) : q_(q), style_(style) {
  if (q < 1) throw InvalidInput("grid needs q >= 1");
  const std::size_t first = style == GridStyle::inclusive ? 0 : 1;
  points_.reserve(q + 1 - first);
  // t/q as a single correctly rounded division, so the q=a points are
  // bitwise members of the q=2a grid.
  for (std::size_t t = first; t <= q; ++t) {
    points_.push_back(static_cast<double>(t) / static_cast<double>(q));
  }
}

bool GridSpec::contains(double value) const {
  return std::binary_search(points_.begin(), points_.end(), value);
}

}  // namespace regret_audit
