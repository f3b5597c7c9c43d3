/******************************************************************************
 * Copyright 2026 The EcoDrive Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "ecodrive/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ecodrive {

Axis::Axis(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw std::invalid_argument("axis must have at least one point");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) {
      throw std::invalid_argument("axis not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

Axis Axis::Linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw std::invalid_argument("linspace needs n >= 1");
  if (n == 1) return Axis({lo});
  std::vector<double> p(n);
  const double span = hi - lo;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  p.back() = hi;
  return Axis(std::move(p));
}

std::optional<Bracket> Axis::Locate(double x) const {
  if (!(x >= points_.front() && x <= points_.back())) return std::nullopt;
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - points_.begin()) - 1;
  if (points_[i] == x) return Bracket{i, i, 0.0};
  return Bracket{i, i + 1, (x - points_[i]) / (points_[i + 1] - points_[i])};
}

Bracket Axis::LocateClamped(double x, bool* clamped) const {
  const double q = std::clamp(x, points_.front(), points_.back());
  if (clamped != nullptr && q != x) *clamped = true;
  return *Locate(q);
}

Curve1D::Curve1D(Axis x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw std::invalid_argument("curve axis/value size mismatch");
  }
}

double Curve1D::operator()(double x, bool* clamped) const {
  const Bracket b = x_.LocateClamped(x, clamped);
  return Blend(y_[b.lo], y_[b.hi], b.w);
}

double Curve1D::Min() const { return *std::min_element(y_.begin(), y_.end()); }
double Curve1D::Max() const { return *std::max_element(y_.begin(), y_.end()); }

Map2D::Map2D(Axis x, Axis y, std::vector<double> z)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  if (z_.size() != x_.size() * y_.size()) {
    throw std::invalid_argument("map value count != axis product");
  }
}

double Map2D::operator()(double x, double y, bool* clamped) const {
  const Bracket bx = x_.LocateClamped(x, clamped);
  const Bracket by = y_.LocateClamped(y, clamped);
  const double lo = Blend(At(bx.lo, by.lo), At(bx.lo, by.hi), by.w);
  const double hi = Blend(At(bx.hi, by.lo), At(bx.hi, by.hi), by.w);
  return Blend(lo, hi, bx.w);
}

std::optional<Bracket> TimeGrid::Locate(double t) const {
  const double q = (t - first) / step;
  // Samples are first + step * m; recognise them by that same arithmetic so
  // a node never degrades into a bracket through division rounding.
  const double r = std::round(q);
  if (r >= 0.0 && r <= static_cast<double>(count - 1)) {
    const auto m = static_cast<std::size_t>(r);
    if (Sample(m) == t) return Bracket{m, m, 0.0};
  }
  if (!(q >= 0.0) || q > static_cast<double>(count - 1)) return std::nullopt;
  const double f = std::floor(q);
  const auto i = static_cast<std::size_t>(f);
  if (q == f) return Bracket{i, i, 0.0};
  return Bracket{i, i + 1, q - f};
}

}  // namespace ecodrive
