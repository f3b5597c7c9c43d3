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

/**
 * @file grid.hpp
 * @brief Axes, 1-D curves and 2-D maps with node-exact interpolation.
 **/

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ecodrive {

/// Enclosing cell of a query point on an axis. When the query sits exactly
/// on a node, `hi == lo` and `w == 0`, so interpolation returns the stored
/// node value bit-for-bit.
struct Bracket {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double w = 0.0;
};

class Axis {
 public:
  Axis() = default;
  /// Throws std::invalid_argument unless the points are strictly increasing.
  explicit Axis(std::vector<double> points);

  static Axis Linspace(double lo, double hi, std::size_t n);

  /// nullopt when x lies outside [front, back].
  std::optional<Bracket> Locate(double x) const;
  /// Same as Locate but clamps out-of-range queries onto the end nodes.
  Bracket LocateClamped(double x, bool* clamped = nullptr) const;

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  const std::vector<double>& points() const { return points_; }

 private:
  std::vector<double> points_;
};

inline double Blend(double a, double b, double w) {
  return (1.0 - w) * a + w * b;
}

/// Piecewise-linear curve y(x); queries outside the axis clamp to the ends.
class Curve1D {
 public:
  Curve1D() = default;
  Curve1D(Axis x, std::vector<double> y);

  double operator()(double x, bool* clamped = nullptr) const;
  const Axis& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  double Min() const;
  double Max() const;

 private:
  Axis x_;
  std::vector<double> y_;
};

/// Bilinear map z(x, y) stored row-major with x as the slow index.
class Map2D {
 public:
  Map2D() = default;
  Map2D(Axis x, Axis y, std::vector<double> z);

  double operator()(double x, double y, bool* clamped = nullptr) const;
  double At(std::size_t i, std::size_t j) const { return z_[i * y_.size() + j]; }
  const Axis& x() const { return x_; }
  const Axis& y() const { return y_; }
  const std::vector<double>& z() const { return z_; }

 private:
  Axis x_;
  Axis y_;
  std::vector<double> z_;
};

/// Uniformly spaced time samples `first + step * m`, m = 0..count-1.
/// The horizon base time is `first - step`, so sample m is the (m+1)-th
/// element of the green indicator.
struct TimeGrid {
  double first = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double Sample(std::size_t m) const { return first + step * static_cast<double>(m); }
  double Base() const { return first - step; }
  double Last() const { return Sample(count - 1); }
  std::optional<Bracket> Locate(double t) const;
};

}  // namespace ecodrive
