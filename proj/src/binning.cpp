// Copyright 2026 The oddcov Authors
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

#include "oddcov/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oddcov/errors.hpp"

namespace oddcov {

std::uint32_t BinEdges::size() const {
  return categorical() ? static_cast<std::uint32_t>(levels.size())
                       : static_cast<std::uint32_t>(edges.size() - 1);
}

double BinEdges::range_min() const { return categorical() ? 0.0 : edges.front(); }

double BinEdges::range_max() const {
  return categorical() ? static_cast<double>(levels.size() - 1) : edges.back();
}

double BinEdges::low(std::uint32_t index) const {
  if (index >= size()) throw std::out_of_range("bin index out of range");
  return categorical() ? index : edges[index];
}

double BinEdges::high(std::uint32_t index) const {
  if (index >= size()) throw std::out_of_range("bin index out of range");
  return categorical() ? index : edges[index + 1];
}

std::vector<double> equal_width_edges(double min, double max, std::uint32_t n) {
  std::vector<double> edges(n + 1);
  const double span = max - min;
  for (std::uint32_t i = 0; i <= n; ++i) edges[i] = min + span * i / n;
  edges.front() = min;
  edges.back() = max;
  return edges;
}

namespace {

double density_at(const ProfilePoint& a, const ProfilePoint& b, double x) {
  return a.c + (b.c - a.c) * (x - a.x) / (b.x - a.x);
}

}  // namespace

double criticality_mass(const CriticalityProfile& profile, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (profile.form == ProfileForm::uniform) return hi - lo;
  double mass = 0.0;
  const auto& pts = profile.points;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = std::max(lo, pts[k].x);
    const double b = std::min(hi, pts[k + 1].x);
    if (!(b > a)) continue;
    const double ca = density_at(pts[k], pts[k + 1], a);
    const double cb = density_at(pts[k], pts[k + 1], b);
    mass += 0.5 * (ca + cb) * (b - a);
  }
  return mass;
}

BinEdges edges_from_criticality(const CriticalityProfile& profile, double min,
                                double max, std::uint32_t n) {
  if (n < 1) throw SpecError("bin count must be positive");
  if (!(min < max)) throw SpecError("empty parameter range");
  BinEdges out;
  if (profile.form == ProfileForm::uniform) {
    out.edges = equal_width_edges(min, max, n);
    return out;
  }
  const auto& pts = profile.points;
  if (pts.size() < 2 || pts.front().x != min || pts.back().x != max) {
    throw SpecError("criticality profile '" + profile.name +
                    "' does not span the parameter range");
  }
  const std::size_t segments = pts.size() - 1;
  std::vector<double> cumulative(segments + 1, 0.0);
  for (std::size_t k = 0; k < segments; ++k) {
    cumulative[k + 1] = cumulative[k] + 0.5 * (pts[k].c + pts[k + 1].c) *
                                            (pts[k + 1].x - pts[k].x);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) {
    throw SpecError("criticality profile '" + profile.name + "' has zero mass");
  }

  out.edges.resize(n + 1);
  out.edges.front() = min;
  out.edges.back() = max;
  std::size_t k = 0;
  for (std::uint32_t i = 1; i < n; ++i) {
    const double target = total * i / n;
    while (k + 1 < segments && cumulative[k + 1] < target) ++k;
    const double x0 = pts[k].x, x1 = pts[k + 1].x;
    const double c0 = pts[k].c, c1 = pts[k + 1].c;
    const double length = x1 - x0;
    const double m = std::max(0.0, target - cumulative[k]);
    // Solve c0 t + (c1 - c0) t^2 / (2 L) = m in the cancellation-free form.
    const double a = 0.5 * (c1 - c0) / length;
    const double disc = std::max(0.0, c0 * c0 + 4.0 * a * m);
    const double denom = c0 + std::sqrt(disc);
    double t = denom > 0.0 ? 2.0 * m / denom : 0.0;
    t = std::clamp(t, 0.0, length);
    out.edges[i] = x0 + t;
    if (!(out.edges[i] > out.edges[i - 1])) {
      throw SpecError("criticality profile '" + profile.name +
                      "' cannot be split into " + std::to_string(n) +
                      " distinct bins");
    }
  }
  if (!(out.edges[n] > out.edges[n - 1])) {
    throw SpecError("criticality profile '" + profile.name +
                    "' cannot be split into " + std::to_string(n) + " distinct bins");
  }
  return out;
}

BinEdges build_edges(const ParameterSpec& param,
                     std::span<const CriticalityProfile> profiles) {
  BinEdges out;
  out.parameter = param.name;
  if (!param.continuous()) {
    if (param.levels.empty()) {
      throw SpecError("parameter '" + param.name + "' has no levels");
    }
    out.levels = param.levels;
    return out;
  }
  if (!(param.min < param.max)) {
    throw SpecError("parameter '" + param.name + "' needs min < max");
  }
  const double range = param.max - param.min;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, std::monostate>) {
          throw SpecError("parameter '" + param.name + "' has no bin_scheme");
        } else if constexpr (std::is_same_v<S, CountScheme>) {
          if (s.count < 1) throw SpecError("parameter '" + param.name + "': bin count must be positive");
          out.edges = equal_width_edges(param.min, param.max, s.count);
        } else if constexpr (std::is_same_v<S, WidthScheme>) {
          if (!(s.width > 0.0)) throw SpecError("parameter '" + param.name + "': bin width must be positive");
          if (s.width > range) throw SpecError("parameter '" + param.name + "': bin width exceeds range");
          auto n = static_cast<std::uint64_t>(std::ceil(range / s.width));
          // Absorb a rounding sliver: range/width = 100.0000000001 is 100 bins.
          if (n > 1 && param.min + (n - 1) * s.width >= param.max - 1e-9 * range) --n;
          if (n > std::numeric_limits<std::uint32_t>::max()) {
            throw SpecError("parameter '" + param.name + "': too many bins");
          }
          out.edges.resize(n + 1);
          for (std::uint64_t i = 0; i < n; ++i) out.edges[i] = param.min + i * s.width;
          out.edges[n] = param.max;
        } else if constexpr (std::is_same_v<S, ExplicitEdgesScheme>) {
          if (s.edges.size() < 2 || s.edges.front() != param.min || s.edges.back() != param.max ||
              !std::is_sorted(s.edges.begin(), s.edges.end(), std::less_equal<>())) {
            throw SpecError("parameter '" + param.name + "': explicit edges must ascend from min to max");
          }
          out.edges = s.edges;
        } else if constexpr (std::is_same_v<S, CriticalityScheme>) {
          const CriticalityProfile* profile = nullptr;
          for (const auto& p : profiles) {
            if (p.name == s.profile) profile = &p;
          }
          if (profile == nullptr) {
            throw SpecError("parameter '" + param.name + "': unknown profile '" + s.profile + "'");
          }
          out.edges = edges_from_criticality(*profile, param.min, param.max, s.bins).edges;
        }
      },
      param.bin_scheme);
  return out;
}

std::optional<std::uint32_t> value_to_bin(double value, const BinEdges& edges) {
  if (std::isnan(value)) return std::nullopt;
  if (edges.categorical()) {
    if (value < 0.0 || value >= static_cast<double>(edges.levels.size()) ||
        value != std::floor(value)) {
      return std::nullopt;
    }
    return static_cast<std::uint32_t>(value);
  }
  const auto& e = edges.edges;
  if (value < e.front() || value > e.back()) return std::nullopt;
  if (value == e.back()) return static_cast<std::uint32_t>(e.size() - 2);
  const auto it = std::upper_bound(e.begin(), e.end(), value);
  return static_cast<std::uint32_t>(it - e.begin() - 1);
}

double bin_center(std::uint32_t index, const BinEdges& edges) {
  if (index >= edges.size()) throw std::out_of_range("bin index out of range");
  if (edges.categorical()) return index;
  return (edges.edges[index] + edges.edges[index + 1]) / 2.0;
}

}  // namespace oddcov
