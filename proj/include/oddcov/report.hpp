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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oddcov/constraint_dsl.hpp"
#include "oddcov/coverage.hpp"
#include "oddcov/grouping.hpp"
#include "oddcov/ingest.hpp"
#include "oddcov/space.hpp"

namespace oddcov {

inline constexpr int kFormatVersion = 1;

// Data-point counts per (x bin, y bin) cell, marginalised over every other
// dimension.
class ProjectionGrid {
 public:
  // Throws SpecError for an unknown dimension or dim_x == dim_y.
  ProjectionGrid(const EffectiveDimensions& dims, std::string_view dim_x,
                 std::string_view dim_y);

  const std::string& dim_x() const { return dim_x_; }
  const std::string& dim_y() const { return dim_y_; }
  std::size_t x_index() const { return x_index_; }
  std::size_t y_index() const { return y_index_; }
  std::size_t nx() const { return x_edges_.size() - 1; }
  std::size_t ny() const { return y_edges_.size() - 1; }
  const std::vector<double>& x_edges() const { return x_edges_; }
  const std::vector<double>& y_edges() const { return y_edges_; }

  std::uint64_t count(std::size_t x, std::size_t y) const {
    return counts_[x * ny() + y];
  }
  void add(std::size_t x, std::size_t y, std::uint64_t n = 1) {
    counts_[x * ny() + y] += n;
  }
  // Adds an x-major count block of matching shape.
  void add_counts(std::span<const std::uint64_t> counts);
  std::uint64_t sum() const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  ProjectionGrid& operator+=(const ProjectionGrid& other);
  bool operator==(const ProjectionGrid&) const = default;

  // Header x_low,x_high,y_low,y_high,count; x-major rows.
  void write_csv(std::ostream& out) const;

 private:
  std::string dim_x_, dim_y_;
  std::size_t x_index_ = 0, y_index_ = 0;
  std::vector<double> x_edges_, y_edges_;
  std::vector<std::uint64_t> counts_;
};

// Counts mapped rows of the datasets; out-of-range rows follow `policy`.
ProjectionGrid project_counts(std::span<const std::filesystem::path> files,
                              const OddSpec& spec,
                              const EffectiveDimensions& dims,
                              std::string_view dim_x, std::string_view dim_y,
                              const IngestOptions& options,
                              IngestStats* stats = nullptr);

// `abs(X) <= f(Y)` (or `f(Y) >= abs(X)`) with f referencing only Y.
struct AbsBound {
  std::string bounded;      // X
  std::string free;         // Y; empty when f is constant
  dsl::ExprPtr bound;       // f
};

std::optional<AbsBound> match_abs_bound(const dsl::Expr& expr);

struct CurvePoint {
  double x = 0.0;
  double upper = 0.0;
  double lower = 0.0;
};

// n evenly spaced x over [lo, hi] (just lo when n == 1) with the bound
// evaluated at each. Throws SpecError ("unsupported") when the expression is
// not an abs bound in `dim_x`.
std::vector<CurvePoint> sample_constraint_curve(const dsl::Expr& expr,
                                                std::string_view dim_x,
                                                double lo, double hi,
                                                std::size_t n);

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);

// Three rows (Combinations, Combinations Covered, Coverage (%)) by two
// columns (Unconstrained, Constrained).
std::string render_table(const CoverageReport& report);

struct ReportContext {
  std::string spec_hash;
  std::string constraint_eval;
  std::string out_of_range_policy;
  double threshold = 1.0;
  std::vector<std::string> dimensions;
  std::vector<std::uint32_t> radices;
  std::vector<std::string> datasets;
};

std::string render_json(const CoverageReport& report, const ReportContext& ctx);

}  // namespace oddcov
