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

#include "oddcov/report.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "oddcov/errors.hpp"
#include "oddcov/format.hpp"

namespace oddcov {

ProjectionGrid::ProjectionGrid(const EffectiveDimensions& dims, std::string_view dim_x,
                               std::string_view dim_y)
    : dim_x_(dim_x), dim_y_(dim_y) {
  const auto x = dims.find(dim_x);
  const auto y = dims.find(dim_y);
  if (!x) throw SpecError("unknown dimension '" + dim_x_ + "'");
  if (!y) throw SpecError("unknown dimension '" + dim_y_ + "'");
  if (*x == *y) throw SpecError("projection axes must differ");
  x_index_ = *x;
  y_index_ = *y;
  x_edges_ = dims.dims[*x].axis_edges();
  y_edges_ = dims.dims[*y].axis_edges();
  counts_.assign(nx() * ny(), 0);
}

void ProjectionGrid::add_counts(std::span<const std::uint64_t> counts) {
  if (counts.size() != counts_.size()) throw std::invalid_argument("projection shape mismatch");
  for (std::size_t i = 0; i < counts.size(); ++i) counts_[i] += counts[i];
}

std::uint64_t ProjectionGrid::sum() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ProjectionGrid& ProjectionGrid::operator+=(const ProjectionGrid& other) {
  if (other.dim_x_ != dim_x_ || other.dim_y_ != dim_y_) {
    throw std::invalid_argument("projection axes differ");
  }
  add_counts(other.counts_);
  return *this;
}

void ProjectionGrid::write_csv(std::ostream& out) const {
  out << "x_low,x_high,y_low,y_high,count\n";
  for (std::size_t x = 0; x < nx(); ++x) {
    for (std::size_t y = 0; y < ny(); ++y) {
      out << format_real(x_edges_[x]) << ',' << format_real(x_edges_[x + 1]) << ','
          << format_real(y_edges_[y]) << ',' << format_real(y_edges_[y + 1]) << ','
          << count(x, y) << '\n';
    }
  }
}

ProjectionGrid project_counts(std::span<const std::filesystem::path> files, const OddSpec& spec,
                              const EffectiveDimensions& dims, std::string_view dim_x,
                              std::string_view dim_y, const IngestOptions& options,
                              IngestStats* stats) {
  ProjectionGrid grid(dims, dim_x, dim_y);
  IngestOptions with_projection = options;
  with_projection.projection = std::pair{grid.x_index(), grid.y_index()};
  const CombinationSpace space = CombinationSpace::from(dims);
  IngestResult result = ingest_files(files, spec, dims, space, with_projection);
  grid.add_counts(result.projection_counts);
  if (stats) *stats = std::move(result.stats);
  return grid;
}

namespace {

const std::string* identifier_of(const dsl::Expr& e) {
  const auto* id = std::get_if<dsl::Identifier>(&e.node);
  return id ? &id->name : nullptr;
}

// X in abs(X) when `e` is that call.
const std::string* abs_argument(const dsl::Expr& e) {
  const auto* call = std::get_if<dsl::Call>(&e.node);
  if (!call || call->fn != dsl::Function::abs) return nullptr;
  return identifier_of(*call->args.front());
}

}  // namespace

std::optional<AbsBound> match_abs_bound(const dsl::Expr& expr) {
  const auto* cmp = std::get_if<dsl::Binary>(&expr.node);
  if (!cmp) return std::nullopt;
  const dsl::Expr* abs_side = nullptr;
  const dsl::Expr* bound_side = nullptr;
  if (cmp->op == dsl::BinaryOp::le || cmp->op == dsl::BinaryOp::lt) {
    abs_side = cmp->lhs.get();
    bound_side = cmp->rhs.get();
  } else if (cmp->op == dsl::BinaryOp::ge || cmp->op == dsl::BinaryOp::gt) {
    abs_side = cmp->rhs.get();
    bound_side = cmp->lhs.get();
  } else {
    return std::nullopt;
  }
  const std::string* bounded = abs_argument(*abs_side);
  if (!bounded) return std::nullopt;
  std::vector<std::string> names = dsl::identifiers(*bound_side);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.size() > 1 || (names.size() == 1 && names.front() == *bounded)) return std::nullopt;
  AbsBound out;
  out.bounded = *bounded;
  if (!names.empty()) out.free = names.front();
  out.bound = cmp->op == dsl::BinaryOp::le || cmp->op == dsl::BinaryOp::lt ? cmp->rhs : cmp->lhs;
  return out;
}

std::vector<CurvePoint> sample_constraint_curve(const dsl::Expr& expr, std::string_view dim_x,
                                                double lo, double hi, std::size_t n) {
  const auto bound = match_abs_bound(expr);
  if (!bound || (!bound->free.empty() && bound->free != dim_x)) {
    throw SpecError("unsupported constraint for curve sampling: " + dsl::pretty_print(expr));
  }
  std::vector<CurvePoint> curve;
  curve.reserve(n);
  dsl::EvalEnvironment env;
  for (std::size_t i = 0; i < n; ++i) {
    double x = lo;
    if (n > 1) {
      x = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    env[std::string(dim_x)] = x;
    const double y = dsl::eval_numeric(*bound->bound, env);
    curve.push_back({x, y, -y});
  }
  return curve;
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "x,y_upper,y_lower\n";
  for (const auto& p : curve) {
    out << format_real(p.x) << ',' << format_real(p.upper) << ',' << format_real(p.lower) << '\n';
  }
}

std::string render_table(const CoverageReport& report) {
  const std::string rows[3][3] = {
      {"Combinations", group_thousands(report.total), group_thousands(report.relevant)},
      {"Combinations Covered", group_thousands(report.covered_total),
       group_thousands(report.covered_relevant)},
      {"Coverage (%)", format_fixed(100.0 * report.r_cov_unconstrained, 2),
       format_fixed(100.0 * report.r_cov, 2)},
  };
  const std::string head[3] = {"", "Unconstrained", "Constrained"};
  std::size_t width[3] = {head[0].size(), head[1].size(), head[2].size()};
  for (const auto& row : rows) {
    for (int c = 0; c < 3; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::string (&cells)[3]) {
    out << std::left << std::setw(static_cast<int>(width[0])) << cells[0];
    for (int c = 1; c < 3; ++c) {
      out << "  " << std::right << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  line(head);
  for (const auto& row : rows) line(row);
  return out.str();
}

std::string render_json(const CoverageReport& report, const ReportContext& ctx) {
  using nlohmann::ordered_json;
  ordered_json dims = ordered_json::array();
  for (std::size_t i = 0; i < ctx.dimensions.size(); ++i) {
    dims.push_back({{"name", ctx.dimensions[i]}, {"bins", ctx.radices[i]}});
  }
  ordered_json by_param = ordered_json::object();
  for (const auto& [name, n] : report.ingest.out_of_range_by_parameter) by_param[name] = n;
  ordered_json j = {
      {"format_version", kFormatVersion},
      {"spec_hash", ctx.spec_hash},
      {"constraint_eval", ctx.constraint_eval},
      {"out_of_range_policy", ctx.out_of_range_policy},
      {"dimensions", dims},
      {"datasets", ctx.datasets},
      {"total", report.total},
      {"relevant", report.relevant},
      {"covered_total", report.covered_total},
      {"covered_relevant", report.covered_relevant},
      {"gap_count", report.gap_count},
      {"r_cov", report.r_cov},
      {"r_cov_unconstrained", report.r_cov_unconstrained},
      {"threshold", ctx.threshold},
      {"passed", report.r_cov >= ctx.threshold},
      {"ingest",
       {{"rows_read", report.ingest.rows_read},
        {"rows_mapped", report.ingest.rows_mapped},
        {"rows_out_of_range", report.ingest.rows_out_of_range},
        {"rows_malformed", report.ingest.rows_malformed},
        {"rows_clamped", report.ingest.rows_clamped},
        {"out_of_range_by_parameter", by_param}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace oddcov
