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

#include "oddcov/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "oddcov/binning.hpp"
#include "oddcov/coverage.hpp"
#include "oddcov/errors.hpp"
#include "oddcov/format.hpp"
#include "oddcov/grouping.hpp"
#include "oddcov/ingest.hpp"
#include "oddcov/odd_spec.hpp"
#include "oddcov/parallel.hpp"
#include "oddcov/report.hpp"
#include "oddcov/scenario_gen.hpp"
#include "oddcov/space.hpp"

namespace oddcov::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string spec;
  std::vector<std::string> data;
  std::string out_dir = "oddcov-out";
  unsigned jobs = 0;
  ConstraintEval eval = ConstraintEval::center;
  std::vector<std::string> disabled_groupings;
  double threshold = 1.0;
  OutOfRangePolicy policy = OutOfRangePolicy::skip;
  std::optional<Representation> representation;
  std::optional<std::uint64_t> limit;
  std::string covered;
  Strategy strategy = Strategy::center;
  std::uint64_t seed = 0;
  std::string x, y;
  std::size_t samples = 200;
};

const std::map<std::string, ConstraintEval> kEvalModes = {
    {"center", ConstraintEval::center}, {"corners", ConstraintEval::corners}};
const std::map<std::string, OutOfRangePolicy> kPolicies = {
    {"skip", OutOfRangePolicy::skip},
    {"error", OutOfRangePolicy::error},
    {"clamp", OutOfRangePolicy::clamp}};
const std::map<std::string, Representation> kRepresentations = {
    {"dense", Representation::dense}, {"sparse", Representation::sparse}};
const std::map<std::string, Strategy> kStrategies = {{"center", Strategy::center},
                                                     {"random", Strategy::random_in_bin}};

template <typename T>
std::string name_of(const std::map<std::string, T>& table, T value) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return {};
}

// Everything a subcommand needs once the spec is loaded.
struct Context {
  OddSpec spec;
  EffectiveDimensions dims;
  CombinationSpace space;
  std::string hash;
  unsigned jobs;
};

Context load(const Options& opt) {
  OddSpec spec = load_spec(opt.spec);
  require_valid(spec);
  if (!opt.disabled_groupings.empty()) spec = without_groupings(spec, opt.disabled_groupings);
  EffectiveDimensions dims = build_dimensions(spec);
  CombinationSpace space = CombinationSpace::from(dims);
  std::string hash = spec_hash(spec);
  return {std::move(spec), std::move(dims), std::move(space), std::move(hash),
          opt.jobs ? opt.jobs : default_jobs()};
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream file(dir / name, std::ios::binary);
  if (!file) throw DataError("cannot write '" + (dir / name).string() + "'");
  return file;
}

std::vector<fs::path> paths(const std::vector<std::string>& names) {
  return {names.begin(), names.end()};
}

CoveredSet load_covered(const Options& opt, const Context& ctx) {
  const fs::path path = opt.covered.empty() ? fs::path(opt.out_dir) / "covered.bin"
                                            : fs::path(opt.covered);
  CoveredSet set = CoveredSet::load(path);
  require_hash(set, ctx.hash);
  return set;
}

void print_ingest(std::ostream& out, const IngestStats& stats) {
  out << "rows read: " << stats.rows_read << '\n'
      << "rows mapped: " << stats.rows_mapped << '\n'
      << "rows out of range: " << stats.rows_out_of_range << '\n'
      << "rows malformed: " << stats.rows_malformed << '\n';
  if (stats.rows_clamped) out << "rows clamped: " << stats.rows_clamped << '\n';
  for (const auto& [name, n] : stats.out_of_range_by_parameter) {
    if (n) out << "  out of range " << name << ": " << n << '\n';
  }
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  const OddSpec spec = load_spec(opt.spec);
  const auto diagnostics = validate_spec(spec);
  for (const auto& d : diagnostics) {
    err << (d.severity == Severity::error ? "error" : "warning") << ": " << d.path << ": "
        << d.message << '\n';
  }
  if (has_errors(diagnostics)) return kUsageOrSpecError;
  out << "valid (spec hash " << spec_hash(spec) << ")\n";
  return kSuccess;
}

std::string_view kind_name(DimensionKind kind) {
  switch (kind) {
    case DimensionKind::binned: return "binned";
    case DimensionKind::categorical: return "categorical";
    case DimensionKind::collapsed: return "collapsed";
    case DimensionKind::mapped: return "mapped";
  }
  return "";
}

int cmd_bins(const Options& opt, std::ostream& out) {
  const Context ctx = load(opt);
  for (const auto& dim : ctx.dims.dims) {
    out << dim.name << " (" << kind_name(dim.kind) << ", " << dim.bin_count << " bins)\n";
    for (std::uint32_t b = 0; b < dim.bin_count; ++b) {
      out << "  " << b;
      if (dim.kind == DimensionKind::binned) {
        const bool last = b + 1 == dim.bin_count;
        out << "  [" << format_real(dim.edges.low(b)) << ", " << format_real(dim.edges.high(b))
            << (last ? "]" : ")");
      } else if (dim.kind == DimensionKind::categorical) {
        out << "  " << dim.edges.levels[b];
      }
      out << "  value " << format_real(dim.value(b)) << '\n';
    }
  }
  return kSuccess;
}

int cmd_space(const Options& opt, std::ostream& out) {
  const Context ctx = load(opt);
  const std::uint64_t full = count_spaces(ctx.spec).full_total;
  const RelevanceFilter filter = RelevanceFilter::from_spec(ctx.spec, ctx.dims, opt.eval);
  const std::uint64_t relevant = count_relevant(ctx.space, filter, ctx.jobs);
  const double kept = ctx.space.total() ? double(relevant) / double(ctx.space.total()) : 0.0;
  out << "full space: " << group_thousands(full) << '\n'
      << "adjusted space: " << group_thousands(ctx.space.total()) << '\n'
      << "relevant space: " << group_thousands(relevant) << '\n'
      << "reduction: " << format_fixed(100.0 * (1.0 - kept), 2) << "%\n";
  return kSuccess;
}

int cmd_analyze(const Options& opt, std::ostream& out) {
  if (opt.threshold < 0.0 || opt.threshold > 1.0) {
    throw CLI::ValidationError("--threshold", "must lie in [0, 1]");
  }
  const Context ctx = load(opt);
  const RelevanceFilter filter = RelevanceFilter::from_spec(ctx.spec, ctx.dims, opt.eval);
  IngestOptions options;
  options.policy = opt.policy;
  options.jobs = ctx.jobs;
  options.representation = opt.representation;
  const auto files = paths(opt.data);
  IngestResult ingest = ingest_files(files, ctx.spec, ctx.dims, ctx.space, options);
  CoverageReport report = compute_report(ingest.covered, ctx.space, filter, ctx.jobs);
  report.ingest = ingest.stats;

  ReportContext rc;
  rc.spec_hash = ctx.hash;
  rc.constraint_eval = name_of(kEvalModes, opt.eval);
  rc.out_of_range_policy = name_of(kPolicies, opt.policy);
  rc.threshold = opt.threshold;
  rc.dimensions = ctx.dims.names();
  rc.radices = ctx.space.radices();
  for (const auto& f : opt.data) rc.datasets.push_back(fs::path(f).filename().string());

  const fs::path dir = opt.out_dir;
  std::ostringstream text;
  text << render_table(report) << '\n';
  print_ingest(text, report.ingest);
  text << "gaps: " << group_thousands(report.gap_count) << '\n';
  open_output(dir, "report.txt") << text.str();
  open_output(dir, "report.json") << render_json(report, rc);
  ingest.covered.save(dir / "covered.bin");
  out << text.str();
  if (report.r_cov < opt.threshold) {
    out << "coverage " << format_fixed(100.0 * report.r_cov, 2) << "% is below the threshold "
        << format_fixed(100.0 * opt.threshold, 2) << "%\n";
    return kBelowThreshold;
  }
  return kSuccess;
}

int cmd_gaps(const Options& opt, std::ostream& out) {
  const Context ctx = load(opt);
  const CoveredSet covered = load_covered(opt, ctx);
  const RelevanceFilter filter = RelevanceFilter::from_spec(ctx.spec, ctx.dims, opt.eval);
  std::ofstream file = open_output(opt.out_dir, "gaps.csv");
  file << "gap_index";
  for (const auto& dim : ctx.dims.dims) {
    file << ',' << csv::escape(dim.name + "_bin") << ',' << csv::escape(dim.name + "_center");
  }
  file << '\n';
  std::vector<std::uint32_t> bins(ctx.space.rank());
  const std::uint64_t n =
      list_gaps(covered, ctx.space, filter, opt.limit, ctx.jobs, [&](ComboIndex gap) {
        ctx.space.decode(gap, bins);
        file << gap;
        for (std::size_t d = 0; d < bins.size(); ++d) {
          file << ',' << bins[d] << ',' << format_real(ctx.dims.dims[d].value(bins[d]));
        }
        file << '\n';
      });
  out << "gaps written: " << group_thousands(n) << '\n';
  return kSuccess;
}

int cmd_generate(const Options& opt, std::ostream& out) {
  const Context ctx = load(opt);
  const CoveredSet covered = load_covered(opt, ctx);
  const RelevanceFilter filter = RelevanceFilter::from_spec(ctx.spec, ctx.dims, opt.eval);
  std::ofstream file = open_output(opt.out_dir, "scenarios.csv");
  ScenarioWriter writer(file, ctx.spec);
  const GenerationOptions options{opt.strategy, opt.seed};
  const std::uint64_t n =
      list_gaps(covered, ctx.space, filter, opt.limit, ctx.jobs, [&](ComboIndex gap) {
        writer.write({gap, scenario_for_gap(gap, ctx.dims, ctx.space, options)});
      });
  out << "scenarios written: " << group_thousands(n) << '\n';
  return kSuccess;
}

int cmd_project(const Options& opt, std::ostream& out) {
  const Context ctx = load(opt);
  IngestOptions options;
  options.policy = opt.policy;
  options.jobs = ctx.jobs;
  IngestStats stats;
  const auto files = paths(opt.data);
  const ProjectionGrid grid =
      project_counts(files, ctx.spec, ctx.dims, opt.x, opt.y, options, &stats);
  const fs::path dir = opt.out_dir;
  {
    std::ofstream file = open_output(dir, "grid.csv");
    grid.write_csv(file);
  }

  // The first enabled constraint of the form abs(y) <= f(x) is drawn.
  nlohmann::ordered_json curve_json = nullptr;
  for (const auto& c : ctx.spec.constraints) {
    if (!c.enabled) continue;
    const auto expr = dsl::parse_expr(c.expression);
    const auto bound = match_abs_bound(*expr);
    if (!bound || bound->bounded != opt.y || (!bound->free.empty() && bound->free != opt.x)) {
      continue;
    }
    const auto& xe = grid.x_edges();
    const auto curve = sample_constraint_curve(*expr, opt.x, xe.front(), xe.back(), opt.samples);
    std::ofstream file = open_output(dir, "curve.csv");
    write_curve_csv(file, curve);
    curve_json = {{"constraint", c.name}, {"samples", curve.size()}, {"file", "curve.csv"}};
    break;
  }

  nlohmann::ordered_json j = {
      {"format_version", kFormatVersion},
      {"spec_hash", ctx.hash},
      {"x", opt.x},
      {"y", opt.y},
      {"nx", grid.nx()},
      {"ny", grid.ny()},
      {"points", grid.sum()},
      {"rows_read", stats.rows_read},
      {"rows_out_of_range", stats.rows_out_of_range},
      {"rows_malformed", stats.rows_malformed},
      {"grid", "grid.csv"},
      {"curve", curve_json},
  };
  open_output(dir, "projection.json") << j.dump(2) << '\n';
  out << "projected " << group_thousands(grid.sum()) << " points onto " << grid.nx() << " x "
      << grid.ny() << " cells\n";
  if (curve_json.is_null()) out << "no abs(" << opt.y << ") bound over " << opt.x << " to draw\n";
  return kSuccess;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverage analysis of scenario data against an ODD specification", "oddcov"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", opt.spec, "ODD specification (JSON)")->required();
    sub->add_option("--jobs", opt.jobs, "Worker threads (default: hardware concurrency)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--disable-grouping", opt.disabled_groupings,
                    "Ignore the grouping with this target name (repeatable)");
  };
  auto add_eval = [&](CLI::App* sub) {
    sub->add_option("--constraint-eval", opt.eval, "center or corners")
        ->transform(CLI::CheckedTransformer(kEvalModes));
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  };
  auto add_gap_options = [&](CLI::App* sub) {
    add_common(sub);
    add_eval(sub);
    add_out(sub);
    sub->add_option("--covered", opt.covered, "Covered set (default: <out>/covered.bin)");
    sub->add_option("--limit", opt.limit, "Stop after this many gaps");
  };

  auto* validate = app.add_subcommand("validate", "Check a specification");
  validate->add_option("spec", opt.spec, "ODD specification (JSON)")->required();

  auto* bins = app.add_subcommand("bins", "Print the bins of every dimension");
  add_common(bins);

  auto* space = app.add_subcommand("space", "Count the full, adjusted and relevant spaces");
  add_common(space);
  add_eval(space);

  auto* analyze = app.add_subcommand("analyze", "Measure coverage of datasets");
  add_common(analyze);
  add_eval(analyze);
  add_out(analyze);
  analyze->add_option("data", opt.data, "CSV datasets");
  analyze->add_option("--threshold", opt.threshold, "Required coverage ratio")
      ->capture_default_str();
  analyze->add_option("--on-out-of-range", opt.policy, "skip, error or clamp")
      ->transform(CLI::CheckedTransformer(kPolicies));
  analyze->add_option("--representation", opt.representation, "dense or sparse")
      ->transform(CLI::CheckedTransformer(kRepresentations));

  auto* gaps = app.add_subcommand("gaps", "List relevant combinations without data");
  add_gap_options(gaps);

  auto* generate = app.add_subcommand("generate", "Write one scenario per gap");
  add_gap_options(generate);
  generate->add_option("--strategy", opt.strategy, "center or random")
      ->transform(CLI::CheckedTransformer(kStrategies));
  generate->add_option("--seed", opt.seed, "Seed for the random strategy");

  auto* project = app.add_subcommand("project", "Project data counts onto two dimensions");
  add_common(project);
  add_out(project);
  project->add_option("data", opt.data, "CSV datasets")->required();
  project->add_option("--x", opt.x, "Horizontal dimension")->required();
  project->add_option("--y", opt.y, "Vertical dimension")->required();
  project->add_option("--samples", opt.samples, "Points on the constraint curve")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  project->add_option("--on-out-of-range", opt.policy, "skip, error or clamp")
      ->transform(CLI::CheckedTransformer(kPolicies));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*validate) return cmd_validate(opt, out, err);
    if (*bins) return cmd_bins(opt, out);
    if (*space) return cmd_space(opt, out);
    if (*analyze) return cmd_analyze(opt, out);
    if (*gaps) return cmd_gaps(opt, out);
    if (*generate) return cmd_generate(opt, out);
    if (*project) return cmd_project(opt, out);
    return kUsageOrSpecError;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageOrSpecError;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrSpecError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace oddcov::cli
