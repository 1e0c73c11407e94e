// csrbf: derivative tables, thresholds, sign checks, positive-definiteness
// sweeps and compactly supported RBF interpolation from the command line.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include "csrbf/interp.hpp"
#include "csrbf/io.hpp"
#include "csrbf/pdcheck.hpp"
#include "csrbf/pointset.hpp"
#include "csrbf/symbolic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Everything a subcommand may read. Filled from --config first, then from flags.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;

  std::optional<int> max_order;
  std::optional<std::string> format;

  std::optional<int> order;
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<int> dim;
  std::optional<int> grid;
  bool exact = false;

  std::vector<int> dims;
  std::vector<double> alphas;
  std::optional<int> n;
  std::optional<int> trials;
  std::optional<double> min_sep;

  std::optional<std::string> points;
  std::optional<std::string> values;
  std::optional<std::string> interpolant;
  std::optional<std::string> queries;

  std::optional<std::string> target;
  std::vector<int> levels;
};

template <class T>
void take(const json& j, const char* key, std::optional<T>& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

template <class T>
void take(const json& j, const char* key, std::vector<T>& field) {
  if (j.contains(key)) field = j.at(key).get<std::vector<T>>();
}

RunConfig load_config(const std::string& path) {
  const json j = csrbf::io::read_json(path);
  if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
  RunConfig c;
  try {
    take(j, "seed", c.seed);
    take(j, "out", c.out);
    take(j, "tol", c.tol);
    take(j, "max_order", c.max_order);
    take(j, "format", c.format);
    take(j, "order", c.order);
    take(j, "alpha", c.alpha);
    take(j, "delta", c.delta);
    take(j, "dim", c.dim);
    take(j, "grid", c.grid);
    if (j.contains("exact")) c.exact = j.at("exact").get<bool>();
    take(j, "dims", c.dims);
    take(j, "alphas", c.alphas);
    take(j, "n", c.n);
    take(j, "trials", c.trials);
    take(j, "min_sep", c.min_sep);
    take(j, "points", c.points);
    take(j, "values", c.values);
    take(j, "interpolant", c.interpolant);
    take(j, "queries", c.queries);
    take(j, "target", c.target);
    take(j, "levels", c.levels);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return c;
}

template <class T>
void overlay(std::optional<T>& base, const std::optional<T>& flag) {
  if (flag) base = flag;
}

template <class T>
void overlay(std::vector<T>& base, const std::vector<T>& flag) {
  if (!flag.empty()) base = flag;
}

RunConfig merge(RunConfig base, const RunConfig& flags) {
  overlay(base.seed, flags.seed);
  overlay(base.out, flags.out);
  overlay(base.tol, flags.tol);
  overlay(base.max_order, flags.max_order);
  overlay(base.format, flags.format);
  overlay(base.order, flags.order);
  overlay(base.alpha, flags.alpha);
  overlay(base.delta, flags.delta);
  overlay(base.dim, flags.dim);
  overlay(base.grid, flags.grid);
  base.exact = base.exact || flags.exact;
  overlay(base.dims, flags.dims);
  overlay(base.alphas, flags.alphas);
  overlay(base.n, flags.n);
  overlay(base.trials, flags.trials);
  overlay(base.min_sep, flags.min_sep);
  overlay(base.points, flags.points);
  overlay(base.values, flags.values);
  overlay(base.interpolant, flags.interpolant);
  overlay(base.queries, flags.queries);
  overlay(base.target, flags.target);
  overlay(base.levels, flags.levels);
  return base;
}

template <class T>
T require(const std::optional<T>& v, const char* name) {
  if (!v) throw ConfigError(std::string("missing required setting --") + name);
  return *v;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ConfigError(std::string("--") + name + " must be positive");
}

void require_at_least(long long v, long long lo, const char* name) {
  if (v < lo) throw ConfigError(std::string("--") + name + " must be >= " + std::to_string(lo));
}

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const RunConfig& c, Fn&& write) {
  if (c.out) {
    auto file = csrbf::io::open_output(*c.out);
    write(file);
  } else {
    write(std::cout);
  }
}

// ---------------------------------------------------------------------------

int cmd_derivs(const RunConfig& c) {
  const int max_order = require(c.max_order, "max-order");
  require_at_least(max_order, 1, "max-order");
  const std::string format = c.format.value_or("table");
  if (format != "table" && format != "json") throw ConfigError("--format must be 'table' or 'json'");

  const auto table = csrbf::derivative_table(max_order);
  json doc = json::array();
  for (const auto& q : table) doc.push_back(csrbf::io::to_json(q));

  if (c.out) {
    auto file = csrbf::io::open_output(*c.out);
    file << doc.dump(2) << "\n";
  }
  if (format == "json" && !c.out) {
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& q : table) std::cout << csrbf::render(q) << "\n";
  }
  return kExitOk;
}

int cmd_thresholds(const RunConfig& c) {
  const int max_order = c.max_order.value_or(10);
  require_at_least(max_order, 1, "max-order");

  auto max_dim_for = [](std::int64_t alpha) {
    int d = 0;
    while (csrbf::min_alpha_for_dimension(d + 1) <= alpha) ++d;
    return d;
  };

  const std::int64_t top = csrbf::alpha_threshold(max_order).alpha;
  emit(c, [&](std::ostream& os) {
    os << "j,alpha_j,max_dim\n";
    for (int j = 1; j <= max_order; ++j) {
      const auto a = csrbf::alpha_threshold(j).alpha;
      os << j << "," << a << "," << max_dim_for(a) << "\n";
    }
    for (int d = 1; csrbf::min_alpha_for_dimension(d) <= top; ++d) {
      const auto a = csrbf::min_alpha_for_dimension(d);
      if (csrbf::min_alpha_for_dimension(d + 1) != a) os << "# d <= " << d << " requires alpha >= " << a << "\n";
    }
  });
  return kExitOk;
}

int cmd_check_sign(const RunConfig& c) {
  const int order = require(c.order, "order");
  require_at_least(order, 1, "order");
  const double alpha = c.alpha.value_or(static_cast<double>(csrbf::alpha_threshold(order).alpha));
  if (!(alpha >= 0.0)) throw ConfigError("--alpha must be >= 0");
  const int grid = c.grid.value_or(10000);
  require_at_least(grid, 2, "grid");
  const double tol = c.tol.value_or(c.exact ? 0.0 : 1e-15);
  if (!(tol >= 0.0)) throw ConfigError("--tol must be >= 0");

  const auto report = csrbf::check_sign_condition(order, alpha, grid, tol,
                                                  c.exact ? csrbf::EvalMode::exact : csrbf::EvalMode::floating);
  emit(c, [&](std::ostream& os) { os << csrbf::io::to_json(report).dump() << "\n"; });
  if (!report.pass) {
    std::cerr << "sign condition violated at " << report.violations.size() << " grid points (order " << order
              << ", alpha " << alpha << ", min value " << report.min_value << ")\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_check_pd(const RunConfig& c) {
  csrbf::SweepOptions options;
  options.dims = c.dims;
  if (options.dims.empty() && c.dim) options.dims = {*c.dim};
  options.alphas = c.alphas;
  if (options.alphas.empty() && c.alpha) options.alphas = {*c.alpha};
  if (options.dims.empty()) throw ConfigError("check-pd needs --dims (or --dim)");
  if (options.alphas.empty()) throw ConfigError("check-pd needs --alphas (or --alpha)");
  for (int d : options.dims) require_at_least(d, 1, "dims");
  for (double a : options.alphas) require_positive(a, "alphas");
  options.n = c.n.value_or(200);
  options.trials = c.trials.value_or(5);
  options.seed = c.seed.value_or(0);
  options.delta = c.delta.value_or(1.0);
  options.min_sep = c.min_sep;
  options.tolerance = c.tol.value_or(csrbf::kDefaultPdTolerance);
  require_at_least(options.n, 1, "n");
  if (options.n > csrbf::kDenseLimit) throw ConfigError("--n is limited to 2000 for eigen-analysis");
  require_at_least(options.trials, 1, "trials");
  require_positive(options.delta, "delta");
  if (options.min_sep) require_positive(*options.min_sep, "min-sep");
  if (!(options.tolerance >= 0.0)) throw ConfigError("--tol must be >= 0");

  const auto result = csrbf::pd_sweep(options);
  emit(c, [&](std::ostream& os) {
    for (const auto& r : result.reports) os << csrbf::io::to_json(r).dump() << "\n";
  });

  for (const auto& cell : result.cells)
    std::cerr << "d=" << cell.dim << " alpha=" << cell.alpha << ": " << cell.passed << "/" << cell.trials
              << " positive, worst min eigenvalue " << cell.worst_min_eigenvalue << "\n";
  const int failed = static_cast<int>(result.reports.size()) - result.passed();
  if (failed > 0) {
    std::cerr << failed << " of " << result.reports.size() << " Gram matrices were not positive definite\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_fit(const RunConfig& c) {
  const auto points = csrbf::io::read_points_csv(require(c.points, "points"));
  const auto values = csrbf::io::read_values_csv(require(c.values, "values"));
  if (values.size() != static_cast<std::size_t>(points.size()))
    throw ConfigError("values file has " + std::to_string(values.size()) + " rows, points file has " +
                      std::to_string(points.size()));
  const double alpha = c.alpha.value_or(static_cast<double>(csrbf::min_alpha_for_dimension(points.dim())));
  const csrbf::KernelParams params(alpha, c.delta.value_or(1.0), points.dim());

  const auto s = csrbf::fit(points, values, params);
  emit(c, [&](std::ostream& os) { os << csrbf::io::to_json(s).dump(2) << "\n"; });
  return kExitOk;
}

int cmd_eval(const RunConfig& c) {
  const auto s = csrbf::io::interpolant_from_json(csrbf::io::read_json(require(c.interpolant, "interpolant")));
  const auto rows = csrbf::io::read_csv(std::filesystem::path(require(c.queries, "queries")));
  Eigen::MatrixXd queries(s.params().dim(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(s.params().dim()))
      throw csrbf::io::FormatError(*c.queries + ": query has " + std::to_string(rows[i].size()) +
                                   " columns, interpolant dimension is " + std::to_string(s.params().dim()));
    for (int k = 0; k < s.params().dim(); ++k) queries(k, static_cast<Eigen::Index>(i)) = rows[i][k];
  }
  const Eigen::VectorXd v = s.evaluate_many(queries);
  emit(c, [&](std::ostream& os) { csrbf::io::write_values_csv(os, {v.data(), static_cast<std::size_t>(v.size())}); });
  return kExitOk;
}

int cmd_converge(const RunConfig& c) {
  const int dim = c.dim.value_or(1);
  require_at_least(dim, 1, "dim");
  const std::string target_name = c.target.value_or("sin");
  const double alpha = c.alpha.value_or(static_cast<double>(csrbf::min_alpha_for_dimension(dim)));
  const csrbf::KernelParams params(alpha, c.delta.value_or(1.0), dim);
  csrbf::ConvergenceOptions options;
  options.dim = dim;
  options.levels = c.levels.empty() ? std::vector<int>{20, 40, 80, 160} : c.levels;
  options.seed = c.seed.value_or(0);
  for (std::size_t i = 0; i < options.levels.size(); ++i) {
    require_at_least(options.levels[i], 1, "levels");
    if (i > 0 && options.levels[i] <= options.levels[i - 1]) throw ConfigError("--levels must be strictly increasing");
  }
  const auto target = csrbf::make_target(target_name, dim);

  const auto rows = csrbf::convergence_experiment(target, params, options);
  emit(c, [&](std::ostream& os) { csrbf::io::write_convergence_csv(os, rows); });
  int failed = 0;
  for (const auto& r : rows) {
    if (r.failure.empty()) continue;
    ++failed;
    std::cerr << "N=" << r.n << ": " << r.failure << "\n";
  }
  return failed ? kExitNumerical : kExitOk;
}

int cmd_points(const RunConfig& c) {
  const int dim = require(c.dim, "dim");
  const int n = require(c.n, "n");
  require_at_least(dim, 1, "dim");
  require_at_least(n, 1, "n");
  const double min_sep = c.min_sep.value_or(csrbf::default_min_separation(dim, n));
  require_positive(min_sep, "min-sep");
  const auto points = csrbf::random_pointset(dim, n, c.seed.value_or(0), min_sep);
  emit(c, [&](std::ostream& os) { csrbf::io::write_points_csv(os, points); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth compactly supported radial basis functions"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with settings; flags override it")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--out", flags.out, "Output path (stdout when omitted)");
  app.add_option("--tol", flags.tol, "Tolerance override");

  auto* derivs = app.add_subcommand("derivs", "Derivative polynomials of phi(sqrt t)");
  derivs->add_option("--max-order", flags.max_order, "Highest derivative order");
  derivs->add_option("--format", flags.format, "stdout format: table or json");

  auto* thresholds = app.add_subcommand("thresholds", "alpha_j thresholds and dimension coverage (CSV)");
  thresholds->add_option("--max-order", flags.max_order, "Highest order j (default 10)");

  auto* check_sign = app.add_subcommand("check-sign", "Check (-1)^j d^j/dt^j phi(sqrt t) >= 0 on a grid");
  check_sign->add_option("--order", flags.order, "Derivative order j");
  check_sign->add_option("--alpha", flags.alpha, "Shape parameter (default alpha_j)");
  check_sign->add_option("--grid", flags.grid, "Uniform grid points (default 10000)");
  check_sign->add_flag("--exact", flags.exact, "Decide signs in exact rational arithmetic");

  auto* check_pd = app.add_subcommand("check-pd", "Positive-definiteness sweep over random point sets (JSONL)");
  check_pd->add_option("--dims", flags.dims, "Dimensions");
  check_pd->add_option("--dim", flags.dim, "Single dimension");
  check_pd->add_option("--alphas", flags.alphas, "Shape parameters");
  check_pd->add_option("--alpha", flags.alpha, "Single shape parameter");
  check_pd->add_option("--n", flags.n, "Points per set (default 200)");
  check_pd->add_option("--trials", flags.trials, "Point sets per cell (default 5)");
  check_pd->add_option("--delta", flags.delta, "Support radius (default 1)");
  check_pd->add_option("--min-sep", flags.min_sep, "Minimum point separation (default 0.25 n^{-1/d})");

  auto* fit = app.add_subcommand("fit", "Fit an interpolant to scattered data (JSON)");
  fit->add_option("--points", flags.points, "Centers CSV, one point per row");
  fit->add_option("--values", flags.values, "Values CSV, one column");
  fit->add_option("--alpha", flags.alpha, "Shape parameter (default: minimal alpha for the dimension)");
  fit->add_option("--delta", flags.delta, "Support radius (default 1)");

  auto* eval = app.add_subcommand("eval", "Evaluate an interpolant at query points (CSV)");
  eval->add_option("--interpolant", flags.interpolant, "Interpolant JSON from fit");
  eval->add_option("--queries", flags.queries, "Query CSV, one point per row");

  auto* converge = app.add_subcommand("converge", "Convergence experiment (CSV)");
  converge->add_option("--target", flags.target, "constant, sin, gaussian or franke (default sin)");
  converge->add_option("--dim", flags.dim, "Dimension (default 1)");
  converge->add_option("--alpha", flags.alpha, "Shape parameter (default: minimal alpha for the dimension)");
  converge->add_option("--delta", flags.delta, "Support radius (default 1)");
  converge->add_option("--levels", flags.levels, "Center counts, strictly increasing (default 20 40 80 160)");

  auto* points = app.add_subcommand("points", "Random point set with minimum separation (CSV)");
  points->add_option("--dim", flags.dim, "Dimension");
  points->add_option("--n", flags.n, "Number of points");
  points->add_option("--min-sep", flags.min_sep, "Minimum separation (default 0.25 n^{-1/d})");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    const RunConfig config = merge(config_path.empty() ? RunConfig{} : load_config(config_path), flags);
    if (derivs->parsed()) return cmd_derivs(config);
    if (thresholds->parsed()) return cmd_thresholds(config);
    if (check_sign->parsed()) return cmd_check_sign(config);
    if (check_pd->parsed()) return cmd_check_pd(config);
    if (fit->parsed()) return cmd_fit(config);
    if (eval->parsed()) return cmd_eval(config);
    if (converge->parsed()) return cmd_converge(config);
    if (points->parsed()) return cmd_points(config);
  } catch (const csrbf::FitError& e) {
    std::cerr << "error: " << e.what() << "\n" << csrbf::io::to_json(e.report()).dump() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const csrbf::io::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInvalid;
}
