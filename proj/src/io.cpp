#include "csrbf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace csrbf::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// JSON has no inf/nan; they are written as null.
nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::vector<std::vector<double>> read_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first_content) {
        first_content = false;
        continue;  // header
      }
      throw FormatError(source + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    first_content = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                        " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_csv(in, path.string());
}

PointSet points_from_rows(const std::vector<std::vector<double>>& rows, const std::string& source) {
  if (rows.empty()) throw FormatError(source + ": no points");
  const auto dim = static_cast<int>(rows.front().size());
  Eigen::MatrixXd coords(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int k = 0; k < dim; ++k) coords(k, static_cast<Eigen::Index>(i)) = rows[i][k];
  return PointSet(dim, std::move(coords));
}

PointSet read_points_csv(const std::filesystem::path& path) { return points_from_rows(read_csv(path), path.string()); }

void write_points_csv(std::ostream& out, const PointSet& points, bool header) {
  if (header) {
    for (int k = 0; k < points.dim(); ++k) out << (k ? "," : "") << "x" << (k + 1);
    out << "\n";
  }
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    for (int k = 0; k < points.dim(); ++k) out << (k ? "," : "") << format_double(points.coords()(k, i));
    out << "\n";
  }
}

std::vector<double> read_values_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 1) throw FormatError(path.string() + ": value file must have a single column");
    values.push_back(r.front());
  }
  return values;
}

void write_values_csv(std::ostream& out, std::span<const double> values, const std::string& header) {
  if (!header.empty()) out << header << "\n";
  for (double v : values) out << format_double(v) << "\n";
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "N,fill_distance,sup_error,cond_estimate\n";
  for (const auto& r : rows)
    out << r.n << "," << format_double(r.fill_distance) << "," << format_double(r.sup_error) << ","
        << format_double(r.cond_estimate) << "\n";
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const DerivativePoly& poly) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : poly.terms())
    terms.push_back({{"alpha_pow", m.alpha_pow}, {"u_pow", m.u_pow}, {"coeff", c.str()}});
  return {{"order", poly.order()}, {"terms", std::move(terms)}};
}

DerivativePoly poly_from_json(const nlohmann::json& j) {
  try {
    DerivativePoly::TermMap terms;
    for (const auto& t : j.at("terms")) {
      const Monomial m{t.at("alpha_pow").get<int>(), t.at("u_pow").get<int>()};
      if (terms.count(m)) throw FormatError("repeated monomial in polynomial JSON");
      terms.emplace(m, BigInt(t.at("coeff").get<std::string>()));
    }
    return DerivativePoly::from_terms(j.at("order").get<int>(), std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed polynomial JSON: ") + e.what());
  } catch (const std::runtime_error& e) {
    // cpp_int string parsing
    throw FormatError(std::string("malformed polynomial coefficient: ") + e.what());
  }
}

nlohmann::json to_json(const KernelParams& params) {
  return {{"alpha", params.alpha()}, {"delta", params.delta()}, {"dim", params.dim()}};
}

KernelParams params_from_json(const nlohmann::json& j) {
  try {
    return KernelParams(j.at("alpha").get<double>(), j.at("delta").get<double>(), j.at("dim").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed kernel parameters: ") + e.what());
  }
}

nlohmann::json to_json(const PdReport& r) {
  nlohmann::json j{{"params", to_json(r.params)},
                   {"n", r.n},
                   {"trial", r.trial},
                   {"factorization_success", r.factorization_success},
                   {"min_eigenvalue", number_or_null(r.min_eigenvalue)},
                   {"max_eigenvalue", number_or_null(r.max_eigenvalue)},
                   {"condition_estimate", number_or_null(r.condition_estimate)},
                   {"tolerance", r.tolerance},
                   {"threshold", r.threshold},
                   {"eigen_positive", r.eigen_positive},
                   {"positive", r.positive},
                   {"below_pd_threshold", r.params.below_pd_threshold()},
                   {"meta", {{"elapsed_seconds", r.elapsed_seconds}}}};
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const SignCheckReport& r) {
  return {{"order", r.order},
          {"alpha", r.alpha},
          {"mode", r.mode == EvalMode::exact ? "exact" : "floating"},
          {"grid", {{"uniform_count", r.uniform_count},
                    {"refinement_count", r.refinement_count},
                    {"t_min", r.t_min},
                    {"t_max", r.t_max}}},
          {"tolerance", r.tolerance},
          {"min_value", r.min_value},
          {"violations", r.violations},
          {"pass", r.pass}};
}

nlohmann::json to_json(const Interpolant& s) {
  nlohmann::json centers = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.centers().size(); ++i) {
    const auto p = s.centers().point(i);
    centers.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"params", to_json(s.params())},
          {"centers", std::move(centers)},
          {"coefficients", std::vector<double>(s.coefficients().begin(), s.coefficients().end())},
          {"max_residual", s.max_residual()}};
}

Interpolant interpolant_from_json(const nlohmann::json& j) {
  try {
    const KernelParams params = params_from_json(j.at("params"));
    const auto rows = j.at("centers").get<std::vector<std::vector<double>>>();
    for (const auto& r : rows)
      if (r.size() != static_cast<std::size_t>(params.dim())) throw FormatError("center dimension mismatch");
    PointSet centers = points_from_rows(rows, "interpolant");
    const auto c = j.at("coefficients").get<std::vector<double>>();
    Eigen::VectorXd coefficients = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return Interpolant(std::move(centers), std::move(coefficients), params, j.value("max_residual", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed interpolant JSON: ") + e.what());
  }
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

}  // namespace csrbf::io
