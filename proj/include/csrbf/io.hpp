#pragma once

#include "csrbf/interp.hpp"
#include "csrbf/pdcheck.hpp"
#include "csrbf/pointset.hpp"
#include "csrbf/symbolic.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csrbf::io {

/// Malformed input file (bad number, ragged rows, missing file).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, scientific notation.
std::string format_double(double x);

// CSV -----------------------------------------------------------------------

/// Numeric rows; a first line that does not parse as numbers is taken as a
/// header and skipped. Blank lines are ignored. Throws FormatError when rows
/// differ in length or a field is not a number.
std::vector<std::vector<double>> read_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path);

/// One point per row: x1,...,xd.
PointSet read_points_csv(const std::filesystem::path& path);
PointSet points_from_rows(const std::vector<std::vector<double>>& rows, const std::string& source);
void write_points_csv(std::ostream& out, const PointSet& points, bool header = true);

/// Single column.
std::vector<double> read_values_csv(const std::filesystem::path& path);
void write_values_csv(std::ostream& out, std::span<const double> values, const std::string& header = "value");

/// Header N,fill_distance,sup_error,cond_estimate.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

// JSON ----------------------------------------------------------------------

/// {"order": j, "terms": [{"alpha_pow": i, "u_pow": k, "coeff": "-56"}, ...]},
/// terms by descending u_pow.
nlohmann::json to_json(const DerivativePoly& poly);
DerivativePoly poly_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KernelParams& params);
KernelParams params_from_json(const nlohmann::json& j);

/// Timing lives under "meta" so that deterministic runs compare equal on
/// everything else.
nlohmann::json to_json(const PdReport& report);
nlohmann::json to_json(const SignCheckReport& report);

/// {"params": ..., "centers": [[...], ...], "coefficients": [...], "max_residual": r}
nlohmann::json to_json(const Interpolant& interpolant);
Interpolant interpolant_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);

/// Opens for writing; throws FormatError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace csrbf::io
