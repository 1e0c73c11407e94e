#include "csrbf/symbolic.hpp"

#include "csrbf/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace csrbf {

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::string power(const char* base, int exponent) {
  if (exponent == 0) return "";
  if (exponent == 1) return base;
  return std::string(base) + "^" + std::to_string(exponent);
}

}  // namespace

DerivativePoly DerivativePoly::first() {
  TermMap terms;
  terms.emplace(Monomial{1, 2}, BigInt(-1));
  return DerivativePoly(1, std::move(terms));
}

DerivativePoly DerivativePoly::from_terms(int order, TermMap terms) {
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
  for (auto it = terms.begin(); it != terms.end();) {
    if (it->first.alpha_pow < 0 || it->first.u_pow < 0)
      throw std::invalid_argument("negative exponent in derivative polynomial");
    it = it->second == 0 ? terms.erase(it) : std::next(it);
  }
  return DerivativePoly(order, std::move(terms));
}

DerivativePoly DerivativePoly::next() const {
  // u^2 (dQ/du - alpha Q): c a^i u^k -> k c a^i u^{k+1} - c a^{i+1} u^{k+2}.
  TermMap out;
  for (const auto& [m, c] : terms_) {
    if (m.u_pow != 0) out[Monomial{m.alpha_pow, m.u_pow + 1}] += c * m.u_pow;
    out[Monomial{m.alpha_pow + 1, m.u_pow + 2}] -= c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return DerivativePoly(order_ + 1, std::move(out));
}

BigInt DerivativePoly::coefficient(int alpha_pow, int u_pow) const {
  auto it = terms_.find(Monomial{alpha_pow, u_pow});
  return it == terms_.end() ? BigInt(0) : it->second;
}

DerivativePoly derivative_poly(int order) {
  if (order < 1) throw std::domain_error("derivative order must be >= 1, got " + std::to_string(order));
  DerivativePoly q = DerivativePoly::first();
  for (int j = 1; j < order; ++j) q = q.next();
  return q;
}

std::vector<DerivativePoly> derivative_table(int max_order) {
  if (max_order < 1) throw std::domain_error("max order must be >= 1, got " + std::to_string(max_order));
  std::vector<DerivativePoly> table;
  table.reserve(static_cast<std::size_t>(max_order));
  table.push_back(DerivativePoly::first());
  while (static_cast<int>(table.size()) < max_order) table.push_back(table.back().next());
  return table;
}

std::vector<std::string> structural_violations(const DerivativePoly& poly) {
  std::vector<std::string> out;
  const int j = poly.order();
  if (poly.term_count() != static_cast<std::size_t>(j))
    out.push_back("expected " + std::to_string(j) + " terms, found " + std::to_string(poly.term_count()));

  for (const auto& [m, c] : poly.terms()) {
    if (m.alpha_pow < 1 || m.alpha_pow > j || m.u_pow != m.alpha_pow + j) {
      out.push_back("unexpected monomial alpha^" + std::to_string(m.alpha_pow) + " u^" + std::to_string(m.u_pow));
      continue;
    }
    const int expected_sign = (m.alpha_pow % 2 == 0) ? 1 : -1;
    if (c.sign() != expected_sign)
      out.push_back("sign of alpha^" + std::to_string(m.alpha_pow) + " term is not (-1)^" +
                    std::to_string(m.alpha_pow));
  }

  if (abs(poly.coefficient(j, 2 * j)) != 1) out.push_back("leading coefficient is not +-1");
  if (abs(poly.coefficient(1, j + 1)) != factorial(j)) out.push_back("trailing coefficient is not +-j!");
  if (j >= 2 && abs(poly.coefficient(j - 1, 2 * j - 1)) != BigInt(j) * (j - 1))
    out.push_back("second coefficient is not +-j(j-1)");
  return out;
}

std::string render(const DerivativePoly& poly) {
  std::ostringstream os;
  const int j = poly.order();
  os << "d";
  if (j > 1) os << "^" << j;
  os << "/dt";
  if (j > 1) os << "^" << j;
  os << " phi(sqrt t) = e^{-alpha u}[";
  bool first = true;
  for (const auto& [m, c] : poly.terms()) {
    const BigInt magnitude = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    std::string factors;
    if (magnitude != 1 || (m.alpha_pow == 0 && m.u_pow == 0)) factors = magnitude.str();
    for (const auto& part : {power("alpha", m.alpha_pow), power("u", m.u_pow)}) {
      if (part.empty()) continue;
      if (!factors.empty()) factors += " ";
      factors += part;
    }
    os << factors;
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

double eval_derivative_at_u(const DerivativePoly& poly, double u, double alpha) {
  // Group by u power: sum_k b_k u^k with b_k = sum_i c_ik alpha^i, then
  // u^kmax * sum_k b_k w^{kmax-k} with w = 1/u <= 1 (Horner in w).
  const auto& terms = poly.terms();
  if (terms.empty()) return 0.0;
  const int kmax = terms.begin()->first.u_pow;
  const double w = 1.0 / u;

  double horner = 0.0;
  int current = terms.rbegin()->first.u_pow;
  for (auto it = terms.rbegin(); it != terms.rend();) {
    const int k = it->first.u_pow;
    double b = 0.0;
    for (; it != terms.rend() && it->first.u_pow == k; ++it)
      b += it->second.convert_to<double>() * std::pow(alpha, it->first.alpha_pow);
    for (; current < k; ++current) horner *= w;
    horner += b;
  }
  if (horner == 0.0) return 0.0;

  const double log_magnitude = -alpha * u + kmax * std::log(u) + std::log(std::abs(horner));
  return std::copysign(std::exp(log_magnitude), horner);
}

double eval_derivative(const DerivativePoly& poly, double t, double alpha) {
  if (!(t >= 0.0) || !(t < 1.0)) throw std::domain_error("eval_derivative requires 0 <= t < 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("alpha must be positive and finite");
  return eval_derivative_at_u(poly, 1.0 / (1.0 - t), alpha);
}

double eval_derivative(int order, double t, double alpha) {
  return eval_derivative(derivative_poly(order), t, alpha);
}

double eval_derivative_total(const DerivativePoly& poly, double t, double alpha) {
  if (t >= 1.0) {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    return 0.0;
  }
  return eval_derivative(poly, t, alpha);
}

Rational eval_poly_exact(const DerivativePoly& poly, const Rational& u, const Rational& alpha) {
  Rational sum = 0;
  for (const auto& [m, c] : poly.terms()) {
    Rational term(c);
    for (int i = 0; i < m.alpha_pow; ++i) term *= alpha;
    for (int k = 0; k < m.u_pow; ++k) term *= u;
    sum += term;
  }
  return sum;
}

int exact_sign(const DerivativePoly& poly, const Rational& u, const Rational& alpha) {
  // Clear denominators: with u = p/q and alpha = a/b (q, b > 0), the sign of
  // b^A q^K Q is that of Q and the sum is over integers only.
  if (poly.terms().empty()) return 0;
  int max_a = 0, max_k = 0;
  for (const auto& [m, c] : poly.terms()) {
    max_a = std::max(max_a, m.alpha_pow);
    max_k = std::max(max_k, m.u_pow);
  }
  auto powers = [](const BigInt& x, int n) {
    std::vector<BigInt> out(static_cast<std::size_t>(n) + 1, BigInt(1));
    for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * x;
    return out;
  };
  const auto a = powers(numerator(alpha), max_a), b = powers(denominator(alpha), max_a);
  const auto p = powers(numerator(u), max_k), q = powers(denominator(u), max_k);
  BigInt sum = 0;
  for (const auto& [m, c] : poly.terms())
    sum += c * a[m.alpha_pow] * b[max_a - m.alpha_pow] * p[m.u_pow] * q[max_k - m.u_pow];
  return sum.sign();
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("cannot convert non-finite double to rational");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num = scaled;
  BigInt den = 1;
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return Rational(num, den);
}

// ---------------------------------------------------------------------------

AlphaThreshold alpha_threshold(int order) {
  if (order < 1) throw std::domain_error("threshold order must be >= 1, got " + std::to_string(order));
  std::int64_t alpha = 0;
  for (std::int64_t j = 1; j < order; ++j) alpha += 2 * j;
  return {order, alpha};
}

std::int64_t min_alpha_for_dimension(int dim) {
  if (dim < 1) throw std::domain_error("dimension must be >= 1, got " + std::to_string(dim));
  if (dim <= 2) return 6;
  if (dim <= 4) return 12;
  const int order = (dim - 4 + 1) / 2 + 4;  // ceil((d-4)/2) + 4
  return alpha_threshold(order).alpha;
}

// ---------------------------------------------------------------------------

std::vector<SignGridPoint> sign_check_grid(int uniform_count) {
  if (uniform_count < 2) throw std::invalid_argument("sign-check grid needs at least 2 points");
  std::vector<SignGridPoint> grid;
  grid.reserve(static_cast<std::size_t>(uniform_count) + kGeometricRefinementLevels);
  const auto n1 = static_cast<std::uint64_t>(uniform_count) + 1;
  for (std::uint64_t i = 1; i < n1; ++i)
    grid.push_back({static_cast<double>(i) / static_cast<double>(n1), n1, n1 - i});
  for (int m = 1; m <= kGeometricRefinementLevels; ++m) {
    const std::uint64_t u = std::uint64_t{1} << m;
    grid.push_back({1.0 - std::ldexp(1.0, -m), u, 1});
  }
  return grid;
}

SignCheckReport check_sign_condition(int order, double alpha, int grid_count, double tolerance, EvalMode mode) {
  if (order < 1) throw std::domain_error("derivative order must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::domain_error("alpha must be finite and >= 0");
  if (!(tolerance >= 0.0)) throw std::domain_error("tolerance must be >= 0");

  const DerivativePoly poly = derivative_poly(order);
  const std::vector<SignGridPoint> grid = sign_check_grid(grid_count);

  SignCheckReport report;
  report.order = order;
  report.alpha = alpha;
  report.mode = mode;
  report.uniform_count = grid_count;
  report.refinement_count = kGeometricRefinementLevels;
  report.tolerance = tolerance;
  report.t_min = grid.front().t;
  report.t_max = grid.back().t;

  std::vector<double> values = batch::omp::signed_derivative(poly, grid, alpha);
  std::vector<int> signs;
  if (mode == EvalMode::exact) signs = batch::omp::signed_derivative_sign(poly, grid, to_rational(alpha));

  report.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double value = values[i];
    bool violation = false;
    if (mode == EvalMode::exact) {
      // The exact sign wins; a negative value lost to underflow is reported as
      // the smallest negative double.
      if (signs[i] < 0) {
        if (!(value < 0.0)) value = -std::numeric_limits<double>::denorm_min();
        violation = -value > tolerance;
      } else if (!(value > 0.0)) {
        value = 0.0;
      }
    } else {
      violation = value < -tolerance;
    }
    report.min_value = std::min(report.min_value, value);
    if (violation) report.violations.push_back(grid[i].t);
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace csrbf
