#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace csrbf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exponent pair (alpha^alpha_pow * u^u_pow) of one term.
struct Monomial {
  int alpha_pow = 0;
  int u_pow = 0;

  bool operator==(const Monomial&) const = default;
};

/// Orders terms by descending u power, then descending alpha power.
struct DescendingUPow {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.u_pow != b.u_pow) return a.u_pow > b.u_pow;
    return a.alpha_pow > b.alpha_pow;
  }
};

/// Integer polynomial Q_j(alpha, u) such that
///
///   d^j/dt^j phi(sqrt(t)) = exp(-alpha * u) * Q_j(alpha, u),  u = 1 / (1 - t),
///
/// for the bump profile phi(r) = exp(-alpha / (1 - r^2)).
///
/// Built from Q_1 = -alpha u^2 and Q_{j+1} = u^2 (dQ_j/du - alpha Q_j), which is
/// the chain rule with du/dt = u^2. Coefficients are arbitrary precision; they
/// grow like j!.
class DerivativePoly {
 public:
  using TermMap = std::map<Monomial, BigInt, DescendingUPow>;

  /// Q_1 = -alpha u^2.
  static DerivativePoly first();

  /// Builds a polynomial from explicit terms (e.g. parsed from JSON). Zero
  /// coefficients are dropped. Throws std::invalid_argument for order < 1 or
  /// negative exponents.
  static DerivativePoly from_terms(int order, TermMap terms);

  /// Q_{order+1}.
  DerivativePoly next() const;

  int order() const { return order_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// Zero when the monomial is absent.
  BigInt coefficient(int alpha_pow, int u_pow) const;

  bool operator==(const DerivativePoly&) const = default;

 private:
  DerivativePoly(int order, TermMap terms) : order_(order), terms_(std::move(terms)) {}

  int order_;
  TermMap terms_;
};

/// Q_order. Throws std::domain_error for order < 1.
DerivativePoly derivative_poly(int order);

/// Q_1 .. Q_max_order.
std::vector<DerivativePoly> derivative_table(int max_order);

/// Lists every broken structural property of a derivative polynomial (term
/// pattern, sign alternation, leading/trailing/second coefficients). Empty when
/// all hold.
std::vector<std::string> structural_violations(const DerivativePoly& poly);

/// Human-readable row, e.g.
/// "d^2/dt^2 phi(sqrt t) = e^{-alpha u}[alpha^2 u^4 - 2 alpha u^3]".
std::string render(const DerivativePoly& poly);

// ---------------------------------------------------------------------------
// Evaluation

/// e^{-alpha u} Q(alpha, u) at u = 1/(1-t). Requires 0 <= t < 1 and alpha > 0;
/// throws std::domain_error otherwise.
double eval_derivative(const DerivativePoly& poly, double t, double alpha);
double eval_derivative(int order, double t, double alpha);

/// As eval_derivative, but returns 0 for t >= 1 where phi(sqrt t) vanishes.
double eval_derivative_total(const DerivativePoly& poly, double t, double alpha);

/// Evaluates directly in u (u >= 1, alpha >= 0). Horner in 1/u with the
/// exponential folded in through logarithms, so large u underflows cleanly to 0
/// instead of producing inf * 0.
double eval_derivative_at_u(const DerivativePoly& poly, double u, double alpha);

/// Exact value of Q(alpha, u).
Rational eval_poly_exact(const DerivativePoly& poly, const Rational& u, const Rational& alpha);

/// Sign (-1, 0, 1) of Q(alpha, u), which is also the sign of the derivative
/// since e^{-alpha u} > 0.
int exact_sign(const DerivativePoly& poly, const Rational& u, const Rational& alpha);

/// Exact rational value of a finite double.
Rational to_rational(double x);

// ---------------------------------------------------------------------------
// Thresholds

struct AlphaThreshold {
  int order = 1;
  std::int64_t alpha = 0;
};

/// alpha_1 = 0, alpha_{j+1} = alpha_j + 2j. Throws std::domain_error for j < 1.
AlphaThreshold alpha_threshold(int order);

/// Smallest alpha for which the kernel is claimed positive definite on R^d:
/// 6 for d <= 2, 12 for d <= 4, and alpha_threshold(ceil((d-4)/2) + 4) above.
std::int64_t min_alpha_for_dimension(int dim);

// ---------------------------------------------------------------------------
// Sign condition (-1)^j d^j/dt^j phi(sqrt t) >= 0

enum class EvalMode { floating, exact };

/// Sample point of the sign-check grid, with u = 1/(1-t) kept as an exact
/// ratio so that points closer to t = 1 than double spacing stay distinct.
struct SignGridPoint {
  double t = 0.0;
  std::uint64_t u_num = 1;
  std::uint64_t u_den = 1;

  double u() const { return static_cast<double>(u_num) / static_cast<double>(u_den); }
};

inline constexpr int kGeometricRefinementLevels = 60;

/// t_i = i/(n+1) for i = 1..n, followed by t = 1 - 2^-m for m = 1..60.
std::vector<SignGridPoint> sign_check_grid(int uniform_count);

struct SignCheckReport {
  int order = 1;
  double alpha = 0.0;
  EvalMode mode = EvalMode::floating;
  int uniform_count = 0;
  int refinement_count = 0;
  double t_min = 0.0;
  double t_max = 0.0;
  double tolerance = 0.0;
  /// Smallest (-1)^j d^j/dt^j phi(sqrt t) seen on the grid.
  double min_value = 0.0;
  std::vector<double> violations;  // t values
  bool pass = true;
};

/// Samples (-1)^j d^j/dt^j phi(sqrt t) on sign_check_grid(grid_count).
///
/// Floating mode flags values below -tolerance. Exact mode decides each sign in
/// rational arithmetic and flags a point when the sign is negative and the
/// magnitude exceeds tolerance (any negative sign when tolerance is 0).
/// alpha = 0 is accepted here (Q vanishes identically), since alpha_1 = 0.
SignCheckReport check_sign_condition(int order, double alpha, int grid_count, double tolerance,
                                     EvalMode mode = EvalMode::floating);

}  // namespace csrbf
