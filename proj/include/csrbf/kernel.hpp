#pragma once

#include <cmath>
#include <span>

namespace csrbf {

/// Shape (alpha), support radius (delta) and ambient dimension of the kernel
/// Phi(x) = phi(|x| / delta).
class KernelParams {
 public:
  /// Throws std::invalid_argument unless alpha > 0, delta > 0 and dim >= 1.
  KernelParams(double alpha, double delta, int dim);

  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  int dim() const { return dim_; }

  /// Phi(0) = e^{-alpha}, the Gram diagonal.
  double peak() const { return std::exp(-alpha_); }

  /// Set when alpha is below min_alpha_for_dimension(dim).
  bool below_pd_threshold() const { return below_pd_threshold_; }

  bool operator==(const KernelParams& other) const {
    return alpha_ == other.alpha_ && delta_ == other.delta_ && dim_ == other.dim_;
  }

 private:
  double alpha_;
  double delta_;
  int dim_;
  bool below_pd_threshold_;
};

/// Profile as a function of s = r^2 (already scaled by the support radius).
/// Zero for s >= 1; the test happens before the division.
inline double profile_from_squared(double s, double alpha) {
  if (s >= 1.0) return 0.0;
  return std::exp(-alpha / (1.0 - s));
}

/// phi(t) = e^{-alpha / (1 - t^2)} for 0 <= t < 1 and 0 for t >= 1.
/// Throws std::domain_error for t < 0 or alpha <= 0.
double phi(double t, double alpha);

/// Phi(x) = phi(|x| / delta). Throws std::invalid_argument when x.size() differs
/// from params.dim().
double big_phi(std::span<const double> x, const KernelParams& params);

/// Phi(a - b) without allocating the difference. No dimension check.
inline double big_phi_between(const double* a, const double* b, int dim, const KernelParams& params) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double z = (a[k] - b[k]) / params.delta();
    s += z * z;
  }
  return profile_from_squared(s, params.alpha());
}

}  // namespace csrbf
