#include "csrbf/kernel.hpp"

#include "csrbf/symbolic.hpp"

#include <stdexcept>
#include <string>

namespace csrbf {

KernelParams::KernelParams(double alpha, double delta, int dim) : alpha_(alpha), delta_(delta), dim_(dim) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be positive and finite, got " + std::to_string(alpha));
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be positive and finite, got " + std::to_string(delta));
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1, got " + std::to_string(dim));
  below_pd_threshold_ = alpha < static_cast<double>(min_alpha_for_dimension(dim));
}

double phi(double t, double alpha) {
  if (!(t >= 0.0)) throw std::domain_error("phi requires t >= 0");
  if (!(alpha > 0.0)) throw std::domain_error("phi requires alpha > 0");
  if (t >= 1.0) return 0.0;
  return profile_from_squared(t * t, alpha);
}

double big_phi(std::span<const double> x, const KernelParams& params) {
  if (x.size() != static_cast<std::size_t>(params.dim()))
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", kernel expects " +
                                std::to_string(params.dim()));
  double s = 0.0;
  for (double xk : x) {
    const double z = xk / params.delta();
    s += z * z;
  }
  return profile_from_squared(s, params.alpha());
}

}  // namespace csrbf
