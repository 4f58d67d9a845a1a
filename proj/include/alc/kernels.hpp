#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alc {

/// Second-order, symmetric, nonnegative kernels integrating to one.
enum class KernelFamily { Uniform, Gaussian, Epanechnikov };

/// Lowercase name used in configs and on the command line.
std::string_view kernel_name(KernelFamily family);
KernelFamily parse_kernel(std::string_view name);

/// Kernel value without argument checks. Compact kernels are exactly 0 for |u| > 1.
inline double kernel_value(KernelFamily family, double u) {
  switch (family) {
    case KernelFamily::Uniform:
      return std::abs(u) <= 1.0 ? 0.5 : 0.0;
    case KernelFamily::Gaussian:
      return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
    case KernelFamily::Epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

/// Checked kernel evaluation; throws InvalidInput on non-finite u.
double eval_kernel(KernelFamily family, double u);

/// Radius outside which the kernel evaluates to exactly 0.0 in double precision.
/// For the Gaussian, exp(-u^2/2) underflows to zero beyond |u| ~ 38.6.
inline double support_radius(KernelFamily family) {
  return family == KernelFamily::Gaussian ? 40.0 : 1.0;
}

/// Second moment of the kernel, the integral of u^2 k(u).
double kernel_second_moment(KernelFamily family);

/// prod_j k((xi_j - x_j) / h_j). Throws InvalidInput on dimension mismatch.
double product_kernel(KernelFamily family, std::span<const double> xi, std::span<const double> x,
                      std::span<const double> h);

/// Domain bandwidths h_1..h_q (regressor units) plus the range bandwidth h_{q+1}
/// (outcome units). A non-positive range means "not set".
struct Bandwidths {
  std::vector<double> domain;
  double range = 0.0;

  /// Throws InvalidInput unless the domain entries are positive and finite and,
  /// when require_range, the range entry is too.
  void validate(std::size_t q, bool require_range) const;
};

/// Throws InvalidInput unless every entry is finite and strictly positive.
void validate_positive(std::span<const double> values, std::string_view what);

}  // namespace alc
