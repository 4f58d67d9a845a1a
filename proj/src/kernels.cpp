#include "alc/kernels.hpp"

#include <string>

#include "alc/errors.hpp"

namespace alc {

std::string_view kernel_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::Uniform:
      return "uniform";
    case KernelFamily::Gaussian:
      return "gaussian";
    case KernelFamily::Epanechnikov:
      return "epanechnikov";
  }
  return "unknown";
}

KernelFamily parse_kernel(std::string_view name) {
  if (name == "uniform") return KernelFamily::Uniform;
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "epanechnikov") return KernelFamily::Epanechnikov;
  throw InvalidInput("unknown kernel '" + std::string(name) +
                     "' (expected uniform, gaussian or epanechnikov)");
}

double eval_kernel(KernelFamily family, double u) {
  if (!std::isfinite(u)) throw InvalidInput("kernel argument must be finite");
  return kernel_value(family, u);
}

double kernel_second_moment(KernelFamily family) {
  switch (family) {
    case KernelFamily::Uniform:
      return 1.0 / 3.0;
    case KernelFamily::Gaussian:
      return 1.0;
    case KernelFamily::Epanechnikov:
      return 0.2;
  }
  return 0.0;
}

double product_kernel(KernelFamily family, std::span<const double> xi, std::span<const double> x,
                      std::span<const double> h) {
  if (xi.size() != x.size() || x.size() != h.size()) {
    throw InvalidInput("product kernel dimension mismatch: " + std::to_string(xi.size()) + ", " +
                       std::to_string(x.size()) + ", " + std::to_string(h.size()));
  }
  double w = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    w *= eval_kernel(family, (xi[j] - x[j]) / h[j]);
  }
  return w;
}

void validate_positive(std::span<const double> values, std::string_view what) {
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw InvalidInput(std::string(what) + " must be finite and strictly positive");
    }
  }
}

void Bandwidths::validate(std::size_t q, bool require_range) const {
  if (domain.size() != q) {
    throw InvalidInput("expected " + std::to_string(q) + " domain bandwidths, got " +
                       std::to_string(domain.size()));
  }
  validate_positive(domain, "domain bandwidth");
  if (require_range && (!std::isfinite(range) || range <= 0.0)) {
    throw InvalidInput("range bandwidth must be finite and strictly positive");
  }
}

}  // namespace alc
