#include "alc/reference.hpp"

#include <cmath>
#include <limits>

namespace alc::reference {

namespace {

double weight(KernelFamily k, std::span<const double> xi, std::span<const double> x,
              std::span<const double> h) {
  double w = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) w *= kernel_value(k, (xi[j] - x[j]) / h[j]);
  return w;
}

}  // namespace

FitResult lc_fit(const Dataset& data, const Matrix& targets, KernelFamily kernel,
                 std::span<const double> h) {
  FitResult r;
  r.targets = targets;
  r.estimates.resize(targets.rows());
  r.undefined.resize(targets.rows());
  for (std::size_t t = 0; t < targets.rows(); ++t) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const double w = weight(kernel, data.x.row(i), targets.row(t), h);
      num += w * data.y[i];
      den += w;
    }
    r.undefined[t] = den == 0.0;
    r.estimates[t] = den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : num / den;
  }
  return r;
}

FitResult alc_fit(const Dataset& data, const Matrix& targets, KernelFamily domain_kernel,
                  KernelFamily range_kernel, std::span<const double> h, double range_h,
                  std::span<const double> pilot_at_data, std::span<const double> pilot_at_targets) {
  FitResult r;
  r.targets = targets;
  r.estimates.resize(targets.rows());
  r.undefined.resize(targets.rows());
  for (std::size_t t = 0; t < targets.rows(); ++t) {
    if (std::isnan(pilot_at_targets[t])) {
      r.undefined[t] = 1;
      r.estimates[t] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const double w = weight(domain_kernel, data.x.row(i), targets.row(t), h) *
                       kernel_value(range_kernel, (pilot_at_data[i] - pilot_at_targets[t]) / range_h);
      num += w * data.y[i];
      den += w;
    }
    r.undefined[t] = den == 0.0;
    r.estimates[t] = den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : num / den;
  }
  return r;
}

Matrix lc_smoother_matrix(const Dataset& data, KernelFamily kernel, std::span<const double> h) {
  const std::size_t n = data.n();
  Matrix hat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      hat(i, j) = weight(kernel, data.x.row(j), data.x.row(i), h);
      den += hat(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) hat(i, j) /= den;
  }
  return hat;
}

double aicc_score(const Dataset& data, KernelFamily kernel, std::span<const double> h) {
  const std::size_t n = data.n();
  const Matrix hat = lc_smoother_matrix(data, kernel, h);
  double trace = 0.0;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trace += hat(i, i);
    double fitted = 0.0;
    for (std::size_t j = 0; j < n; ++j) fitted += hat(i, j) * data.y[j];
    rss += (data.y[i] - fitted) * (data.y[i] - fitted);
  }
  const double nd = static_cast<double>(n);
  if (trace + 2.0 >= nd) return std::numeric_limits<double>::infinity();
  return std::log(rss / nd) + (1.0 + trace / nd) / (1.0 - (trace + 2.0) / nd);
}

double lscv_score(const Dataset& data, KernelFamily kernel, std::span<const double> h,
                  double penalty) {
  const std::size_t n = data.n();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = weight(kernel, data.x.row(j), data.x.row(i), h);
      num += w * data.y[j];
      den += w;
    }
    if (den == 0.0) {
      total += penalty;
    } else {
      const double e = data.y[i] - num / den;
      total += e * e;
    }
  }
  return total / static_cast<double>(n);
}

}  // namespace alc::reference
