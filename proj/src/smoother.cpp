#include "alc/detail/smoother.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace alc::detail {

DesignIndex::DesignIndex(const Matrix& x) : order_(x.rows()), key_(x.rows()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&x](std::size_t a, std::size_t b) { return x(a, 0) < x(b, 0); });
  for (std::size_t k = 0; k < order_.size(); ++k) key_[k] = x(order_[k], 0);
}

std::pair<std::size_t, std::size_t> DesignIndex::window(double lo, double hi) const {
  const auto first = std::lower_bound(key_.begin(), key_.end(), lo);
  const auto last = std::upper_bound(first, key_.end(), hi);
  return {static_cast<std::size_t>(first - key_.begin()),
          static_cast<std::size_t>(last - key_.begin())};
}

double self_weight(const SmootherView& s) {
  double w = 1.0;
  for (std::size_t j = 0; j < s.h.size(); ++j) w *= kernel_value(s.domain, 0.0);
  if (s.range) w *= kernel_value(s.range->family, 0.0);
  return w;
}

DesignSweep sweep_design(const SmootherView& s) {
  const std::size_t n = s.data.n();
  DesignSweep out;
  out.fitted.resize(n);
  out.hat_diagonal.resize(n);
  out.loo.resize(n);
  const double w_self = self_weight(s);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  with_accumulator(s, [&](auto acc) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const double px = s.range ? s.range->pilot_at_data[i] : 0.0;
      const PointSums sums = acc(s.data.x.row(i), px, i);
      out.fitted[i] = sums.estimate();
      out.hat_diagonal[i] = w_self / sums.den;
      out.loo[i] = sums.den_other > 0.0 ? sums.loo_estimate() : nan;
    }
  });
  return out;
}

void sweep_targets(const SmootherView& s, const Matrix& targets,
                   std::span<const double> pilot_at_targets, std::span<double> estimates,
                   std::span<std::uint8_t> undefined) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  with_accumulator(s, [&](auto acc) {
    const auto count = static_cast<std::ptrdiff_t>(targets.rows());
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t tt = 0; tt < count; ++tt) {
      const auto t = static_cast<std::size_t>(tt);
      double px = 0.0;
      if (s.range) {
        px = pilot_at_targets[t];
        if (!std::isfinite(px)) {
          estimates[t] = nan;
          undefined[t] = 1;
          continue;
        }
      }
      const PointSums sums = acc(targets.row(t), px, none);
      if (sums.den > 0.0) {
        estimates[t] = sums.estimate();
        undefined[t] = 0;
      } else {
        estimates[t] = nan;
        undefined[t] = 1;
      }
    }
  });
}

}  // namespace alc::detail
