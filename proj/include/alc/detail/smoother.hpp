#pragma once

// Windowed weight accumulation shared by the estimators and the bandwidth
// selectors. Points are visited in ascending order of their first coordinate,
// restricted to the kernel support along that coordinate, so every sum has a
// fixed order no matter how targets are distributed over threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "alc/kernels.hpp"
#include "alc/matrix.hpp"

namespace alc::detail {

class DesignIndex {
 public:
  explicit DesignIndex(const Matrix& x);

  /// Half-open [begin, end) range into order() covering first coordinates in [lo, hi].
  std::pair<std::size_t, std::size_t> window(double lo, double hi) const;
  std::span<const std::size_t> order() const { return order_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> key_;
};

struct RangeTerm {
  KernelFamily family = KernelFamily::Uniform;
  double bandwidth = 1.0;
  std::span<const double> pilot_at_data;
};

struct SmootherView {
  const Dataset& data;
  const DesignIndex& index;
  KernelFamily domain;
  std::span<const double> h;
  std::optional<RangeTerm> range;
};

// Outcomes are accumulated relative to the first contributing outcome `ref`, so a
// window of equal outcomes reproduces that outcome exactly. The result is clamped
// to the contributing outcome range, which only ever removes rounding error.
struct PointSums {
  double ref = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double num = 0.0;
  double den = 0.0;
  // Same sums without the excluded point (leave-one-out).
  double num_other = 0.0;
  double den_other = 0.0;

  double estimate() const { return std::clamp(ref + num / den, lo, hi); }
  double loo_estimate() const { return ref + num_other / den_other; }
};

template <KernelFamily F>
inline double kval(double u) {
  if constexpr (F == KernelFamily::Uniform) {
    return std::abs(u) <= 1.0 ? 0.5 : 0.0;
  } else if constexpr (F == KernelFamily::Epanechnikov) {
    return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  } else {
    return std::exp(-0.5 * u * u) * 0.3989422804014327;
  }
}

template <class Fn>
decltype(auto) dispatch_kernel(KernelFamily family, Fn&& fn) {
  switch (family) {
    case KernelFamily::Gaussian:
      return fn(std::integral_constant<KernelFamily, KernelFamily::Gaussian>{});
    case KernelFamily::Epanechnikov:
      return fn(std::integral_constant<KernelFamily, KernelFamily::Epanechnikov>{});
    case KernelFamily::Uniform:
    default:
      return fn(std::integral_constant<KernelFamily, KernelFamily::Uniform>{});
  }
}

/// Sums of K * k_range * Y and K * k_range over the design for one evaluation
/// point. `exclude` (an index into the data, or npos) is left out of the *_other sums.
template <KernelFamily D, KernelFamily R, bool Anisotropic>
PointSums accumulate(const SmootherView& s, std::span<const double> x, double pilot_x,
                     std::size_t exclude) {
  const std::size_t q = s.h.size();
  const double reach = support_radius(D) * s.h[0] * (1.0 + 1e-9);
  const auto [begin, end] = s.index.window(x[0] - reach, x[0] + reach);
  const auto order = s.index.order();
  const Matrix& xs = s.data.x;

  PointSums out;
  for (std::size_t k = begin; k < end; ++k) {
    const std::size_t i = order[k];
    const auto xi = xs.row(i);
    double w = 1.0;
    for (std::size_t j = 0; j < q && w != 0.0; ++j) {
      w *= kval<D>((xi[j] - x[j]) / s.h[j]);
    }
    if constexpr (Anisotropic) {
      if (w != 0.0) w *= kval<R>((s.range->pilot_at_data[i] - pilot_x) / s.range->bandwidth);
    }
    if (w == 0.0) continue;
    const double yi = s.data.y[i];
    if (out.den == 0.0) {
      out.ref = out.lo = out.hi = yi;
    } else {
      out.lo = std::min(out.lo, yi);
      out.hi = std::max(out.hi, yi);
    }
    const double wy = w * (yi - out.ref);
    out.num += wy;
    out.den += w;
    if (i != exclude) {
      out.num_other += wy;
      out.den_other += w;
    }
  }
  return out;
}

/// Calls fn with a callable (x, pilot_x, exclude) -> PointSums bound to the
/// kernels of the view, so the kernel switch happens once per sweep.
template <class Fn>
decltype(auto) with_accumulator(const SmootherView& s, Fn&& fn) {
  return dispatch_kernel(s.domain, [&](auto dk) -> decltype(auto) {
    constexpr KernelFamily D = decltype(dk)::value;
    if (!s.range) {
      return fn([&s](std::span<const double> x, double px, std::size_t ex) {
        return accumulate<D, KernelFamily::Uniform, false>(s, x, px, ex);
      });
    }
    return dispatch_kernel(s.range->family, [&](auto rk) -> decltype(auto) {
      constexpr KernelFamily R = decltype(rk)::value;
      return fn([&s](std::span<const double> x, double px, std::size_t ex) {
        return accumulate<D, R, true>(s, x, px, ex);
      });
    });
  });
}

/// Weight a design point gives itself: prod_j K(0), times k_range(0) if anisotropic.
double self_weight(const SmootherView& s);

/// Per-design-point quantities needed by the smoother-matrix selectors.
struct DesignSweep {
  std::vector<double> fitted;       // ghat(X_i), always defined (self weight > 0)
  std::vector<double> hat_diagonal;  // H_ii
  std::vector<double> loo;           // ghat_{-i}(X_i); NaN where undefined
};

/// Evaluates the smoother at every design point, in parallel.
DesignSweep sweep_design(const SmootherView& s);

/// Evaluates the smoother at arbitrary targets, in parallel. pilot_at_targets is
/// required iff the view is anisotropic.
void sweep_targets(const SmootherView& s, const Matrix& targets,
                   std::span<const double> pilot_at_targets, std::span<double> estimates,
                   std::span<std::uint8_t> undefined);

}  // namespace alc::detail
