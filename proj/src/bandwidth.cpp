#include "alc/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "alc/detail/smoother.hpp"
#include "alc/errors.hpp"

namespace alc {

std::vector<double> BandwidthGrid::candidate(std::size_t k) const {
  std::vector<double> h(per_dim.size());
  for (std::size_t j = 0; j < per_dim.size(); ++j) h[j] = per_dim[j].at(k);
  return h;
}

void BandwidthGrid::validate(std::size_t q) const {
  if (per_dim.size() != q) {
    throw InvalidInput("bandwidth grid has " + std::to_string(per_dim.size()) +
                       " dimensions, expected " + std::to_string(q));
  }
  if (size() == 0) throw InvalidInput("bandwidth grid is empty");
  for (const auto& g : per_dim) {
    if (g.size() != size()) throw InvalidInput("bandwidth grid dimensions differ in length");
    validate_positive(g, "grid bandwidth");
    if (std::adjacent_find(g.begin(), g.end(), std::greater_equal<>()) != g.end()) {
      throw InvalidInput("bandwidth grid must be strictly increasing");
    }
  }
}

BandwidthGrid geometric_grid(std::span<const double> lo, std::span<const double> hi,
                             std::size_t points) {
  if (lo.size() != hi.size()) throw InvalidInput("grid bounds differ in dimension");
  if (points == 0) throw InvalidInput("grid needs at least one point");
  validate_positive(lo, "grid lower bound");
  validate_positive(hi, "grid upper bound");
  BandwidthGrid grid;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    std::vector<double> g(points);
    if (points == 1) {
      g[0] = hi[j];
    } else {
      if (!(hi[j] > lo[j])) throw InvalidInput("grid upper bound must exceed the lower bound");
      const double ratio = std::log(hi[j] / lo[j]) / static_cast<double>(points - 1);
      for (std::size_t k = 0; k < points; ++k) g[k] = lo[j] * std::exp(ratio * static_cast<double>(k));
      g.back() = hi[j];
    }
    grid.per_dim.push_back(std::move(g));
  }
  return grid;
}

std::size_t distinct_count(const Matrix& x, std::size_t j) {
  std::set<double> values;
  for (std::size_t i = 0; i < x.rows(); ++i) values.insert(x(i, j));
  return values.size();
}

BandwidthGrid default_grid(const Dataset& data, std::size_t points) {
  data.validate();
  std::vector<double> lo(data.q());
  std::vector<double> hi(data.q());
  for (std::size_t j = 0; j < data.q(); ++j) {
    double mn = data.x(0, j);
    double mx = mn;
    for (std::size_t i = 1; i < data.n(); ++i) {
      mn = std::min(mn, data.x(i, j));
      mx = std::max(mx, data.x(i, j));
    }
    const double range = mx - mn;
    if (!(range > 0.0)) throw InvalidInput("regressor " + std::to_string(j + 1) + " is constant");
    hi[j] = range;
    lo[j] = range / static_cast<double>(distinct_count(data.x, j));
  }
  return geometric_grid(lo, hi, points);
}

SmootherStats smoother_stats(const Dataset& data, KernelFamily kernel, std::span<const double> h,
                             const std::optional<RangeSmoothing>& range) {
  const detail::DesignIndex index(data.x);
  std::optional<detail::RangeTerm> term;
  if (range) term = detail::RangeTerm{range->kernel, range->bandwidth, range->pilot_at_data};
  const detail::SmootherView view{data, index, kernel, h, term};
  const detail::DesignSweep sweep = detail::sweep_design(view);

  const std::size_t n = data.n();
  const double nd = static_cast<double>(n);
  SmootherStats st;
  double rss = 0.0;
  double loo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st.trace += sweep.hat_diagonal[i];
    const double r = data.y[i] - sweep.fitted[i];
    rss += r * r;
    if (std::isnan(sweep.loo[i])) {
      loo += kLooPenalty;
      ++st.loo_undefined;
    } else {
      const double e = data.y[i] - sweep.loo[i];
      loo += e * e;
    }
  }
  st.sigma2 = rss / nd;
  st.lscv = loo / nd;
  st.aicc = st.trace + 2.0 >= nd
                ? std::numeric_limits<double>::infinity()
                : std::log(st.sigma2) + (1.0 + st.trace / nd) / (1.0 - (st.trace + 2.0) / nd);
  return st;
}

namespace {

enum class Criterion { Aicc, Lscv };

bool admissible(const std::vector<double>& h, const SelectionOptions& opts) {
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!opts.strictly_above.empty() && !(h[j] > opts.strictly_above[j])) return false;
    if (!opts.at_most.empty() && !(h[j] <= opts.at_most[j])) return false;
  }
  return true;
}

SelectionReport select(const Dataset& data, KernelFamily kernel, const BandwidthGrid& grid,
                       const SelectionOptions& opts, Criterion criterion) {
  data.validate();
  grid.validate(data.q());
  if (!opts.strictly_above.empty() && opts.strictly_above.size() != data.q()) {
    throw InvalidInput("bandwidth floor must have one entry per regressor");
  }
  if (!opts.at_most.empty() && opts.at_most.size() != data.q()) {
    throw InvalidInput("bandwidth ceiling must have one entry per regressor");
  }
  if (opts.range) {
    if (opts.range->pilot_at_data.size() != data.n()) {
      throw InvalidInput("pilot length does not match the data");
    }
    if (!(opts.range->bandwidth > 0.0)) throw InvalidInput("range bandwidth must be positive");
  }
  const std::size_t n = data.n();
  if (criterion == Criterion::Aicc && n < 5) throw InvalidInput("AIC_c selection needs n >= 5");
  if (criterion == Criterion::Lscv && n < 3) throw InvalidInput("LSCV selection needs n >= 3");

  constexpr double inf = std::numeric_limits<double>::infinity();
  SelectionReport report;
  report.scores.assign(grid.size(), inf);
  bool found = false;
  double best = inf;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto h = grid.candidate(k);
    if (!admissible(h, opts)) continue;
    const SmootherStats st = smoother_stats(data, kernel, h, opts.range);
    double score = inf;
    if (criterion == Criterion::Aicc) {
      score = st.aicc;
    } else if (st.loo_undefined < n) {
      score = st.lscv;
    }
    if (std::isnan(score)) score = inf;
    report.scores[k] = score;
    // A -inf AIC_c (perfect in-sample fit) still counts as admissible.
    const bool usable = criterion == Criterion::Aicc ? st.trace + 2.0 < static_cast<double>(n)
                                                     : score < inf;
    if (usable && (!found || score < best)) {
      found = true;
      best = score;
      report.index = k;
    }
  }
  if (!found) {
    throw SelectionFailure(criterion == Criterion::Aicc
                               ? "AIC_c: every grid bandwidth has tr(H) + 2 >= n"
                               : "LSCV: every grid bandwidth leaves all observations without neighbours");
  }
  report.selected = grid.candidate(report.index);
  return report;
}

}  // namespace

SelectionReport select_aicc_report(const Dataset& data, KernelFamily kernel,
                                   const BandwidthGrid& grid, const SelectionOptions& opts) {
  return select(data, kernel, grid, opts, Criterion::Aicc);
}

SelectionReport select_lscv_report(const Dataset& data, KernelFamily kernel,
                                   const BandwidthGrid& grid, const SelectionOptions& opts) {
  return select(data, kernel, grid, opts, Criterion::Lscv);
}

std::vector<double> select_aicc(const Dataset& data, KernelFamily kernel, const BandwidthGrid& grid) {
  return select_aicc_report(data, kernel, grid).selected;
}

std::vector<double> select_lscv(const Dataset& data, KernelFamily kernel, const BandwidthGrid& grid) {
  return select_lscv_report(data, kernel, grid).selected;
}

std::vector<double> scale_for_alc(std::span<const double> h_pilot, double inflation) {
  validate_positive(h_pilot, "pilot bandwidth");
  if (!std::isfinite(inflation) || inflation < 1.0) {
    throw InvalidInput("bandwidth inflation must be at least 1");
  }
  std::vector<double> h(h_pilot.begin(), h_pilot.end());
  for (double& v : h) v *= inflation;
  return h;
}

double default_range_bandwidth(std::span<const double> pilot_values, double multiplier) {
  if (pilot_values.size() < 2) throw InvalidInput("range bandwidth rule needs at least 2 pilot values");
  if (!std::isfinite(multiplier) || multiplier <= 0.0) {
    throw InvalidInput("range bandwidth multiplier must be positive");
  }
  double mean = 0.0;
  for (double v : pilot_values) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite pilot value");
    mean += v;
  }
  mean /= static_cast<double>(pilot_values.size());
  double ss = 0.0;
  for (double v : pilot_values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(pilot_values.size() - 1));
  return sd > 0.0 ? multiplier * sd : multiplier;
}

std::vector<double> rate_rule(const Matrix& x, double c) {
  if (!std::isfinite(c) || c <= 0.0) throw InvalidInput("rate-rule constant must be positive");
  const double q = static_cast<double>(x.cols());
  std::vector<double> h(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    h[j] = c * std::pow(static_cast<double>(distinct_count(x, j)), -1.0 / (q + 2.0));
  }
  return h;
}

}  // namespace alc
