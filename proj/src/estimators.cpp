#include "alc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alc/detail/smoother.hpp"
#include "alc/errors.hpp"

namespace alc {

namespace {

void check_targets(const Dataset& data, const Matrix& targets) {
  data.validate();
  if (targets.cols() != data.q()) {
    throw InvalidInput("targets have " + std::to_string(targets.cols()) +
                       " columns but the data has q = " + std::to_string(data.q()));
  }
  for (double v : targets.data()) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite target coordinate");
  }
}

FitResult make_result(const Matrix& targets) {
  FitResult r;
  r.targets = targets;
  r.estimates.assign(targets.rows(), std::numeric_limits<double>::quiet_NaN());
  r.undefined.assign(targets.rows(), 1);
  return r;
}

std::vector<double> pilot_bandwidths(const IsotropicLcPilot& p, const Bandwidths& bw) {
  if (!p.bandwidths.empty()) return p.bandwidths;
  std::vector<double> h = bw.domain;
  for (double& v : h) v *= kDefaultPilotRatio;
  return h;
}

}  // namespace

std::size_t FitResult::undefined_count() const {
  return static_cast<std::size_t>(std::count(undefined.begin(), undefined.end(), 1));
}

void EstimatorSpec::validate(std::size_t q) const {
  bandwidths.validate(q, kind == EstimatorKind::ALC);
  if (kind == EstimatorKind::LC) return;
  if (iterations < 1) throw InvalidInput("ALC needs at least one anisotropic iteration");
  if (const auto* lc = std::get_if<IsotropicLcPilot>(&pilot); lc && !lc->bandwidths.empty()) {
    if (lc->bandwidths.size() != q) {
      throw InvalidInput("pilot bandwidths must have one entry per regressor");
    }
    validate_positive(lc->bandwidths, "pilot bandwidth");
  }
  if (const auto* o = std::get_if<OraclePilot>(&pilot); o && !o->g) {
    throw InvalidInput("oracle pilot needs a regression function");
  }
}

FitResult lc_fit(const Dataset& data, const Matrix& targets, KernelFamily kernel,
                 std::span<const double> h) {
  check_targets(data, targets);
  if (h.size() != data.q()) throw InvalidInput("expected one bandwidth per regressor");
  validate_positive(h, "bandwidth");

  const detail::DesignIndex index(data.x);
  const detail::SmootherView view{data, index, kernel, h, std::nullopt};
  FitResult r = make_result(targets);
  detail::sweep_targets(view, targets, {}, r.estimates, r.undefined);
  return r;
}

FitResult alc_fit(const Dataset& data, const Matrix& targets, const EstimatorSpec& spec,
                  std::span<const double> pilot_at_data, std::span<const double> pilot_at_targets) {
  check_targets(data, targets);
  if (spec.kind != EstimatorKind::ALC) throw InvalidInput("alc_fit needs an ALC estimator spec");
  spec.bandwidths.validate(data.q(), true);
  if (pilot_at_data.size() != data.n()) {
    throw InvalidInput("pilot has " + std::to_string(pilot_at_data.size()) +
                       " values at the data, expected " + std::to_string(data.n()));
  }
  if (pilot_at_targets.size() != targets.rows()) {
    throw InvalidInput("pilot has " + std::to_string(pilot_at_targets.size()) +
                       " values at the targets, expected " + std::to_string(targets.rows()));
  }
  for (double v : pilot_at_data) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite pilot value at a design point");
  }

  const detail::DesignIndex index(data.x);
  const detail::SmootherView view{
      data, index, spec.kernel, spec.bandwidths.domain,
      detail::RangeTerm{spec.effective_range_kernel(), spec.bandwidths.range, pilot_at_data}};
  FitResult r = make_result(targets);
  detail::sweep_targets(view, targets, pilot_at_targets, r.estimates, r.undefined);
  return r;
}

SuppliedPilot compute_pilot(const Dataset& data, const Matrix& targets, const EstimatorSpec& spec) {
  return std::visit(
      [&](const auto& policy) -> SuppliedPilot {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, IsotropicLcPilot>) {
          const auto h = pilot_bandwidths(policy, spec.bandwidths);
          SuppliedPilot p;
          p.at_data = lc_fit(data, data.x, spec.kernel, h).estimates;
          p.at_targets = lc_fit(data, targets, spec.kernel, h).estimates;
          return p;
        } else if constexpr (std::is_same_v<P, OraclePilot>) {
          SuppliedPilot p;
          p.at_data.resize(data.n());
          p.at_targets.resize(targets.rows());
          for (std::size_t i = 0; i < data.n(); ++i) p.at_data[i] = policy.g(data.x.row(i));
          for (std::size_t t = 0; t < targets.rows(); ++t) {
            p.at_targets[t] = policy.g(targets.row(t));
          }
          const auto finite = [](double v) { return std::isfinite(v); };
          if (!std::all_of(p.at_data.begin(), p.at_data.end(), finite) ||
              !std::all_of(p.at_targets.begin(), p.at_targets.end(), finite)) {
            throw InvalidInput("oracle regression function returned a non-finite value");
          }
          return p;
        } else {
          return policy;
        }
      },
      spec.pilot);
}

FitResult fit(const Dataset& data, const Matrix& targets, const EstimatorSpec& spec) {
  check_targets(data, targets);
  spec.validate(data.q());
  if (spec.kind == EstimatorKind::LC) {
    return lc_fit(data, targets, spec.kernel, spec.bandwidths.domain);
  }

  SuppliedPilot pilot = compute_pilot(data, targets, spec);
  for (int round = 1; round < spec.iterations; ++round) {
    FitResult at_data = alc_fit(data, data.x, spec, pilot.at_data, pilot.at_data);
    FitResult at_targets = alc_fit(data, targets, spec, pilot.at_data, pilot.at_targets);
    pilot.at_data = std::move(at_data.estimates);
    pilot.at_targets = std::move(at_targets.estimates);
  }
  return alc_fit(data, targets, spec, pilot.at_data, pilot.at_targets);
}

void fill_nearest(FitResult& result) {
  const std::size_t m = result.size();
  std::vector<std::size_t> defined;
  for (std::size_t t = 0; t < m; ++t) {
    if (!result.undefined[t]) defined.push_back(t);
  }
  if (defined.empty() || defined.size() == m) return;

  const std::vector<double> source = result.estimates;
  const Matrix& pts = result.targets;
  for (std::size_t t = 0; t < m; ++t) {
    if (!result.undefined[t]) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = defined.front();
    for (std::size_t d : defined) {
      double dist = 0.0;
      for (std::size_t j = 0; j < pts.cols(); ++j) {
        const double diff = pts(t, j) - pts(d, j);
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        best_idx = d;
      }
    }
    result.estimates[t] = source[best_idx];
    result.undefined[t] = 0;
  }
}

}  // namespace alc
