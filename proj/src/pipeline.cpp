#include "alc/pipeline.hpp"

#include <cmath>
#include <string>

#include "alc/errors.hpp"

namespace alc {

std::string_view estimator_name(EstimatorChoice e) {
  switch (e) {
    case EstimatorChoice::LC:
      return "lc";
    case EstimatorChoice::ALC:
      return "alc";
    case EstimatorChoice::ALCT:
      return "alct";
  }
  return "unknown";
}

EstimatorChoice parse_estimator(std::string_view name) {
  if (name == "lc" || name == "LC") return EstimatorChoice::LC;
  if (name == "alc" || name == "ALC") return EstimatorChoice::ALC;
  if (name == "alct" || name == "ALCT") return EstimatorChoice::ALCT;
  throw InvalidInput("unknown estimator '" + std::string(name) + "' (expected lc, alc or alct)");
}

namespace {

bool auto_selected(const BandwidthPlan& plan) {
  return plan.method == SelectorMethod::Aicc || plan.method == SelectorMethod::Lscv;
}

SelectionReport run_selector(const Dataset& data, const PipelineConfig& cfg,
                             const BandwidthGrid& grid, const SelectionOptions& opts) {
  return cfg.plan.method == SelectorMethod::Lscv ? select_lscv_report(data, cfg.kernel, grid, opts)
                                                 : select_aicc_report(data, cfg.kernel, grid, opts);
}

std::vector<double> base_bandwidths(const Dataset& data, const PipelineConfig& cfg,
                                    const BandwidthGrid& grid) {
  const BandwidthPlan& plan = cfg.plan;
  switch (plan.method) {
    case SelectorMethod::Fixed: {
      if (plan.fixed.size() == 1) return std::vector<double>(data.q(), plan.fixed.front());
      if (plan.fixed.size() != data.q()) {
        throw InvalidInput("expected 1 or " + std::to_string(data.q()) + " fixed bandwidths");
      }
      validate_positive(plan.fixed, "bandwidth");
      return plan.fixed;
    }
    case SelectorMethod::RateRule:
      return rate_rule(data.x, plan.rate_constant);
    default:
      return run_selector(data, cfg, grid, {}).selected;
  }
}

double range_bandwidth(const RangeRule& rule, std::span<const double> pilot_at_data) {
  const double base =
      rule.value ? *rule.value : default_range_bandwidth(pilot_at_data, rule.multiplier);
  const double h = base * rule.scale;
  if (!std::isfinite(h) || h <= 0.0) throw InvalidInput("range bandwidth must be positive");
  return h;
}

PipelineFit fit_anisotropic(const Dataset& data, const Matrix& targets, const PipelineConfig& cfg,
                            const BandwidthGrid& grid, EstimatorChoice which,
                            const std::vector<double>& lc_h, const FitResult& lc_at_targets,
                            const RegressionFunction& truth) {
  PipelineFit out;
  out.estimator = which;
  EstimatorSpec& spec = out.spec;
  spec.kind = EstimatorKind::ALC;
  spec.kernel = cfg.kernel;
  spec.range_kernel = cfg.range_kernel;
  spec.iterations = cfg.iterations;

  SuppliedPilot pilot;
  std::vector<double> floor;
  std::vector<double> ceiling;
  if (which == EstimatorChoice::ALCT) {
    if (!truth) throw InvalidInput("ALCT needs the true regression function");
    EstimatorSpec oracle;
    oracle.kind = EstimatorKind::ALC;
    oracle.kernel = cfg.kernel;
    oracle.bandwidths = {lc_h, 1.0};
    oracle.pilot = OraclePilot{truth};
    pilot = compute_pilot(data, targets, oracle);
  } else if (auto_selected(cfg.plan)) {
    // The selected LC fit is the pilot; the anisotropic step must be wider.
    out.pilot_bandwidths = lc_h;
    pilot.at_data = lc_fit(data, data.x, cfg.kernel, lc_h).estimates;
    pilot.at_targets = lc_at_targets.estimates;
    floor = lc_h;
    ceiling = lc_h;
    for (double& h : ceiling) h *= cfg.plan.max_pilot_ratio;
  }

  if (auto_selected(cfg.plan)) {
    const double h_range = range_bandwidth(cfg.plan.range, pilot.at_data);
    SelectionOptions opts;
    opts.range = RangeSmoothing{spec.effective_range_kernel(), h_range, pilot.at_data};
    opts.strictly_above = floor;
    opts.at_most = ceiling;
    try {
      const auto domain = run_selector(data, cfg, grid, opts).selected;
      spec.bandwidths = {scale_for_alc(domain, cfg.plan.inflation), h_range};
    } catch (const SelectionFailure& e) {
      out.failure = std::string(estimator_name(which)) + ": " + e.what();
      return out;
    }
  } else {
    spec.bandwidths.domain = scale_for_alc(lc_h, cfg.plan.inflation);
    if (which == EstimatorChoice::ALC) {
      out.pilot_bandwidths = spec.bandwidths.domain;
      for (double& h : out.pilot_bandwidths) h *= kDefaultPilotRatio;
      pilot.at_data = lc_fit(data, data.x, cfg.kernel, out.pilot_bandwidths).estimates;
      pilot.at_targets = lc_fit(data, targets, cfg.kernel, out.pilot_bandwidths).estimates;
    }
    spec.bandwidths.range = range_bandwidth(cfg.plan.range, pilot.at_data);
  }
  spec.pilot = std::move(pilot);
  out.result = fit(data, targets, spec);
  return out;
}

}  // namespace

PipelineOutput run_pipeline(const Dataset& data, const Matrix& targets, const PipelineConfig& cfg,
                            std::span<const EstimatorChoice> estimators,
                            const RegressionFunction& truth) {
  data.validate();
  if (cfg.iterations < 1) throw InvalidInput("iterations must be at least 1");
  BandwidthGrid grid = cfg.plan.grid;
  if (auto_selected(cfg.plan) && grid.size() == 0) grid = default_grid(data, cfg.plan.grid_points);

  PipelineOutput out;
  out.lc_bandwidths = base_bandwidths(data, cfg, grid);
  const FitResult lc = lc_fit(data, targets, cfg.kernel, out.lc_bandwidths);

  for (EstimatorChoice e : estimators) {
    if (e == EstimatorChoice::LC) {
      PipelineFit f;
      f.estimator = e;
      f.spec.kind = EstimatorKind::LC;
      f.spec.kernel = cfg.kernel;
      f.spec.bandwidths.domain = out.lc_bandwidths;
      f.result = lc;
      out.fits.push_back(std::move(f));
    } else {
      out.fits.push_back(
          fit_anisotropic(data, targets, cfg, grid, e, out.lc_bandwidths, lc, truth));
    }
  }
  return out;
}

}  // namespace alc
