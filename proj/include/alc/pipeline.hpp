#pragma once

// Resolves a bandwidth plan into explicit estimator specs and fits them. This
// is the procedure shared by the CLI, the Monte Carlo harness and the image
// smoother: select the LC bandwidth, use the LC fit as pilot, pick the range
// bandwidth, then select the anisotropic domain bandwidth with the pilot held fixed.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alc/bandwidth.hpp"
#include "alc/estimators.hpp"

namespace alc {

/// LC, ALC with an LC pilot, and ALCT (ALC with the true regression function as pilot).
enum class EstimatorChoice { LC, ALC, ALCT };

std::string_view estimator_name(EstimatorChoice e);
EstimatorChoice parse_estimator(std::string_view name);

enum class SelectorMethod { Aicc, Lscv, Fixed, RateRule };

struct RangeRule {
  /// Explicit range bandwidth; when unset, multiplier * SD(pilot at the data).
  std::optional<double> value;
  double multiplier = 0.5;
  /// Applied on top of either choice (the oversmoothing experiments scale it by 5).
  double scale = 1.0;
};

struct BandwidthPlan {
  SelectorMethod method = SelectorMethod::Aicc;
  /// Fixed bandwidths; a single value applies to every dimension.
  std::vector<double> fixed;
  double rate_constant = 1.0;
  /// Empty means default_grid(data, grid_points).
  BandwidthGrid grid;
  std::size_t grid_points = 25;
  RangeRule range;
  /// Multiplies the anisotropic domain bandwidths after they are chosen.
  double inflation = 1.0;
  /// Automatic ALC selection searches (h_pilot, max_pilot_ratio * h_pilot].
  double max_pilot_ratio = 3.0;
};

struct PipelineConfig {
  KernelFamily kernel = KernelFamily::Uniform;
  std::optional<KernelFamily> range_kernel;
  BandwidthPlan plan;
  int iterations = 1;
};

struct PipelineFit {
  EstimatorChoice estimator = EstimatorChoice::LC;
  /// Fully resolved spec. ALC/ALCT carry the pilot as SuppliedPilot.
  EstimatorSpec spec;
  std::vector<double> pilot_bandwidths;
  FitResult result;
  /// Set instead of `result` when bandwidth selection failed for this estimator.
  std::optional<std::string> failure;
};

struct PipelineOutput {
  std::vector<double> lc_bandwidths;
  std::vector<PipelineFit> fits;
};

using RegressionFunction = std::function<double(std::span<const double>)>;

/// Fits each requested estimator at the targets. Throws SelectionFailure if the
/// LC bandwidth cannot be selected (every estimator depends on it); failures of
/// the anisotropic selections are recorded per estimator. `truth` is required for ALCT.
PipelineOutput run_pipeline(const Dataset& data, const Matrix& targets, const PipelineConfig& cfg,
                            std::span<const EstimatorChoice> estimators,
                            const RegressionFunction& truth = {});

}  // namespace alc
