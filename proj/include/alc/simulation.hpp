#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alc/estimators.hpp"
#include "alc/pipeline.hpp"

namespace alc {

enum class DgpFamily { PiecewiseConstant, Continuous, ContinuousJump, Fire2D };

std::string_view dgp_name(DgpFamily family);
/// Accepts "piecewise", "continuous", "jump" and "fire2d".
DgpFamily parse_dgp(std::string_view name);

/// Circular burning region on a pixel grid. Pixel (column c, row r) has
/// regressors (c, r); frame j has radius radius_fn(j), by default r_max * j / frames.
struct FireParams {
  std::size_t width = 80;
  std::size_t height = 80;
  std::array<double, 2> origin{40.0, 40.0};
  double r_max = 40.0;
  int frames = 70;
  double inside = 80.0;
  double outside = 130.0;
  std::function<double(int)> radius_fn;

  double radius(int frame) const;
};

struct DgpSpec {
  DgpFamily family = DgpFamily::PiecewiseConstant;
  /// Offset added on (1.5, 3] by ContinuousJump.
  double jump = 3.0;
  FireParams fire;
  /// Fire2D frame index in 1..fire.frames.
  int frame = 35;
  /// Sample size for the 1D families.
  std::size_t n = 400;
  double sigma = 0.5;
  std::uint64_t seed = 0;
};

/// Fire2D noise level: variance 20.
inline const double kFireSigma = std::sqrt(20.0);

/// g(x). Throws InvalidInput outside [0, 3] (1D) or outside the pixel grid (Fire2D).
double dgp_eval(const DgpSpec& dgp, std::span<const double> x);

/// g as a callable, for oracle pilots and error evaluation.
RegressionFunction dgp_function(const DgpSpec& dgp);

/// X_i = 3 (i - 1) / (n - 1), i = 1..n.
Matrix design_1d(std::size_t n);
/// Row-major pixel grid: row r * width + c holds (c, r).
Matrix pixel_design(std::size_t width, std::size_t height);

/// Y_i = g(X_i) + N(0, sigma^2) noise drawn from NormalStream(dgp.seed).
/// For Fire2D this is the single frame dgp.frame on the pixel grid.
Dataset simulate_dataset(const DgpSpec& dgp);

/// All Fire2D frames 1..frames; frame j uses seed derive_seed(dgp.seed, {j}).
std::vector<Dataset> simulate_fire_frames(const DgpSpec& dgp);

/// g evaluated at every design row.
std::vector<double> truth_at(const DgpSpec& dgp, const Matrix& x);

/// Marks the pixels of pixel_design() whose distance from the fire origin is within
/// `width` of the frame's radius.
std::vector<std::uint8_t> fire_annulus(const DgpSpec& dgp, double width);

/// Mean squared error over the defined points. Throws InvalidInput on length
/// mismatch or when no point is defined.
double mese(std::span<const double> truth, std::span<const double> estimates,
            std::span<const std::uint8_t> undefined);

struct McConfig {
  DgpSpec dgp;
  std::vector<std::size_t> ns{400, 800, 1600};
  std::vector<double> sigmas{0.1, 0.5, 1.0, 2.0};
  int replicates = 125;
  std::vector<EstimatorChoice> estimators{EstimatorChoice::LC, EstimatorChoice::ALC,
                                          EstimatorChoice::ALCT};
  std::uint64_t base_seed = 0;
  PipelineConfig pipeline;
  /// Keep every replicate's MESE in McTable::replicates.
  bool keep_replicates = false;
};

/// Seed of replicate r in cell (n, sigma); independent of execution order.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t n, double sigma, int replicate);

struct McRow {
  double sigma = 0.0;
  std::size_t n = 0;
  EstimatorChoice estimator = EstimatorChoice::LC;
  double mean_mese = 0.0;
  /// Sample SD (n - 1 denominator); 0 with fewer than two successes.
  double sd_mese = 0.0;
  std::size_t failures = 0;
};

struct McReplicate {
  double sigma = 0.0;
  std::size_t n = 0;
  EstimatorChoice estimator = EstimatorChoice::LC;
  int replicate = 0;
  /// NaN when the replicate failed.
  double mese = 0.0;
};

struct McTable {
  /// Ordered by sigma, then n, then estimator, following the config order.
  std::vector<McRow> rows;
  std::vector<McReplicate> replicates;

  const McRow& at(double sigma, std::size_t n, EstimatorChoice e) const;
};

/// Simulates every (sigma, n) cell config.replicates times, fits the requested
/// estimators and aggregates MESE. Replicates run in parallel; the table is
/// bit-identical for any thread count.
McTable run_monte_carlo(const McConfig& config);

struct RateConfig {
  DgpSpec dgp;
  EstimatorChoice estimator = EstimatorChoice::ALCT;
  std::vector<std::size_t> ns{400, 1600, 6400, 25600};
  double sigma = 0.5;
  int replicates = 50;
  std::uint64_t base_seed = 0;
  /// Should use SelectorMethod::RateRule for the rate to be meaningful.
  PipelineConfig pipeline;
};

struct RateReport {
  double slope = 0.0;
  std::vector<std::size_t> ns;
  std::vector<double> mean_mese;
};

/// Least-squares slope of ln(mean MESE) against ln(n).
double log_log_slope(std::span<const std::size_t> ns, std::span<const double> mean_mese);

/// Needs >= 3 sample sizes spanning at least a decade; throws InvalidInput if a
/// cell's mean MESE is zero.
RateReport rate_check(const RateConfig& config);

}  // namespace alc
