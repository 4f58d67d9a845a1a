#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alc/kernels.hpp"
#include "alc/matrix.hpp"

namespace alc {

/// Candidate bandwidth vectors for grid search. Candidate k is
/// (per_dim[0][k], ..., per_dim[q-1][k]); each per-dimension list is strictly
/// increasing, so candidates are ordered from narrowest to widest.
struct BandwidthGrid {
  std::vector<std::vector<double>> per_dim;

  std::size_t size() const { return per_dim.empty() ? 0 : per_dim.front().size(); }
  std::vector<double> candidate(std::size_t k) const;
  /// Throws InvalidInput unless there are q non-empty, equally long, positive,
  /// strictly increasing lists.
  void validate(std::size_t q) const;
};

/// Geometric grid with `points` values per dimension from lo[j] to hi[j].
BandwidthGrid geometric_grid(std::span<const double> lo, std::span<const double> hi,
                             std::size_t points);

/// Default search grid: geometric from range_j / n_j to range_j, where n_j is the
/// number of distinct design values along dimension j.
BandwidthGrid default_grid(const Dataset& data, std::size_t points = 25);

/// Number of distinct values in column j of the design.
std::size_t distinct_count(const Matrix& x, std::size_t j);

/// Penalty added to the LOO criterion for each observation whose leave-one-out window is empty.
inline constexpr double kLooPenalty = 1e12;

/// Range kernel term of an anisotropic smoother with a fixed pilot; lets the
/// selectors score ALC domain bandwidths as well as plain LC ones.
struct RangeSmoothing {
  KernelFamily kernel = KernelFamily::Uniform;
  double bandwidth = 1.0;
  std::span<const double> pilot_at_data;
};

/// Linear-smoother diagnostics at one bandwidth.
struct SmootherStats {
  double trace = 0.0;    // tr(H)
  double sigma2 = 0.0;   // ||(I - H) Y||^2 / n
  double aicc = 0.0;     // +inf when tr(H) + 2 >= n
  double lscv = 0.0;     // LOO squared error with kLooPenalty for empty windows
  std::size_t loo_undefined = 0;
};

SmootherStats smoother_stats(const Dataset& data, KernelFamily kernel, std::span<const double> h,
                             const std::optional<RangeSmoothing>& range = std::nullopt);

struct SelectionOptions {
  std::optional<RangeSmoothing> range;
  /// When non-empty, only candidates exceeding this vector in every component are scored.
  std::vector<double> strictly_above;
  /// When non-empty, only candidates at most this vector in every component are scored.
  std::vector<double> at_most;
};

struct SelectionReport {
  std::vector<double> selected;
  std::size_t index = 0;
  /// Criterion per candidate; +inf for skipped or excluded candidates.
  std::vector<double> scores;
};

/// Minimizes AIC_c(h) = ln(sigma2) + (1 + tr/n) / (1 - (tr + 2)/n) over the grid.
/// Ties go to the narrower candidate. Throws SelectionFailure if no candidate is admissible.
SelectionReport select_aicc_report(const Dataset& data, KernelFamily kernel,
                                   const BandwidthGrid& grid, const SelectionOptions& opts = {});

/// Minimizes the leave-one-out squared error over the grid. Throws SelectionFailure
/// if every candidate leaves every observation without neighbours.
SelectionReport select_lscv_report(const Dataset& data, KernelFamily kernel,
                                   const BandwidthGrid& grid, const SelectionOptions& opts = {});

std::vector<double> select_aicc(const Dataset& data, KernelFamily kernel, const BandwidthGrid& grid);
std::vector<double> select_lscv(const Dataset& data, KernelFamily kernel, const BandwidthGrid& grid);

/// Componentwise h_pilot * inflation, inflation >= 1.
std::vector<double> scale_for_alc(std::span<const double> h_pilot, double inflation);

/// multiplier * sample SD (n - 1 denominator) of the pilot values, or the
/// multiplier itself when the pilot is constant.
double default_range_bandwidth(std::span<const double> pilot_values, double multiplier);

/// h_j = c * n_j^(-1/(q+2)) with n_j the number of distinct design values along j.
std::vector<double> rate_rule(const Matrix& x, double c);

}  // namespace alc
