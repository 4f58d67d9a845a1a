#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "alc/kernels.hpp"
#include "alc/matrix.hpp"

namespace alc {

/// Estimates at m target points. Targets whose weights all vanished are flagged
/// in `undefined` and carry NaN in `estimates`.
struct FitResult {
  Matrix targets;
  std::vector<double> estimates;
  std::vector<std::uint8_t> undefined;

  std::size_t size() const { return estimates.size(); }
  std::size_t undefined_count() const;
  bool all_undefined() const { return !estimates.empty() && undefined_count() == size(); }
};

enum class EstimatorKind { LC, ALC };

/// Pilot from an isotropic local constant fit. Empty bandwidths mean
/// kDefaultPilotRatio times the anisotropic domain bandwidths.
struct IsotropicLcPilot {
  std::vector<double> bandwidths;
};

/// True regression function as pilot (the oracle "ALCT" estimator of simulation studies).
struct OraclePilot {
  std::function<double(std::span<const double>)> g;
};

/// Precomputed pilot values at the design points and at the targets.
struct SuppliedPilot {
  std::vector<double> at_data;
  std::vector<double> at_targets;
};

using PilotPolicy = std::variant<IsotropicLcPilot, OraclePilot, SuppliedPilot>;

/// Pilot bandwidths default to this fraction of the anisotropic domain bandwidths,
/// keeping the pilot strictly narrower than the anisotropic step.
inline constexpr double kDefaultPilotRatio = 0.8;

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::LC;
  KernelFamily kernel = KernelFamily::Uniform;
  /// Range (tonal) kernel; defaults to `kernel`.
  std::optional<KernelFamily> range_kernel;
  Bandwidths bandwidths;
  PilotPolicy pilot = IsotropicLcPilot{};
  /// Number of anisotropic passes for ALC; ignored for LC.
  int iterations = 1;

  KernelFamily effective_range_kernel() const { return range_kernel.value_or(kernel); }
  /// Throws InvalidInput if the spec cannot be applied to q-dimensional data.
  void validate(std::size_t q) const;
};

/// Local constant (Nadaraya-Watson) fit:
///   ghat(x) = sum_i Y_i K((X_i - x)/h) / sum_i K((X_i - x)/h).
FitResult lc_fit(const Dataset& data, const Matrix& targets, KernelFamily kernel,
                 std::span<const double> h);

/// Anisotropic local constant fit with a range kernel on pilot differences:
///   weights K((X_i - x)/h) k((pilot(X_i) - pilot(x)) / h_range).
/// Targets with a NaN pilot value are reported undefined.
FitResult alc_fit(const Dataset& data, const Matrix& targets, const EstimatorSpec& spec,
                  std::span<const double> pilot_at_data, std::span<const double> pilot_at_targets);

/// Pilot values at the design points and the targets for an ALC spec.
SuppliedPilot compute_pilot(const Dataset& data, const Matrix& targets, const EstimatorSpec& spec);

/// Full estimator. LC is a single lc_fit. ALC computes the pilot, runs alc_fit and,
/// for iterations d > 1, feeds each anisotropic fit back in as the next pilot.
FitResult fit(const Dataset& data, const Matrix& targets, const EstimatorSpec& spec);

/// Replaces undefined estimates by the estimate at the nearest defined target
/// (Euclidean distance, lowest index on ties). No-op when nothing is defined.
void fill_nearest(FitResult& result);

}  // namespace alc
