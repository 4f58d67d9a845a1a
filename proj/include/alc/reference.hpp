#pragma once

// Serial double-loop implementations kept as test oracles and benchmark
// baselines. They share no code with the production path beyond the scalar
// kernel functions.

#include <span>

#include "alc/estimators.hpp"

namespace alc::reference {

FitResult lc_fit(const Dataset& data, const Matrix& targets, KernelFamily kernel,
                 std::span<const double> h);

FitResult alc_fit(const Dataset& data, const Matrix& targets, KernelFamily domain_kernel,
                  KernelFamily range_kernel, std::span<const double> h, double range_h,
                  std::span<const double> pilot_at_data, std::span<const double> pilot_at_targets);

/// Dense n x n LC smoother matrix, row i holding the normalized weights at X_i.
Matrix lc_smoother_matrix(const Dataset& data, KernelFamily kernel, std::span<const double> h);

/// Improved AIC from the dense smoother matrix. Returns +inf where tr(H) + 2 >= n.
double aicc_score(const Dataset& data, KernelFamily kernel, std::span<const double> h);

/// Leave-one-out CV by refitting without each observation; empty windows cost `penalty`.
double lscv_score(const Dataset& data, KernelFamily kernel, std::span<const double> h,
                  double penalty);

}  // namespace alc::reference
