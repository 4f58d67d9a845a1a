#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "alc/estimators.hpp"

namespace testutil {

inline bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

/// Random fixed design on [0, 3]^q with outcomes in [-10, 10].
/// Duplicated x values are included on purpose (ties in the sorted index).
inline alc::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t q) {
  std::uniform_real_distribution<double> ux(0.0, 3.0);
  std::uniform_real_distribution<double> uy(-10.0, 10.0);
  alc::Dataset d;
  d.x = alc::Matrix(n, q);
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < q; ++j) d.x(i, j) = ux(rng);
    if (i > 0 && i % 7 == 0) d.x(i, 0) = d.x(i - 1, 0);
    d.y[i] = uy(rng);
  }
  return d;
}

inline alc::Matrix random_targets(std::mt19937_64& rng, std::size_t m, std::size_t q) {
  std::uniform_real_distribution<double> ux(-0.2, 3.2);
  alc::Matrix t(m, q);
  for (double& v : t.data()) v = ux(rng);
  return t;
}

inline double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
inline double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

inline bool same(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace testutil
