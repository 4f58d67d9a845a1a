#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "alc/bandwidth.hpp"
#include "alc/errors.hpp"
#include "alc/reference.hpp"
#include "alc/simulation.hpp"
#include "helpers.hpp"

using namespace alc;

namespace {

Dataset simulated(DgpFamily family, std::size_t n, double sigma, std::uint64_t seed) {
  DgpSpec spec;
  spec.family = family;
  spec.n = n;
  spec.sigma = sigma;
  spec.seed = seed;
  return simulate_dataset(spec);
}

BandwidthGrid singleton(std::vector<double> h) {
  BandwidthGrid g;
  for (double v : h) g.per_dim.push_back({v});
  return g;
}

// Brute-force scan with the dense reference criteria, same tie rule (first minimum).
std::size_t brute_force_argmin(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] < scores[best]) best = k;
  }
  return best;
}

}  // namespace

TEST_CASE("aicc for the global-mean smoother has the closed form") {
  const Dataset d = simulated(DgpFamily::Continuous, 40, 0.5, 3);
  const std::vector<double> h{100.0};
  const SmootherStats st = smoother_stats(d, KernelFamily::Uniform, h);
  const double n = 40.0;
  const double mean = std::accumulate(d.y.begin(), d.y.end(), 0.0) / n;
  double var = 0.0;
  for (double y : d.y) var += (y - mean) * (y - mean);
  var /= n;
  CHECK(st.trace == doctest::Approx(1.0).epsilon(1e-12));
  const double expected = std::log(var) + (1.0 + 1.0 / n) / (1.0 - 3.0 / n);
  CHECK(st.aicc == doctest::Approx(expected).epsilon(1e-12));

  const Matrix H = reference::lc_smoother_matrix(d, KernelFamily::Uniform, h);
  for (std::size_t i = 0; i < 40; ++i) CHECK(H(i, i) == doctest::Approx(1.0 / n));
  CHECK(reference::aicc_score(d, KernelFamily::Uniform, h) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("smoother statistics agree with the dense reference") {
  std::mt19937_64 rng(8);
  for (int inst = 0; inst < 12; ++inst) {
    const std::size_t q = 1 + inst % 2;
    const Dataset d = testutil::random_dataset(rng, 60, q);
    const std::vector<double> h(q, 0.2 + 0.1 * inst);
    const KernelFamily k = inst % 3 == 0 ? KernelFamily::Gaussian : KernelFamily::Uniform;
    const SmootherStats st = smoother_stats(d, k, h);
    const Matrix H = reference::lc_smoother_matrix(d, k, h);
    double tr = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i) tr += H(i, i);
    CHECK(st.trace == doctest::Approx(tr).epsilon(1e-12));
    CHECK(st.trace > 0.0);
    CHECK(st.trace <= static_cast<double>(d.n()) + 1e-9);
    const double ref_aicc = reference::aicc_score(d, k, h);
    if (std::isinf(ref_aicc)) {
      CHECK(std::isinf(st.aicc));
    } else {
      CHECK(st.aicc == doctest::Approx(ref_aicc).epsilon(1e-10));
    }
    CHECK(st.lscv == doctest::Approx(reference::lscv_score(d, k, h, kLooPenalty)).epsilon(1e-10));
  }
}

TEST_CASE("aicc selection matches a dense-matrix scan on a piecewise draw") {
  const Dataset d = simulated(DgpFamily::PiecewiseConstant, 400, 0.5, 77);
  const BandwidthGrid grid = default_grid(d, 25);
  std::vector<double> scores;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    scores.push_back(reference::aicc_score(d, KernelFamily::Uniform, grid.candidate(k)));
  }
  const SelectionReport rep = select_aicc_report(d, KernelFamily::Uniform, grid);
  CHECK(rep.index == brute_force_argmin(scores));
  CHECK(rep.selected == grid.candidate(brute_force_argmin(scores)));
}

TEST_CASE("lscv selection matches a brute-force leave-one-out scan") {
  const Dataset d = simulated(DgpFamily::Continuous, 50, 0.5, 12);
  const BandwidthGrid grid = default_grid(d, 25);
  std::vector<double> scores;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    scores.push_back(reference::lscv_score(d, KernelFamily::Uniform, grid.candidate(k), kLooPenalty));
  }
  const auto h = select_lscv(d, KernelFamily::Uniform, grid);
  CHECK(h == grid.candidate(brute_force_argmin(scores)));
}

TEST_CASE("lscv on constant data ties and picks the narrowest fully supported bandwidth") {
  Dataset d;
  d.x = design_1d(30);
  d.y.assign(30, 2.0);
  BandwidthGrid grid;
  // The first candidate leaves every point alone (spacing is 3/29 > 0.05), which
  // makes it inadmissible rather than merely penalized.
  grid.per_dim = {{0.05, 0.2, 0.5, 1.0, 4.0}};
  const SelectionReport rep = select_lscv_report(d, KernelFamily::Uniform, grid);
  CHECK(rep.index == 1);
  CHECK(rep.scores[1] == 0.0);
  CHECK(rep.scores[4] == 0.0);
  CHECK(std::isinf(rep.scores[0]));
  CHECK(reference::lscv_score(d, KernelFamily::Uniform, grid.candidate(0), kLooPenalty) ==
        doctest::Approx(kLooPenalty));
}

TEST_CASE("singleton grids return their only point") {
  const Dataset d = simulated(DgpFamily::PiecewiseConstant, 60, 0.5, 1);
  CHECK(select_aicc(d, KernelFamily::Uniform, singleton({0.1})) == std::vector{0.1});
  CHECK(select_lscv(d, KernelFamily::Uniform, singleton({0.1})) == std::vector{0.1});
}

TEST_CASE("selection failures and invalid inputs") {
  Dataset d;
  d.x = design_1d(6);
  d.y = {1, 2, 3, 4, 5, 6};
  // Each point alone in its window: tr(H) = n.
  CHECK_THROWS_AS(select_aicc(d, KernelFamily::Uniform, singleton({0.01})), SelectionFailure);
  CHECK_THROWS_AS(select_lscv(d, KernelFamily::Uniform, singleton({0.01})), SelectionFailure);
  CHECK_THROWS_AS(select_aicc(d, KernelFamily::Uniform, BandwidthGrid{}), InvalidInput);

  Dataset small;
  small.x = design_1d(4);
  small.y = {1, 2, 3, 4};
  CHECK_THROWS_AS(select_aicc(small, KernelFamily::Uniform, singleton({1.0})), InvalidInput);
  CHECK_NOTHROW(select_lscv(small, KernelFamily::Uniform, singleton({1.0})));

  BandwidthGrid bad;
  bad.per_dim = {{0.2, 0.1}};
  CHECK_THROWS_AS(bad.validate(1), InvalidInput);
  bad.per_dim = {{0.1, 0.2}, {0.1}};
  CHECK_THROWS_AS(bad.validate(2), InvalidInput);
}

TEST_CASE("selectors are invariant to row order") {
  std::mt19937_64 rng(21);
  const Dataset d = simulated(DgpFamily::ContinuousJump, 200, 1.0, 9);
  std::vector<std::size_t> perm(d.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Dataset shuffled;
  shuffled.x = Matrix(d.n(), 1);
  shuffled.y.resize(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) {
    shuffled.x(i, 0) = d.x(perm[i], 0);
    shuffled.y[i] = d.y[perm[i]];
  }
  const BandwidthGrid grid = default_grid(d, 25);
  CHECK(select_aicc(d, KernelFamily::Uniform, grid) == select_aicc(shuffled, KernelFamily::Uniform, grid));
  CHECK(select_lscv(d, KernelFamily::Uniform, grid) == select_lscv(shuffled, KernelFamily::Uniform, grid));
}

TEST_CASE("selected bandwidths belong to the grid and respect the window options") {
  const Dataset d = simulated(DgpFamily::PiecewiseConstant, 300, 1.0, 4);
  const BandwidthGrid grid = default_grid(d, 25);
  const auto h = select_aicc(d, KernelFamily::Uniform, grid);
  CHECK(std::find(grid.per_dim[0].begin(), grid.per_dim[0].end(), h[0]) != grid.per_dim[0].end());

  SelectionOptions opts;
  opts.strictly_above = h;
  opts.at_most = {3.0 * h[0]};
  const SelectionReport rep = select_aicc_report(d, KernelFamily::Uniform, grid, opts);
  CHECK(rep.selected[0] > h[0]);
  CHECK(rep.selected[0] <= 3.0 * h[0]);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = grid.per_dim[0][k];
    if (v <= h[0] || v > 3.0 * h[0]) CHECK(std::isinf(rep.scores[k]));
  }
}

TEST_CASE("default grid spans range/n_j to range_j geometrically") {
  Dataset d;
  d.x = pixel_design(20, 10);
  d.y.assign(200, 1.0);
  const BandwidthGrid g = default_grid(d, 25);
  REQUIRE(g.per_dim.size() == 2);
  CHECK(g.size() == 25);
  CHECK(g.per_dim[0].front() == doctest::Approx(19.0 / 20.0));
  CHECK(g.per_dim[0].back() == 19.0);
  CHECK(g.per_dim[1].front() == doctest::Approx(9.0 / 10.0));
  CHECK(g.per_dim[1].back() == 9.0);
  for (const auto& dim : g.per_dim) {
    const double ratio = dim[1] / dim[0];
    for (std::size_t k = 1; k < dim.size(); ++k) {
      CHECK(dim[k] / dim[k - 1] == doctest::Approx(ratio).epsilon(1e-9));
    }
  }
  CHECK(distinct_count(d.x, 0) == 20);
  CHECK(distinct_count(d.x, 1) == 10);
}

TEST_CASE("scale_for_alc") {
  CHECK(scale_for_alc(std::vector{0.1}, 1.0) == std::vector{0.1});
  const auto h = scale_for_alc(std::vector{0.1, 0.2}, 1.25);
  CHECK(h[0] == doctest::Approx(0.125));
  CHECK(h[1] == doctest::Approx(0.25));
  CHECK_THROWS_AS(scale_for_alc(std::vector{0.1}, 0.9), InvalidInput);
  CHECK_THROWS_AS(scale_for_alc(std::vector{-0.1}, 1.0), InvalidInput);
}

TEST_CASE("default range bandwidth") {
  CHECK(default_range_bandwidth(std::vector{4.0, 4.0, 4.0}, 0.7) == 0.7);
  CHECK(default_range_bandwidth(std::vector{0.0, 2.0}, 1.0) == doctest::Approx(std::sqrt(2.0)));

  const Dataset d = simulated(DgpFamily::PiecewiseConstant, 400, 0.5, 2);
  const double n = static_cast<double>(d.n());
  const double mean = std::accumulate(d.y.begin(), d.y.end(), 0.0) / n;
  double ss = 0.0;
  for (double y : d.y) ss += (y - mean) * (y - mean);
  CHECK(default_range_bandwidth(d.y, 0.5) == doctest::Approx(0.5 * std::sqrt(ss / (n - 1.0))).epsilon(1e-12));
  CHECK_THROWS_AS(default_range_bandwidth(std::vector{1.0}, 0.5), InvalidInput);
  CHECK_THROWS_AS(default_range_bandwidth(d.y, 0.0), InvalidInput);
}

TEST_CASE("rate rule scales as n^(-1/(q+2))") {
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n : {100u, 400u, 1600u, 6400u}) {
    const auto h = rate_rule(design_1d(n), 2.0);
    CHECK(h[0] < previous);
    previous = h[0];
    CHECK(h[0] * std::cbrt(static_cast<double>(n)) == doctest::Approx(2.0).epsilon(1e-12));
  }
  const auto h2 = rate_rule(pixel_design(16, 81), 1.0);
  CHECK(h2[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(rate_rule(design_1d(10), 0.0), InvalidInput);
}
