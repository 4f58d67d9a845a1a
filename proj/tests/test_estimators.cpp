#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "alc/errors.hpp"
#include "alc/estimators.hpp"
#include "alc/reference.hpp"
#include "helpers.hpp"

using namespace alc;
using testutil::close_rel;

namespace {

Dataset line_data(std::vector<double> xs, std::vector<double> ys) {
  Dataset d;
  d.x = Matrix::column(xs);
  d.y = std::move(ys);
  return d;
}

Matrix points(std::vector<double> xs) { return Matrix::column(xs); }

EstimatorSpec alc_spec(std::vector<double> h, double hr, PilotPolicy pilot,
                       KernelFamily k = KernelFamily::Uniform) {
  EstimatorSpec s;
  s.kind = EstimatorKind::ALC;
  s.kernel = k;
  s.bandwidths = {std::move(h), hr};
  s.pilot = std::move(pilot);
  return s;
}

}  // namespace

TEST_CASE("lc fit of constant data is exactly constant") {
  std::mt19937_64 rng(11);
  for (std::size_t q : {1u, 2u}) {
    Dataset d = testutil::random_dataset(rng, 60, q);
    for (double& y : d.y) y = 3.7;
    const Matrix t = testutil::random_targets(rng, 40, q);
    for (KernelFamily k : {KernelFamily::Uniform, KernelFamily::Gaussian, KernelFamily::Epanechnikov}) {
      const std::vector<double> h(q, 0.45);
      const FitResult r = lc_fit(d, t, k, h);
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (!r.undefined[i]) CHECK(r.estimates[i] == 3.7);
      }
    }
  }
}

TEST_CASE("lc fit small examples") {
  SUBCASE("single point in the window") {
    const Dataset d = line_data({0.0, 1.0}, {0.0, 10.0});
    const FitResult r = lc_fit(d, points({0.0}), KernelFamily::Uniform, std::vector{0.4});
    CHECK(r.estimates[0] == 0.0);
    CHECK(r.undefined[0] == 0);
  }
  SUBCASE("wide window is the plain mean") {
    const Dataset d = line_data({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0});
    const FitResult r = lc_fit(d, points({0.5}), KernelFamily::Uniform, std::vector{10.0});
    CHECK(r.estimates[0] == doctest::Approx((1.0 + 2.0 + 3.0) / 3.0).epsilon(1e-15));
  }
  SUBCASE("empty window is undefined, not zero") {
    const Dataset d = line_data({0.0, 1.0}, {5.0, 6.0});
    const FitResult r = lc_fit(d, points({0.5, 5.0}), KernelFamily::Uniform, std::vector{0.4});
    CHECK(r.undefined_count() == 2);
    CHECK(r.all_undefined());
    CHECK(std::isnan(r.estimates[0]));
  }
}

TEST_CASE("lc fit argument errors") {
  const Dataset d = line_data({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(lc_fit(d, Matrix(2, 2), KernelFamily::Uniform, std::vector{0.5}), InvalidInput);
  CHECK_THROWS_AS(lc_fit(d, points({0.5}), KernelFamily::Uniform, std::vector{0.5, 0.5}),
                  InvalidInput);
  CHECK_THROWS_AS(lc_fit(d, points({0.5}), KernelFamily::Uniform, std::vector{0.0}), InvalidInput);
  CHECK_THROWS_AS(lc_fit(d, points({std::nan("")}), KernelFamily::Uniform, std::vector{0.5}),
                  InvalidInput);
  Dataset bad = d;
  bad.y[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(lc_fit(bad, points({0.5}), KernelFamily::Uniform, std::vector{0.5}), InvalidInput);
  Dataset tiny = line_data({0.0}, {1.0});
  CHECK_THROWS_AS(lc_fit(tiny, points({0.5}), KernelFamily::Uniform, std::vector{0.5}), InvalidInput);
}

TEST_CASE("alc excludes a domain-local point across a jump") {
  const Dataset d = line_data({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, {1, 1, 1, 7, 7, 7});
  const Matrix t = points({0.4});
  const EstimatorSpec s = alc_spec({0.45}, 1.0, SuppliedPilot{d.y, {1.0}});
  const FitResult r = fit(d, t, s);
  CHECK(r.estimates[0] == 1.0);
  // The same window without the range kernel averages across the jump.
  const FitResult lc = lc_fit(d, t, KernelFamily::Uniform, std::vector{0.45});
  CHECK(lc.estimates[0] == doctest::Approx((1.0 + 1.0 + 1.0 + 7.0 + 7.0) / 5.0));
}

TEST_CASE("alc with a NaN pilot at a target leaves it undefined") {
  const Dataset d = line_data({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0});
  const std::vector<double> at_targets{1.5, std::nan("")};
  const EstimatorSpec s = alc_spec({1.0}, 1.0, SuppliedPilot{});
  const FitResult r = alc_fit(d, points({0.2, 0.8}), s, d.y, at_targets);
  CHECK(r.undefined[0] == 0);
  CHECK(r.undefined[1] == 1);
  const std::vector<double> bad_data{1.0, std::nan(""), 3.0};
  CHECK_THROWS_AS(alc_fit(d, points({0.2, 0.8}), s, bad_data, at_targets), InvalidInput);
  CHECK_THROWS_AS(alc_fit(d, points({0.2}), s, d.y, at_targets), InvalidInput);
}

TEST_CASE("alc spec validation") {
  const Dataset d = line_data({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0});
  EstimatorSpec s = alc_spec({0.5}, 1.0, IsotropicLcPilot{});
  s.iterations = 0;
  CHECK_THROWS_AS(fit(d, d.x, s), InvalidInput);
  s.iterations = 1;
  s.bandwidths.range = 0.0;
  CHECK_THROWS_AS(fit(d, d.x, s), InvalidInput);
  s.bandwidths.range = 1.0;
  s.pilot = IsotropicLcPilot{{0.2, 0.2}};
  CHECK_THROWS_AS(fit(d, d.x, s), InvalidInput);
  s.pilot = OraclePilot{};
  CHECK_THROWS_AS(fit(d, d.x, s), InvalidInput);
  s.pilot = OraclePilot{[](std::span<const double> x) { return x[0] > 0.7 ? std::nan("") : 1.0; }};
  CHECK_THROWS_AS(fit(d, d.x, s), InvalidInput);
}

TEST_CASE("isotropic pilot defaults to 0.8 of the domain bandwidth") {
  std::mt19937_64 rng(5);
  const Dataset d = testutil::random_dataset(rng, 80, 1);
  const Matrix t = testutil::random_targets(rng, 30, 1);
  const EstimatorSpec s = alc_spec({0.5}, 2.0, IsotropicLcPilot{});
  const SuppliedPilot p = compute_pilot(d, t, s);
  const FitResult expected = lc_fit(d, t, KernelFamily::Uniform, std::vector{0.4});
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (expected.undefined[i]) {
      CHECK(std::isnan(p.at_targets[i]));
    } else {
      CHECK(p.at_targets[i] == expected.estimates[i]);
    }
  }
}

TEST_CASE("second iteration equals alc_fit with the first pass as supplied pilot") {
  std::mt19937_64 rng(17);
  const Dataset d = testutil::random_dataset(rng, 120, 2);
  const Matrix t = testutil::random_targets(rng, 50, 2);
  EstimatorSpec one = alc_spec({0.6, 0.7}, 4.0, IsotropicLcPilot{{0.5, 0.5}});
  EstimatorSpec two = one;
  two.iterations = 2;

  const FitResult first_data = fit(d, d.x, one);
  const FitResult first_targets = fit(d, t, one);
  const FitResult manual = alc_fit(d, t, one, first_data.estimates, first_targets.estimates);
  const FitResult iterated = fit(d, t, two);
  REQUIRE(manual.size() == iterated.size());
  for (std::size_t i = 0; i < manual.size(); ++i) {
    CHECK(manual.undefined[i] == iterated.undefined[i]);
    if (!manual.undefined[i]) CHECK(manual.estimates[i] == iterated.estimates[i]);
  }
}

TEST_CASE("production fits match the double-loop reference") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> un(2, 120);
  std::uniform_real_distribution<double> uh(0.05, 1.5);
  const KernelFamily fams[] = {KernelFamily::Uniform, KernelFamily::Gaussian,
                               KernelFamily::Epanechnikov};
  for (int inst = 0; inst < 60; ++inst) {
    const std::size_t q = 1 + inst % 2;
    const Dataset d = testutil::random_dataset(rng, un(rng), q);
    const Matrix t = testutil::random_targets(rng, 25, q);
    std::vector<double> h(q);
    for (double& v : h) v = uh(rng);
    const KernelFamily k = fams[inst % 3];
    const KernelFamily rk = fams[(inst / 3) % 3];

    const FitResult a = lc_fit(d, t, k, h);
    const FitResult b = reference::lc_fit(d, t, k, h);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a.undefined[i] == b.undefined[i]);
      if (!a.undefined[i]) CHECK(close_rel(a.estimates[i], b.estimates[i], 1e-12));
    }

    const std::vector<double> pd = reference::lc_fit(d, d.x, k, h).estimates;
    const std::vector<double> pt = b.estimates;
    EstimatorSpec s = alc_spec(h, 2.5, SuppliedPilot{}, k);
    s.range_kernel = rk;
    const FitResult c = alc_fit(d, t, s, pd, pt);
    const FitResult e = reference::alc_fit(d, t, k, rk, h, 2.5, pd, pt);
    for (std::size_t i = 0; i < c.size(); ++i) {
      REQUIRE(c.undefined[i] == e.undefined[i]);
      if (!c.undefined[i]) CHECK(close_rel(c.estimates[i], e.estimates[i], 1e-12));
    }
  }
}

TEST_CASE("alc reduces to lc as the range bandwidth grows") {
  std::mt19937_64 rng(99);
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t q = 1 + inst % 2;
    const Dataset d = testutil::random_dataset(rng, 90, q);
    const Matrix t = testutil::random_targets(rng, 30, q);
    const std::vector<double> h(q, 0.6);
    EstimatorSpec s = alc_spec(h, 1e9, IsotropicLcPilot{}, KernelFamily::Epanechnikov);
    s.range_kernel = KernelFamily::Gaussian;
    const FitResult a = fit(d, t, s);
    const FitResult l = lc_fit(d, t, KernelFamily::Epanechnikov, h);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.undefined[i] || l.undefined[i]) continue;
      CHECK(std::fabs(a.estimates[i] - l.estimates[i]) < 1e-9);
    }
  }
}

TEST_CASE("estimates are convex combinations of the outcomes") {
  std::mt19937_64 rng(7);
  for (int inst = 0; inst < 30; ++inst) {
    const std::size_t q = 1 + inst % 2;
    const Dataset d = testutil::random_dataset(rng, 70, q);
    const Matrix t = testutil::random_targets(rng, 40, q);
    const double lo = testutil::min_of(d.y), hi = testutil::max_of(d.y);
    const std::vector<double> h(q, 0.3 + 0.05 * inst);
    EstimatorSpec s = alc_spec(h, 1.0 + inst, IsotropicLcPilot{});
    s.iterations = 1 + inst % 3;
    for (const FitResult& r : {lc_fit(d, t, KernelFamily::Gaussian, h), fit(d, t, s)}) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r.undefined[i]) continue;
        CHECK(r.estimates[i] >= lo);
        CHECK(r.estimates[i] <= hi);
      }
    }
  }
}

TEST_CASE("shift equivariance") {
  std::mt19937_64 rng(31);
  const double c = 12.375;
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t q = 1 + inst % 2;
    const Dataset d = testutil::random_dataset(rng, 80, q);
    Dataset shifted = d;
    for (double& y : shifted.y) y += c;
    const Matrix t = testutil::random_targets(rng, 30, q);
    const std::vector<double> h(q, 0.5);

    const FitResult a = lc_fit(d, t, KernelFamily::Uniform, h);
    const FitResult b = lc_fit(shifted, t, KernelFamily::Uniform, h);
    const EstimatorSpec s = alc_spec(h, 3.0, IsotropicLcPilot{});
    const FitResult e = fit(d, t, s);
    const FitResult f = fit(shifted, t, s);
    const auto g = [](std::span<const double> x) { return x[0] > 1.5 ? 4.0 : -2.0; };
    const FitResult o1 = fit(d, t, alc_spec(h, 3.0, OraclePilot{g}));
    const FitResult o2 = fit(shifted, t, alc_spec(h, 3.0, OraclePilot{[&](std::span<const double> x) {
                                                     return g(x) + c;
                                                   }}));
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (!a.undefined[i]) CHECK(close_rel(b.estimates[i], a.estimates[i] + c, 1e-12));
      if (!e.undefined[i]) CHECK(close_rel(f.estimates[i], e.estimates[i] + c, 1e-12));
      if (!o1.undefined[i]) CHECK(close_rel(o2.estimates[i], o1.estimates[i] + c, 1e-12));
    }
  }
}

TEST_CASE("scale equivariance with the range bandwidth rescaled") {
  std::mt19937_64 rng(41);
  for (double c : {2.5, -0.75, 8.0}) {
    const Dataset d = testutil::random_dataset(rng, 90, 2);
    Dataset scaled = d;
    for (double& y : scaled.y) y *= c;
    const Matrix t = testutil::random_targets(rng, 30, 2);
    const std::vector<double> h{0.5, 0.6};
    const FitResult a = fit(d, t, alc_spec(h, 3.0, IsotropicLcPilot{}));
    const FitResult b = fit(scaled, t, alc_spec(h, 3.0 * std::fabs(c), IsotropicLcPilot{}));
    for (std::size_t i = 0; i < t.rows(); ++i) {
      REQUIRE(a.undefined[i] == b.undefined[i]);
      if (!a.undefined[i]) CHECK(close_rel(b.estimates[i], c * a.estimates[i], 1e-12));
    }
  }
}

TEST_CASE("fits are bit-identical across thread counts") {
  std::mt19937_64 rng(3);
  const Dataset d = testutil::random_dataset(rng, 400, 2);
  const Matrix t = testutil::random_targets(rng, 300, 2);
  EstimatorSpec s = alc_spec({0.3, 0.4}, 2.0, IsotropicLcPilot{}, KernelFamily::Gaussian);
  s.iterations = 2;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const FitResult one = fit(d, t, s);
  omp_set_num_threads(4);
  const FitResult four = fit(d, t, s);
  omp_set_num_threads(saved);
  CHECK(one.undefined == four.undefined);
  for (std::size_t i = 0; i < one.size(); ++i) {
    if (!one.undefined[i]) CHECK(one.estimates[i] == four.estimates[i]);
  }
}

TEST_CASE("fill_nearest copies the closest defined estimate") {
  FitResult r;
  r.targets = Matrix::column(std::vector{0.0, 1.0, 2.0, 3.0, 10.0});
  r.estimates = {5.0, std::nan(""), std::nan(""), 9.0, std::nan("")};
  r.undefined = {0, 1, 1, 0, 1};
  fill_nearest(r);
  CHECK(r.undefined_count() == 0);
  CHECK(r.estimates[1] == 5.0);
  CHECK(r.estimates[2] == 9.0);
  CHECK(r.estimates[4] == 9.0);

  // Equidistant: the lower index wins.
  FitResult tie;
  tie.targets = Matrix::column(std::vector{0.0, 1.0, 2.0});
  tie.estimates = {1.0, std::nan(""), 3.0};
  tie.undefined = {0, 1, 0};
  fill_nearest(tie);
  CHECK(tie.estimates[1] == 1.0);

  FitResult none;
  none.targets = Matrix::column(std::vector{0.0});
  none.estimates = {std::nan("")};
  none.undefined = {1};
  fill_nearest(none);
  CHECK(none.undefined[0] == 1);
}
