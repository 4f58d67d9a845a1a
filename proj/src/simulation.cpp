#include "alc/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "alc/errors.hpp"
#include "alc/rng.hpp"

namespace alc {

std::string_view dgp_name(DgpFamily family) {
  switch (family) {
    case DgpFamily::PiecewiseConstant:
      return "piecewise";
    case DgpFamily::Continuous:
      return "continuous";
    case DgpFamily::ContinuousJump:
      return "jump";
    case DgpFamily::Fire2D:
      return "fire2d";
  }
  return "unknown";
}

DgpFamily parse_dgp(std::string_view name) {
  if (name == "piecewise") return DgpFamily::PiecewiseConstant;
  if (name == "continuous") return DgpFamily::Continuous;
  if (name == "jump" || name == "continuous-jump") return DgpFamily::ContinuousJump;
  if (name == "fire2d") return DgpFamily::Fire2D;
  throw InvalidInput("unknown DGP '" + std::string(name) +
                     "' (expected piecewise, continuous, jump or fire2d)");
}

double FireParams::radius(int frame) const {
  if (radius_fn) return radius_fn(frame);
  return r_max * static_cast<double>(frame) / static_cast<double>(frames);
}

namespace {

double continuous(double x) {
  const double u = x / 3.0;
  return 50.0 * (u * u - u * u * u);
}

void check_1d(std::span<const double> x) {
  if (x.size() != 1) throw InvalidInput("1D DGP evaluated at a point of dimension " + std::to_string(x.size()));
  if (!(x[0] >= 0.0 && x[0] <= 3.0)) throw InvalidInput("1D DGP domain is [0, 3]");
}

}  // namespace

double dgp_eval(const DgpSpec& dgp, std::span<const double> x) {
  switch (dgp.family) {
    case DgpFamily::PiecewiseConstant:
      check_1d(x);
      if (x[0] <= 1.0) return 1.0;
      return x[0] <= 2.0 ? 7.0 : 3.0;
    case DgpFamily::Continuous:
      check_1d(x);
      return continuous(x[0]);
    case DgpFamily::ContinuousJump:
      check_1d(x);
      return continuous(x[0]) + (x[0] > 1.5 ? dgp.jump : 0.0);
    case DgpFamily::Fire2D: {
      const FireParams& f = dgp.fire;
      if (x.size() != 2) throw InvalidInput("Fire2D is evaluated at 2D pixel coordinates");
      if (!(x[0] >= 0.0 && x[0] <= static_cast<double>(f.width - 1) && x[1] >= 0.0 &&
            x[1] <= static_cast<double>(f.height - 1))) {
        throw InvalidInput("point outside the Fire2D pixel grid");
      }
      const double dx = x[0] - f.origin[0];
      const double dy = x[1] - f.origin[1];
      const double r = f.radius(dgp.frame);
      return dx * dx + dy * dy < r * r ? f.inside : f.outside;
    }
  }
  throw InvalidInput("unknown DGP family");
}

RegressionFunction dgp_function(const DgpSpec& dgp) {
  return [dgp](std::span<const double> x) { return dgp_eval(dgp, x); };
}

Matrix design_1d(std::size_t n) {
  if (n < 2) throw InvalidInput("1D design needs n >= 2");
  Matrix x(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = 3.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return x;
}

Matrix pixel_design(std::size_t width, std::size_t height) {
  Matrix x(width * height, 2);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      x(r * width + c, 0) = static_cast<double>(c);
      x(r * width + c, 1) = static_cast<double>(r);
    }
  }
  return x;
}

std::vector<double> truth_at(const DgpSpec& dgp, const Matrix& x) {
  std::vector<double> g(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) g[i] = dgp_eval(dgp, x.row(i));
  return g;
}

Dataset simulate_dataset(const DgpSpec& dgp) {
  if (!std::isfinite(dgp.sigma) || dgp.sigma < 0.0) throw InvalidInput("sigma must be >= 0");
  Dataset d;
  if (dgp.family == DgpFamily::Fire2D) {
    if (dgp.fire.width < 2 || dgp.fire.height < 2) throw InvalidInput("fire grid must be at least 2x2");
    if (dgp.frame < 1 || dgp.frame > dgp.fire.frames) throw InvalidInput("fire frame out of range");
    d.x = pixel_design(dgp.fire.width, dgp.fire.height);
  } else {
    d.x = design_1d(dgp.n);
  }
  d.y = truth_at(dgp, d.x);
  NormalStream noise(dgp.seed);
  for (double& v : d.y) v += noise.normal(dgp.sigma);
  return d;
}

std::vector<Dataset> simulate_fire_frames(const DgpSpec& dgp) {
  if (dgp.family != DgpFamily::Fire2D) throw InvalidInput("frames exist only for the fire2d DGP");
  std::vector<Dataset> frames;
  for (int j = 1; j <= dgp.fire.frames; ++j) {
    DgpSpec f = dgp;
    f.frame = j;
    f.seed = derive_seed(dgp.seed, {static_cast<std::uint64_t>(j)});
    frames.push_back(simulate_dataset(f));
  }
  return frames;
}

std::vector<std::uint8_t> fire_annulus(const DgpSpec& dgp, double width) {
  const FireParams& f = dgp.fire;
  const double r = f.radius(dgp.frame);
  std::vector<std::uint8_t> mask(f.width * f.height, 0);
  for (std::size_t row = 0; row < f.height; ++row) {
    for (std::size_t col = 0; col < f.width; ++col) {
      const double dx = static_cast<double>(col) - f.origin[0];
      const double dy = static_cast<double>(row) - f.origin[1];
      mask[row * f.width + col] = std::fabs(std::hypot(dx, dy) - r) <= width ? 1 : 0;
    }
  }
  return mask;
}

double mese(std::span<const double> truth, std::span<const double> estimates,
            std::span<const std::uint8_t> undefined) {
  if (truth.size() != estimates.size() || truth.size() != undefined.size()) {
    throw InvalidInput("MESE inputs differ in length");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (undefined[i]) continue;
    const double e = truth[i] - estimates[i];
    sum += e * e;
    ++count;
  }
  if (count == 0) throw InvalidInput("MESE needs at least one defined estimate");
  return sum / static_cast<double>(count);
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t n, double sigma, int replicate) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(n), std::bit_cast<std::uint64_t>(sigma),
                                 static_cast<std::uint64_t>(replicate)});
}

const McRow& McTable::at(double sigma, std::size_t n, EstimatorChoice e) const {
  for (const McRow& r : rows) {
    if (r.sigma == sigma && r.n == n && r.estimator == e) return r;
  }
  throw InvalidInput("no Monte Carlo row for the requested cell");
}

namespace {

struct CellTask {
  std::size_t n;
  double sigma;
  int replicate;
};

std::vector<double> replicate_meses(const McConfig& cfg, const CellTask& task) {
  DgpSpec dgp = cfg.dgp;
  dgp.n = task.n;
  dgp.sigma = task.sigma;
  dgp.seed = replicate_seed(cfg.base_seed, task.n, task.sigma, task.replicate);
  const Dataset data = simulate_dataset(dgp);
  const std::vector<double> truth = truth_at(dgp, data.x);

  std::vector<double> out(cfg.estimators.size(), std::numeric_limits<double>::quiet_NaN());
  try {
    const PipelineOutput fits =
        run_pipeline(data, data.x, cfg.pipeline, cfg.estimators, dgp_function(dgp));
    for (std::size_t e = 0; e < fits.fits.size(); ++e) {
      const PipelineFit& f = fits.fits[e];
      if (f.failure || f.result.all_undefined()) continue;
      out[e] = mese(truth, f.result.estimates, f.result.undefined);
    }
  } catch (const SelectionFailure&) {
    // Every estimator of this replicate counts as failed.
  }
  return out;
}

}  // namespace

McTable run_monte_carlo(const McConfig& cfg) {
  if (cfg.replicates < 1) throw InvalidInput("Monte Carlo needs at least one replicate");
  if (cfg.ns.empty() || cfg.sigmas.empty() || cfg.estimators.empty()) {
    throw InvalidInput("Monte Carlo grid must have sample sizes, sigmas and estimators");
  }
  if (cfg.dgp.family == DgpFamily::Fire2D) {
    throw InvalidInput("the Monte Carlo tables cover the 1D DGPs");
  }

  std::vector<CellTask> tasks;
  for (double sigma : cfg.sigmas) {
    for (std::size_t n : cfg.ns) {
      for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, sigma, r});
    }
  }
  std::vector<std::vector<double>> results(tasks.size());
  const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    results[static_cast<std::size_t>(t)] = replicate_meses(cfg, tasks[static_cast<std::size_t>(t)]);
  }

  McTable table;
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  for (std::size_t cell = 0; cell * reps < tasks.size(); ++cell) {
    const CellTask& first = tasks[cell * reps];
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      McRow row{first.sigma, first.n, cfg.estimators[e], 0.0, 0.0, 0};
      double sum = 0.0;
      std::size_t ok = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double v = results[cell * reps + r][e];
        if (cfg.keep_replicates) {
          table.replicates.push_back({first.sigma, first.n, cfg.estimators[e], static_cast<int>(r), v});
        }
        if (std::isnan(v)) {
          ++row.failures;
        } else {
          sum += v;
          ++ok;
        }
      }
      if (ok > 0) {
        row.mean_mese = sum / static_cast<double>(ok);
        double ss = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
          const double v = results[cell * reps + r][e];
          if (!std::isnan(v)) ss += (v - row.mean_mese) * (v - row.mean_mese);
        }
        row.sd_mese = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
      } else {
        row.mean_mese = std::numeric_limits<double>::quiet_NaN();
        row.sd_mese = std::numeric_limits<double>::quiet_NaN();
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

double log_log_slope(std::span<const std::size_t> ns, std::span<const double> mean_mese) {
  if (ns.size() != mean_mese.size() || ns.size() < 2) throw InvalidInput("slope needs matching points");
  const double m = static_cast<double>(ns.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(mean_mese[i] > 0.0)) throw InvalidInput("rate check hit a zero or undefined mean MESE");
    sx += std::log(static_cast<double>(ns[i]));
    sy += std::log(mean_mese[i]);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double dx = std::log(static_cast<double>(ns[i])) - mx;
    sxy += dx * (std::log(mean_mese[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

RateReport rate_check(const RateConfig& cfg) {
  if (cfg.ns.size() < 3) throw InvalidInput("rate check needs at least 3 sample sizes");
  std::size_t lo = cfg.ns.front();
  std::size_t hi = cfg.ns.front();
  for (std::size_t n : cfg.ns) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  if (static_cast<double>(hi) < 10.0 * static_cast<double>(lo)) {
    throw InvalidInput("rate check sample sizes must span at least one decade");
  }
  McConfig mc;
  mc.dgp = cfg.dgp;
  mc.ns = cfg.ns;
  mc.sigmas = {cfg.sigma};
  mc.replicates = cfg.replicates;
  mc.estimators = {cfg.estimator};
  mc.base_seed = cfg.base_seed;
  mc.pipeline = cfg.pipeline;
  const McTable table = run_monte_carlo(mc);

  RateReport report;
  report.ns = cfg.ns;
  for (std::size_t n : cfg.ns) report.mean_mese.push_back(table.at(cfg.sigma, n, cfg.estimator).mean_mese);
  report.slope = log_log_slope(report.ns, report.mean_mese);
  return report;
}

}  // namespace alc
