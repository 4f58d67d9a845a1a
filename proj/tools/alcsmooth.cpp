// alcsmooth: simulate, fit, Monte Carlo tables, image smoothing and rate checks
// for the anisotropic local constant estimator.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "alc/csv.hpp"
#include "alc/errors.hpp"
#include "alc/imaging.hpp"
#include "alc/pipeline.hpp"
#include "alc/simulation.hpp"

namespace fs = std::filesystem;
using namespace alc;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEstimation = 3;
constexpr int kExitIo = 4;

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string join_doubles(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(csv::format_double(x));
  return join(parts, ',');
}

// The sidecar record: one key=value line per option of the subcommand, readable
// back through --config, followed by comment lines with resolved quantities.
void write_record(const fs::path& path, const CLI::App* sub,
                  const std::map<std::string, std::string>& resolved,
                  const std::vector<std::string>& notes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# alcsmooth " << sub->get_name() << " " << ALC_VERSION << "\n";
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "version" || name == "config") continue;
    std::string value;
    if (auto it = resolved.find(name); it != resolved.end()) {
      value = it->second;
    } else if (opt->get_expected_min() == 0) {
      if (opt->count() == 0) continue;
      value = "true";
    } else if (opt->count() > 0) {
      value = join(opt->results(), ',');
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
    }
    out << name << '=' << value << '\n';
  }
  for (const auto& note : notes) out << "# " << note << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

// Expands `--config file` into flags placed before the command-line ones.
// Keys already given on the command line are skipped, so flags override the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::optional<std::string> file;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!file || rest.empty()) return rest;

  CLI::App* sub = nullptr;
  for (CLI::App* s : app.get_subcommands({})) {
    if (s->get_name() == rest.front()) sub = s;
  }
  if (!sub) throw CLI::ValidationError("--config", "needs a subcommand before the config file");

  std::ifstream in(*file);
  if (!in) throw IoError("cannot read config file " + *file);
  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", *file + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt) throw CLI::ValidationError("--config", *file + ": unknown key '" + key + "'");
    const bool given = std::any_of(rest.begin() + 1, rest.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") injected.push_back(flag);
    } else {
      injected.push_back(flag);
      injected.push_back(value);
    }
  }
  rest.insert(rest.begin() + 1, injected.begin(), injected.end());
  return rest;
}

void set_jobs(int jobs) {
  if (jobs < 0) throw InvalidInput("--jobs must be non-negative");
  if (jobs > 0) omp_set_num_threads(jobs);
}

// Bandwidth and estimator flags shared by fit, mc, smooth-image and rate.
struct EstimationFlags {
  std::string kernel = "uniform";
  std::string range_kernel;
  std::string bandwidth = "auto-aicc";
  std::string range_bandwidth = "auto";
  double range_scale = 1.0;
  double inflation = 1.0;
  std::optional<double> rate_rule;
  int iterations = 1;
  std::size_t grid_points = 25;
  double max_pilot_ratio = BandwidthPlan{}.max_pilot_ratio;

  void add(CLI::App* app) {
    app->add_option("--kernel", kernel, "Domain kernel")
        ->check(CLI::IsMember({"uniform", "gaussian", "epanechnikov"}));
    app->add_option("--range-kernel", range_kernel, "Range kernel (default: same as --kernel)")
        ->check(CLI::IsMember({"uniform", "gaussian", "epanechnikov"}));
    app->add_option("--bandwidth", bandwidth, "auto-aicc, auto-lscv or comma-separated values");
    app->add_option("--range-bandwidth", range_bandwidth, "auto, auto:<multiplier> or a value");
    app->add_option("--range-scale", range_scale, "Factor applied to the range bandwidth");
    app->add_option("--bandwidth-inflation", inflation, "Factor (>= 1) on the ALC domain bandwidths");
    app->add_option("--rate-rule", rate_rule, "Use h_j = c * n_j^(-1/(q+2)) with this c");
    app->add_option("--iterations", iterations, "ALC passes (pilot refits)");
    app->add_option("--grid-points", grid_points, "Points per dimension of the search grid");
    app->add_option("--max-pilot-ratio", max_pilot_ratio,
                    "Automatic ALC search stops at this multiple of the LC bandwidth");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    cfg.kernel = parse_kernel(kernel);
    if (!range_kernel.empty()) cfg.range_kernel = parse_kernel(range_kernel);
    cfg.iterations = iterations;
    BandwidthPlan& plan = cfg.plan;
    if (rate_rule) {
      plan.method = SelectorMethod::RateRule;
      plan.rate_constant = *rate_rule;
      if (!(*rate_rule > 0.0)) throw InvalidInput("--rate-rule must be positive");
    } else if (bandwidth == "auto-aicc") {
      plan.method = SelectorMethod::Aicc;
    } else if (bandwidth == "auto-lscv") {
      plan.method = SelectorMethod::Lscv;
    } else {
      plan.method = SelectorMethod::Fixed;
      std::stringstream ss(bandwidth);
      std::string item;
      while (std::getline(ss, item, ',')) plan.fixed.push_back(parse_number(item, "--bandwidth"));
      if (plan.fixed.empty()) throw InvalidInput("--bandwidth needs at least one value");
    }
    if (range_bandwidth == "auto") {
    } else if (range_bandwidth.rfind("auto:", 0) == 0) {
      plan.range.multiplier = parse_number(range_bandwidth.substr(5), "--range-bandwidth");
      if (!(plan.range.multiplier > 0.0)) throw InvalidInput("range multiplier must be positive");
    } else {
      plan.range.value = parse_number(range_bandwidth, "--range-bandwidth");
    }
    plan.range.scale = range_scale;
    plan.inflation = inflation;
    plan.grid_points = grid_points;
    plan.max_pilot_ratio = max_pilot_ratio;
    if (grid_points < 2) throw InvalidInput("--grid-points must be at least 2");
    if (!(max_pilot_ratio > 1.0)) throw InvalidInput("--max-pilot-ratio must exceed 1");
    return cfg;
  }

  static double parse_number(const std::string& text, const std::string& flag) {
    try {
      return csv::parse_double(CLI::detail::trim_copy(text));
    } catch (const IoError&) {
      throw InvalidInput(flag + ": not a number: '" + text + "'");
    }
  }
};

struct DgpFlags {
  std::string dgp = "piecewise";
  double jump = 3.0;

  void add(CLI::App* app, const std::string& option = "--dgp") {
    app->add_option(option, dgp, "piecewise, continuous, jump or fire2d")
        ->check(CLI::IsMember({"piecewise", "continuous", "jump", "fire2d"}));
    app->add_option("--jump", jump, "Jump size of the jump DGP");
  }

  DgpSpec resolve() const {
    DgpSpec spec;
    spec.family = parse_dgp(dgp);
    spec.jump = jump;
    return spec;
  }
};

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  fs::path p = path;
  p.replace_extension();
  return p.string() + suffix;
}

// ---- simulate ----

struct SimulateCmd {
  DgpFlags dgp;
  std::size_t n = 400;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  int frame = 35;
  int frames = 0;
  std::string out;

  void add(CLI::App* app) {
    dgp.add(app);
    app->add_option("--n", n, "Sample size (1D DGPs)");
    app->add_option("--sigma", sigma, "Noise SD (default 0.5; sqrt(20) for fire2d)");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--frame", frame, "fire2d frame to simulate");
    app->add_option("--frames", frames, "fire2d: write frames 1..N as separate files");
    app->add_option("--out", out, "Output CSV")->required();
  }

  int run(const CLI::App* app) {
    DgpSpec spec = dgp.resolve();
    const bool fire = spec.family == DgpFamily::Fire2D;
    spec.n = n;
    spec.sigma = sigma.value_or(fire ? kFireSigma : 0.5);
    spec.seed = seed;
    spec.frame = frame;
    if (frames < 0) throw InvalidInput("--frames must be positive");
    if (frames > 0 && !fire) throw InvalidInput("--frames applies to the fire2d DGP");

    std::vector<std::string> written;
    if (frames > 0) {
      spec.fire.frames = frames;
      const auto data = simulate_fire_frames(spec);
      const int width = static_cast<int>(std::to_string(frames).size());
      for (std::size_t j = 0; j < data.size(); ++j) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "_frame%0*zu.csv", width, j + 1);
        const fs::path file = with_suffix(out, tag);
        csv::write_dataset_file(file, data[j]);
        written.push_back(file.string());
      }
    } else {
      csv::write_dataset_file(out, simulate_dataset(spec));
      written.push_back(out);
    }
    write_record(with_suffix(out, ".config"), app, {{"sigma", csv::format_double(spec.sigma)}},
                 {"files " + std::to_string(written.size())});
    std::cerr << "wrote " << written.size() << " file(s)\n";
    return 0;
  }
};

// ---- fit ----

struct FitCmd {
  EstimationFlags est;
  std::string data;
  std::string targets;
  std::string out;
  std::string estimator = "alc";
  std::string truth;
  double jump = 3.0;
  std::string fill = "none";
  int jobs = 0;

  void add(CLI::App* app) {
    app->add_option("--data", data, "Dataset CSV (x_1..x_q,y)")->required();
    app->add_option("--targets", targets, "CSV of target points (default: the design points)");
    app->add_option("--out", out, "Output fit CSV")->required();
    app->add_option("--estimator", estimator, "lc, alc or alct")
        ->check(CLI::IsMember({"lc", "alc", "alct"}));
    app->add_option("--truth", truth, "True regression function for alct")
        ->check(CLI::IsMember({"piecewise", "continuous", "jump", "fire2d"}));
    app->add_option("--jump", jump, "Jump size when --truth jump");
    app->add_option("--fill", fill, "Undefined targets: none or nearest")
        ->check(CLI::IsMember({"none", "nearest"}));
    app->add_option("--jobs", jobs, "Worker threads (0 = all)");
    est.add(app);
  }

  int run(const CLI::App* app) {
    set_jobs(jobs);
    const PipelineConfig cfg = est.resolve();
    const Dataset d = csv::read_dataset_file(data);
    d.validate();
    const Matrix t = targets.empty() ? d.x : csv::read_points_file(targets);
    const EstimatorChoice which = parse_estimator(estimator);
    RegressionFunction g;
    if (!truth.empty()) {
      DgpSpec spec;
      spec.family = parse_dgp(truth);
      spec.jump = jump;
      g = dgp_function(spec);
    }
    if (which == EstimatorChoice::ALCT && !g) throw InvalidInput("--estimator alct needs --truth");

    const EstimatorChoice list[] = {which};
    PipelineOutput res = run_pipeline(d, t, cfg, list, g);
    PipelineFit& f = res.fits.front();
    if (f.failure) {
      std::cerr << "error: bandwidth selection failed: " << *f.failure << '\n';
      return kExitEstimation;
    }
    if (f.result.all_undefined()) {
      std::cerr << "warning: every target is undefined (no data inside any kernel window)\n";
    }
    if (fill == "nearest") fill_nearest(f.result);
    csv::write_fit_file(out, f.result);

    std::vector<std::string> notes{"lc_bandwidths " + join_doubles(res.lc_bandwidths),
                                   "domain_bandwidths " + join_doubles(f.spec.bandwidths.domain)};
    if (which != EstimatorChoice::LC) {
      notes.push_back("range_bandwidth " + csv::format_double(f.spec.bandwidths.range));
      if (!f.pilot_bandwidths.empty()) {
        notes.push_back("pilot_bandwidths " + join_doubles(f.pilot_bandwidths));
      }
    }
    notes.push_back("undefined " + std::to_string(f.result.undefined_count()));
    write_record(with_suffix(out, ".config"), app, {}, notes);
    for (const auto& n : notes) std::cerr << n << '\n';
    return 0;
  }
};

// ---- mc ----

template <class T>
std::vector<T> parse_list(const std::vector<std::string>& items, const char* flag) {
  std::vector<T> out;
  for (const auto& s : items) {
    const double v = EstimationFlags::parse_number(s, flag);
    if constexpr (std::is_integral_v<T>) {
      if (!(v >= 1.0) || v != static_cast<double>(static_cast<T>(v))) {
        throw InvalidInput(std::string(flag) + ": expected positive integers");
      }
    }
    out.push_back(static_cast<T>(v));
  }
  return out;
}

struct McCmd {
  EstimationFlags est;
  DgpFlags dgp;
  std::vector<std::string> ns{"400", "800", "1600"};
  std::vector<std::string> sigmas{"0.1", "0.5", "1", "2"};
  std::vector<std::string> estimators{"lc", "alc", "alct"};
  int replicates = 125;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string replicates_out;
  int jobs = 0;

  void add(CLI::App* app) {
    dgp.add(app);
    app->add_option("--ns", ns, "Sample sizes")->delimiter(',');
    app->add_option("--sigmas", sigmas, "Noise SDs")->delimiter(',');
    app->add_option("--estimators", estimators, "Estimators to tabulate")
        ->delimiter(',')
        ->check(CLI::IsMember({"lc", "alc", "alct"}));
    app->add_option("--replicates", replicates, "Replicates per cell");
    app->add_option("--seed", seed, "Base seed (required)")->required();
    app->add_option("--out", out, "Summary CSV; mean and SD tables are written next to it")
        ->required();
    app->add_option("--replicates-out", replicates_out, "Optional per-replicate CSV");
    app->add_option("--jobs", jobs, "Worker threads (0 = all)");
    est.add(app);
  }

  int run(const CLI::App* app) {
    set_jobs(jobs);
    McConfig cfg;
    cfg.dgp = dgp.resolve();
    cfg.ns = parse_list<std::size_t>(ns, "--ns");
    cfg.sigmas = parse_list<double>(sigmas, "--sigmas");
    for (double s : cfg.sigmas) {
      if (!(s >= 0.0)) throw InvalidInput("--sigmas must be non-negative");
    }
    cfg.estimators.clear();
    for (const auto& e : estimators) cfg.estimators.push_back(parse_estimator(e));
    cfg.replicates = replicates;
    cfg.base_seed = *seed;
    cfg.pipeline = est.resolve();
    cfg.keep_replicates = !replicates_out.empty();

    const McTable table = run_monte_carlo(cfg);

    write_file(out, [&](std::ostream& o) { csv::write_mc_table(o, table); });
    write_file(with_suffix(out, ".mean.csv"), [&](std::ostream& o) { csv::write_mc_wide(o, table, false); });
    write_file(with_suffix(out, ".sd.csv"), [&](std::ostream& o) { csv::write_mc_wide(o, table, true); });
    if (!replicates_out.empty()) {
      write_file(replicates_out, [&](std::ostream& o) { csv::write_mc_replicates(o, table); });
    }
    std::size_t failures = 0;
    for (const McRow& r : table.rows) failures += r.failures;
    write_record(with_suffix(out, ".config"), app, {},
                 {"failed fits " + std::to_string(failures)});
    csv::write_mc_text(std::cout, table, false);
    return 0;
  }

  template <class F>
  static void write_file(const fs::path& path, F&& body) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw IoError("cannot write " + path.string());
    body(o);
    if (!o) throw IoError("failed writing " + path.string());
  }
};

// ---- smooth-image ----

struct SmoothImageCmd {
  EstimationFlags est;
  std::string input;
  std::string out_prefix;
  std::string channels = "rgb";
  std::string estimator = "alc";
  std::string fill = "none";
  bool channel_csv = false;
  int jobs = 0;

  void add(CLI::App* app) {
    app->add_option("--input", input, "PNG or binary PPM image")->required();
    app->add_option("--out-prefix", out_prefix,
                    "Writes <prefix>.smoothed.png and <prefix>.residual.png (default: input stem)");
    app->add_option("--channels", channels, "Channels to smooth, any of r, g, b");
    app->add_option("--estimator", estimator, "lc or alc")->check(CLI::IsMember({"lc", "alc"}));
    app->add_option("--fill", fill, "Undefined pixels: none or nearest")
        ->check(CLI::IsMember({"none", "nearest"}));
    app->add_flag("--channel-csv", channel_csv,
                  "Also write <prefix>.<channel>.csv with smoothed values and residuals");
    app->add_option("--jobs", jobs, "Worker threads (0 = all)");
    est.add(app);
  }

  static void write_channel_csv(const fs::path& path, const ChannelSmoothing& ch) {
    McCmd::write_file(path, [&](std::ostream& o) {
      o << "x_1,x_2,smoothed,residual,undefined\n";
      for (std::size_t r = 0; r < ch.smoothed.rows(); ++r) {
        for (std::size_t c = 0; c < ch.smoothed.cols(); ++c) {
          const bool undef = ch.undefined[r * ch.smoothed.cols() + c] != 0;
          o << c << ',' << r << ',';
          if (!undef) o << csv::format_double(ch.smoothed(r, c)) << ',' << csv::format_double(ch.residuals(r, c));
          else o << ',';
          o << ',' << (undef ? 1 : 0) << '\n';
        }
      }
    });
  }

  int run(const CLI::App* app) {
    set_jobs(jobs);
    std::array<bool, 3> selected{false, false, false};
    if (channels.empty()) throw InvalidInput("--channels must name at least one channel");
    for (char c : channels) {
      switch (c) {
        case 'r': case 'R': selected[0] = true; break;
        case 'g': case 'G': selected[1] = true; break;
        case 'b': case 'B': selected[2] = true; break;
        case ',': break;
        default: throw InvalidInput(std::string("--channels: unknown channel '") + c + "'");
      }
    }
    ImageSmoothing cfg;
    cfg.pipeline = est.resolve();
    cfg.estimator = parse_estimator(estimator);
    cfg.fill_nearest = fill == "nearest";

    const ImageFrame frame = load_image(input);
    const ImageSmoothResult res = smooth_image(frame, cfg, selected);

    const fs::path prefix = out_prefix.empty() ? fs::path(input).replace_extension() : fs::path(out_prefix);
    save_png(prefix.string() + ".smoothed.png", res.smoothed);
    save_png(prefix.string() + ".residual.png", res.residual);

    std::vector<std::string> notes;
    const char names[] = {'r', 'g', 'b'};
    for (int c = 0; c < 3; ++c) {
      if (!res.channels[c]) continue;
      const ChannelSmoothing& ch = *res.channels[c];
      std::string line = std::string(1, names[c]) + " lc_bandwidths " + join_doubles(ch.lc_bandwidths) +
                         " domain_bandwidths " + join_doubles(ch.domain_bandwidths);
      if (cfg.estimator == EstimatorChoice::ALC) {
        line += " range_bandwidth " + csv::format_double(ch.range_bandwidth);
      }
      line += " undefined " +
              std::to_string(std::count(ch.undefined.begin(), ch.undefined.end(), std::uint8_t{1}));
      notes.push_back(line);
      if (channel_csv) write_channel_csv(prefix.string() + "." + names[c] + ".csv", ch);
    }
    write_record(prefix.string() + ".config", app, {}, notes);
    for (const auto& n : notes) std::cerr << n << '\n';
    return 0;
  }
};

// ---- rate ----

struct RateCmd {
  EstimationFlags est;
  DgpFlags dgp;
  std::string estimator = "alct";
  std::vector<std::string> ns{"400", "1600", "6400", "25600"};
  double sigma = 0.5;
  int replicates = 50;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 0;

  void add(CLI::App* app) {
    dgp.add(app);
    app->add_option("--estimator", estimator, "lc, alc or alct")
        ->check(CLI::IsMember({"lc", "alc", "alct"}));
    app->add_option("--ns", ns, "Sample sizes (at least three, spanning a decade)")->delimiter(',');
    app->add_option("--sigma", sigma, "Noise SD");
    app->add_option("--replicates", replicates, "Replicates per sample size");
    app->add_option("--seed", seed, "Base seed");
    app->add_option("--out", out, "Optional CSV of n,mean_mese");
    app->add_option("--jobs", jobs, "Worker threads (0 = all)");
    est.add(app);
    est.rate_rule = 1.0;
  }

  int run(const CLI::App* app) {
    set_jobs(jobs);
    RateConfig cfg;
    cfg.dgp = dgp.resolve();
    cfg.estimator = parse_estimator(estimator);
    cfg.ns = parse_list<std::size_t>(ns, "--ns");
    cfg.sigma = sigma;
    cfg.replicates = replicates;
    cfg.base_seed = seed;
    cfg.pipeline = est.resolve();
    const RateReport rep = rate_check(cfg);

    std::cout << "slope " << csv::format_double(rep.slope) << '\n';
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
      std::cout << "n " << rep.ns[i] << " mean_mese " << csv::format_double(rep.mean_mese[i]) << '\n';
    }
    if (!out.empty()) {
      McCmd::write_file(out, [&](std::ostream& o) {
        o << "n,mean_mese\n";
        for (std::size_t i = 0; i < rep.ns.size(); ++i) {
          o << rep.ns[i] << ',' << csv::format_double(rep.mean_mese[i]) << '\n';
        }
      });
      write_record(with_suffix(out, ".config"), app, {},
                   {"slope " + csv::format_double(rep.slope)});
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic local constant smoothing for change-point regression", "alcsmooth"};
  app.set_version_flag("--version", ALC_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SimulateCmd simulate;
  FitCmd fitc;
  McCmd mc;
  SmoothImageCmd smooth;
  RateCmd rate;
  struct Entry {
    CLI::App* app;
    std::function<int(const CLI::App*)> run;
  };
  std::vector<Entry> entries;
  auto add_sub = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->set_version_flag("--version", ALC_VERSION);
    sub->add_option("--config", "key=value file; command-line flags take precedence");
    cmd.add(sub);
    entries.push_back({sub, [&cmd](const CLI::App* a) { return cmd.run(a); }});
  };
  add_sub("simulate", "Simulate a dataset from one of the DGPs", simulate);
  add_sub("fit", "Fit LC, ALC or ALCT to a dataset", fitc);
  add_sub("mc", "Monte Carlo MESE tables", mc);
  add_sub("smooth-image", "Smooth the channels of an image", smooth);
  add_sub("rate", "Log-log slope of mean MESE against n", rate);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    for (const Entry& e : entries) {
      if (e.app->parsed()) return e.run(e.app);
    }
    return kExitUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SelectionFailure& e) {
    std::cerr << "error: bandwidth selection failed: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
