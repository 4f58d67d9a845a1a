#include "alc/imaging.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "alc/errors.hpp"
#include "alc/simulation.hpp"

namespace alc {

ImageFrame::ImageFrame(std::size_t w, std::size_t h, double fill) : width(w), height(h) {
  for (auto& c : channels) c = Matrix(h, w, fill);
}

double quantize(double v) {
  if (std::isnan(v)) return 0.0;
  return std::clamp(std::round(v), 0.0, 255.0);
}

namespace {

ImageFrame from_interleaved(std::size_t w, std::size_t h, const unsigned char* px, std::size_t stride) {
  ImageFrame f(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const unsigned char* p = px + (r * w + c) * stride;
      for (int k = 0; k < 3; ++k) f.channels[k](r, c) = p[k];
    }
  }
  return f;
}

std::vector<unsigned char> to_interleaved(const ImageFrame& f) {
  std::vector<unsigned char> px(f.width * f.height * 3);
  for (std::size_t r = 0; r < f.height; ++r) {
    for (std::size_t c = 0; c < f.width; ++c) {
      for (int k = 0; k < 3; ++k) {
        px[(r * f.width + c) * 3 + k] = static_cast<unsigned char>(quantize(f.channels[k](r, c)));
      }
    }
  }
  return px;
}

ImageFrame load_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return from_interleaved(image.width, image.height, buffer.data(), 4);
}

// Next header token of a PPM, skipping whitespace and '#' comments.
std::string ppm_token(std::istream& in) {
  std::string tok;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

ImageFrame load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  if (ppm_token(in) != "P6") throw IoError(path.string() + ": only binary PPM (P6) is supported");
  std::size_t w = 0;
  std::size_t h = 0;
  int maxval = 0;
  try {
    w = std::stoul(ppm_token(in));
    h = std::stoul(ppm_token(in));
    maxval = std::stoi(ppm_token(in));
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PPM header");
  }
  if (w == 0 || h == 0) throw IoError(path.string() + ": empty PPM image");
  if (maxval != 255) throw IoError(path.string() + ": only 8-bit PPM (maxval 255) is supported");
  std::vector<unsigned char> px(w * h * 3);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (in.gcount() != static_cast<std::streamsize>(px.size())) {
    throw IoError(path.string() + ": truncated PPM pixel data");
  }
  return from_interleaved(w, h, px.data(), 3);
}

}  // namespace

ImageFrame load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), sizeof sig);
  const auto got = static_cast<std::size_t>(in.gcount());
  in.close();
  if (got == sizeof sig && png_sig_cmp(sig, 0, sizeof sig) == 0) return load_png(path);
  if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return load_ppm(path);
  throw IoError(path.string() + ": unsupported image format (expected PNG or binary PPM P6)");
}

void save_png(const std::filesystem::path& path, const ImageFrame& frame) {
  const auto px = to_interleaved(frame);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, px.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void save_ppm(const std::filesystem::path& path, const ImageFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
  const auto px = to_interleaved(frame);
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Dataset channel_dataset(const ImageFrame& frame, Channel channel) {
  Dataset d;
  d.x = pixel_design(frame.width, frame.height);
  const Matrix& m = frame[channel];
  d.y.assign(m.data().begin(), m.data().end());
  return d;
}

BandwidthGrid image_grid(std::size_t width, std::size_t height) {
  const double top = std::min(12.0, static_cast<double>(std::min(width, height)) / 4.0);
  const double lo = 0.75;
  const double hi = std::max(top, 1.0);
  const std::vector<double> los{lo, lo};
  const std::vector<double> his{hi, hi};
  return geometric_grid(los, his, 12);
}

namespace {

ChannelSmoothing from_fit(const ImageFrame& frame, Channel channel, FitResult fit, bool fill) {
  if (fill) fill_nearest(fit);
  ChannelSmoothing out;
  out.smoothed = Matrix(frame.height, frame.width, std::move(fit.estimates));
  out.undefined = std::move(fit.undefined);
  out.residuals = Matrix(frame.height, frame.width);
  const Matrix& in = frame[channel];
  for (std::size_t k = 0; k < in.data().size(); ++k) {
    out.residuals.data()[k] = in.data()[k] - out.smoothed.data()[k];
  }
  return out;
}

}  // namespace

ChannelSmoothing smooth_channel(const ImageFrame& frame, Channel channel, const ImageSmoothing& cfg) {
  if (cfg.estimator == EstimatorChoice::ALCT) {
    throw InvalidInput("ALCT needs a known regression function and cannot smooth images");
  }
  const Dataset data = channel_dataset(frame, channel);
  PipelineConfig pc = cfg.pipeline;
  if ((pc.plan.method == SelectorMethod::Aicc || pc.plan.method == SelectorMethod::Lscv) &&
      pc.plan.grid.size() == 0) {
    pc.plan.grid = image_grid(frame.width, frame.height);
  }
  const EstimatorChoice which[] = {cfg.estimator};
  PipelineOutput fitted = run_pipeline(data, data.x, pc, which);
  PipelineFit& f = fitted.fits.front();
  if (f.failure) throw SelectionFailure(*f.failure);

  ChannelSmoothing out = from_fit(frame, channel, std::move(f.result), cfg.fill_nearest);
  out.lc_bandwidths = fitted.lc_bandwidths;
  out.domain_bandwidths = f.spec.bandwidths.domain;
  out.pilot_bandwidths = f.pilot_bandwidths;
  out.range_bandwidth = f.spec.bandwidths.range;
  return out;
}

ChannelSmoothing smooth_channel(const ImageFrame& frame, Channel channel, const EstimatorSpec& spec,
                                bool fill) {
  const Dataset data = channel_dataset(frame, channel);
  ChannelSmoothing out = from_fit(frame, channel, fit(data, data.x, spec), fill);
  out.domain_bandwidths = spec.bandwidths.domain;
  if (spec.kind == EstimatorKind::ALC) out.range_bandwidth = spec.bandwidths.range;
  return out;
}

ImageSmoothResult smooth_image(const ImageFrame& frame, const ImageSmoothing& cfg,
                               std::array<bool, 3> selected) {
  ImageSmoothResult out;
  out.smoothed = frame;
  out.residual = ImageFrame(frame.width, frame.height, 128.0);
  for (int k = 0; k < 3; ++k) {
    Matrix& dst = out.smoothed.channels[k];
    if (!selected[k]) {
      for (double& v : dst.data()) v = quantize(v);
      continue;
    }
    ChannelSmoothing ch = smooth_channel(frame, static_cast<Channel>(k), cfg);
    Matrix& res = out.residual.channels[k];
    for (std::size_t p = 0; p < dst.data().size(); ++p) {
      if (ch.undefined[p]) {
        dst.data()[p] = quantize(frame.channels[k].data()[p]);
      } else {
        dst.data()[p] = quantize(ch.smoothed.data()[p]);
        res.data()[p] = quantize(ch.residuals.data()[p] + 128.0);
      }
    }
    out.channels[k] = std::move(ch);
  }
  return out;
}

}  // namespace alc
