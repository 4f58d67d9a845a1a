#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "alc/pipeline.hpp"

namespace alc {

enum class Channel { R = 0, G = 1, B = 2 };

/// RGB image with one height x width matrix per channel. Values are reals,
/// nominally in [0, 255]; they are only clamped when written out.
struct ImageFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::array<Matrix, 3> channels;

  ImageFrame() = default;
  ImageFrame(std::size_t w, std::size_t h, double fill = 0.0);

  Matrix& operator[](Channel c) { return channels[static_cast<int>(c)]; }
  const Matrix& operator[](Channel c) const { return channels[static_cast<int>(c)]; }
};

/// Reads 8-bit PNG (gray, RGB or RGBA; alpha dropped) or binary PPM (P6, maxval 255).
/// The format is detected from the file signature. Throws IoError.
ImageFrame load_image(const std::filesystem::path& path);
/// Writes an 8-bit RGB PNG; values are rounded and clamped to [0, 255].
void save_png(const std::filesystem::path& path, const ImageFrame& frame);
void save_ppm(const std::filesystem::path& path, const ImageFrame& frame);

/// Pixel-grid regression data for one channel: regressors (column, row) in pixels.
Dataset channel_dataset(const ImageFrame& frame, Channel channel);

/// Default image bandwidth grid: 12 geometric steps from 0.75 px to
/// min(12, min(width, height) / 4) px in both directions.
BandwidthGrid image_grid(std::size_t width, std::size_t height);

struct ImageSmoothing {
  PipelineConfig pipeline;
  EstimatorChoice estimator = EstimatorChoice::ALC;
  bool fill_nearest = false;
};

struct ChannelSmoothing {
  Matrix smoothed;   // NaN where undefined
  Matrix residuals;  // original - smoothed; NaN where undefined
  std::vector<std::uint8_t> undefined;
  std::vector<double> lc_bandwidths;
  std::vector<double> domain_bandwidths;
  std::vector<double> pilot_bandwidths;
  double range_bandwidth = 0.0;
};

/// Smooths one channel with the pipeline (the pixel grid is the fixed design and
/// every pixel centre a target). An empty grid in the plan means image_grid().
ChannelSmoothing smooth_channel(const ImageFrame& frame, Channel channel, const ImageSmoothing& cfg);
/// Smooths one channel with a fully explicit estimator spec.
ChannelSmoothing smooth_channel(const ImageFrame& frame, Channel channel, const EstimatorSpec& spec,
                                bool fill_nearest = false);

struct ImageSmoothResult {
  ImageFrame smoothed;  // quantized to integers in [0, 255]
  ImageFrame residual;  // residual + 128, quantized
  std::array<std::optional<ChannelSmoothing>, 3> channels;
};

/// Smooths the selected channels independently; unselected channels are copied
/// through and get a flat 128 residual. Undefined pixels keep their input value.
ImageSmoothResult smooth_image(const ImageFrame& frame, const ImageSmoothing& cfg,
                               std::array<bool, 3> selected = {true, true, true});

/// Rounds and clamps to [0, 255].
double quantize(double v);

}  // namespace alc
