#pragma once

#include <filesystem>

#include "prism/types.hpp"

namespace prism {

/// One colour channel: rows = n_y, cols = n_x, samples in [0, 255].
using ChannelMatrix = Matrix;

struct RgbImage {
  ChannelMatrix red;
  ChannelMatrix green;
  ChannelMatrix blue;

  Index rows() const { return red.rows(); }
  Index cols() const { return red.cols(); }
};

/// Throws Error(invalid_argument) unless all three channels share a shape of
/// at least 2x2 and every sample is finite and within [0, 255].
void validate_image(const RgbImage& image);

/// Decodes PNG, JPEG or WebP (the latter only when built against libwebp).
/// Alpha is discarded, grayscale is replicated into three channels, and
/// 16-bit samples are rescaled to [0, 255] by dividing by 257 and rounding
/// half to even.
RgbImage decode_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Samples are rounded to the nearest integer and
/// clamped to [0, 255]; integral inputs round-trip exactly through
/// decode_image.
void encode_png(const RgbImage& image, const std::filesystem::path& path);

}  // namespace prism
