#include "prism/radial.hpp"

#include <algorithm>
#include <cmath>

#include "prism/error.hpp"

namespace prism {

namespace {

constexpr double kResultantFloor = 1e-12;

}  // namespace

RadialBinning make_binning(Index n_y, Index n_x, int n_r) {
  if (n_r < 1) raise(errc::invalid_argument, "n_r must be >= 1");
  if (n_y < 2 || n_x < 2) {
    raise(errc::invalid_argument, "binning needs dimensions >= 2x2");
  }

  RadialBinning binning;
  binning.rows = n_y;
  binning.cols = n_x;
  binning.n_r = n_r;

  const Index center_row = n_y / 2;
  const Index center_col = n_x / 2;
  double max_radius =
      std::hypot(static_cast<double>(n_x - 1 - center_col),
                 static_cast<double>(n_y - 1 - center_row));
  if (max_radius == 0.0) {
    // 2x2 grids put the centre on the high corner; span the grid instead.
    max_radius = std::hypot(static_cast<double>(center_col),
                            static_cast<double>(center_row));
  }
  binning.max_radius = max_radius;

  binning.edges.resize(n_r + 1);
  for (int i = 0; i <= n_r; ++i) {
    binning.edges[i] =
        max_radius * static_cast<double>(i) / static_cast<double>(n_r);
  }

  binning.bin_of.resize(n_y, n_x);
  binning.bin_count = IntVector::Zero(n_r);
  const double* first = binning.edges.data();
  const double* last = first + n_r + 1;
  for (Index u = 0; u < n_x; ++u) {
    for (Index v = 0; v < n_y; ++v) {
      double r = std::hypot(static_cast<double>(u - center_col),
                            static_cast<double>(v - center_row));
      auto it = std::upper_bound(first, last, r);
      int bin = static_cast<int>(it - first) - 1;
      if (bin < 0) bin = 0;
      if (bin >= n_r) bin = n_r - 1;  // closed last bin, plus the even-grid rim
      binning.bin_of(v, u) = bin;
      ++binning.bin_count[bin];
    }
  }
  return binning;
}

RadialProfile radial_reduce(const CentralizedSpectrum& spectrum,
                            const RadialBinning& binning) {
  if (spectrum.rows() != binning.rows || spectrum.cols() != binning.cols) {
    raise(errc::dimension_mismatch,
          "spectrum is " + std::to_string(spectrum.rows()) + "x" +
              std::to_string(spectrum.cols()) + " but binning expects " +
              std::to_string(binning.rows) + "x" + std::to_string(binning.cols));
  }

  const int n_r = binning.n_r;
  Vector mag_sum = Vector::Zero(n_r);
  Vector cos_sum = Vector::Zero(n_r);
  Vector sin_sum = Vector::Zero(n_r);

  for (Index u = 0; u < binning.cols; ++u) {
    for (Index v = 0; v < binning.rows; ++v) {
      const int bin = binning.bin_of(v, u);
      mag_sum[bin] += spectrum.log_magnitude(v, u);
      const double phi = spectrum.phase(v, u);
      cos_sum[bin] += std::cos(phi);
      sin_sum[bin] += std::sin(phi);
    }
  }

  RadialProfile profile;
  profile.magnitude.resize(n_r);
  profile.phase.resize(n_r);
  for (int i = 0; i < n_r; ++i) {
    const int count = binning.bin_count[i];
    if (count == 0) {
      profile.magnitude[i] = 0.0;
      profile.phase[i] = 1.0;
      continue;
    }
    profile.magnitude[i] = mag_sum[i] / static_cast<double>(count);
    const double re = cos_sum[i] / static_cast<double>(count);
    const double im = sin_sum[i] / static_cast<double>(count);
    const double resultant = std::hypot(re, im);
    // cos(arg(z)) = Re(z)/|z|; near-zero resultants carry no direction.
    profile.phase[i] = resultant < kResultantFloor ? 1.0 : re / resultant;
  }
  return profile;
}

Vector extract_features(const RgbImage& image, const RadialBinning& binning) {
  validate_image(image);
  if (image.rows() != binning.rows || image.cols() != binning.cols) {
    raise(errc::dimension_mismatch, "image does not match binning dimensions");
  }

  const int n_r = binning.n_r;
  Vector features(6 * n_r);
  const ChannelMatrix* channels[3] = {&image.red, &image.green, &image.blue};
  for (int c = 0; c < 3; ++c) {
    RadialProfile profile = radial_reduce(channel_spectrum(*channels[c]), binning);
    features.segment(2 * c * n_r, n_r) = profile.magnitude;
    features.segment((2 * c + 1) * n_r, n_r) = profile.phase;
  }
  return features;
}

Vector extract_features(const RgbImage& image, int n_r) {
  validate_image(image);
  return extract_features(image, make_binning(image.rows(), image.cols(), n_r));
}

}  // namespace prism
