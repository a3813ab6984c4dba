#pragma once

#include "prism/image.hpp"
#include "prism/spectrum.hpp"
#include "prism/types.hpp"

namespace prism {

/// Partition of a centralized spectrum's index grid into n_r annular bins of
/// equal radial width. Immutable; share one instance across all images of
/// the same dimensions.
struct RadialBinning {
  Index rows = 0;       // n_y of the spectra this binning applies to
  Index cols = 0;       // n_x
  int n_r = 0;
  double max_radius = 0.0;
  Vector edges;         // n_r + 1 evenly spaced values from 0 to max_radius
  IntMatrix bin_of;     // per-index bin id in [0, n_r)
  IntVector bin_count;  // population per bin; sums to rows*cols
};

/// Builds the binning for an n_y x n_x spectrum. Distances are measured from
/// the DC index (floor(n_y/2), floor(n_x/2)); max_radius is the distance to
/// the high-index corner (n_y-1, n_x-1). Bins are half-open, the last one is
/// closed, and the handful of indices beyond max_radius (the low-index rim
/// of even-sized grids) fall into the last bin so the partition is total.
RadialBinning make_binning(Index n_y, Index n_x, int n_r);

/// Radial profile of one channel: bin means of log-magnitude, and the cosine
/// of the circular mean of the phases.
struct RadialProfile {
  Vector magnitude;  // length n_r, entries >= 0
  Vector phase;      // length n_r, entries in [-1, 1]
};

RadialProfile radial_reduce(const CentralizedSpectrum& spectrum,
                            const RadialBinning& binning);

/// Full per-image descriptor: DFT, centralization, plane split and radial
/// reduction of every channel, concatenated as
/// [R.mag | R.phase | G.mag | G.phase | B.mag | B.phase] (length 6*n_r).
Vector extract_features(const RgbImage& image, int n_r);

/// Variant reusing a prebuilt binning (must match the image dimensions).
Vector extract_features(const RgbImage& image, const RadialBinning& binning);

}  // namespace prism
