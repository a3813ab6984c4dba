#pragma once

// Deterministic fixtures shared by the unit and acceptance suites.

#include <filesystem>
#include <string>
#include <vector>

#include "prism/features_io.hpp"
#include "prism/image.hpp"
#include "prism/rng.hpp"
#include "prism/types.hpp"

namespace prism::fixtures {

/// Labelled Gaussian point clouds with a train/test split.
struct CloudFixture {
  Matrix train;
  std::vector<std::string> train_labels;
  Matrix test;
  std::vector<std::string> test_labels;
};

/// Two isotropic unit-variance clouds in R^2, centres (0,0) and (10,10).
CloudFixture two_clouds(std::uint64_t seed, int train_per_class,
                        int test_per_class);

/// Six classes in R^dim: simplex means with the requested pairwise
/// separation (in units of the unit noise sigma), confined to an
/// `informative`-dimensional subspace spread by a fixed rotation.
CloudFixture six_class_clouds(std::uint64_t seed, int train_per_class,
                              int test_per_class, Index dim, Index informative,
                              double separation);

/// Synthetic attribution feature table shaped like real extractor output
/// (six blocks of n_r), with class signal of the chosen strengths deposited
/// in the magnitude and phase blocks and unit Gaussian noise everywhere.
/// Prompt ids cycle through 1..40 so prompt-pair splits apply.
FeatureTable synthetic_feature_table(std::uint64_t seed, int classes,
                                     int per_class, int n_r,
                                     double magnitude_separation,
                                     double phase_separation);

/// Image with a model-specific spectral fingerprint: sinusoidal gratings at
/// per-model frequencies over a noisy background.
RgbImage fingerprinted_image(SplitMix64& rng, int model, Index size);

/// Writes a corpus of fingerprinted PNGs plus its manifest; returns the
/// manifest path. Labels are model_0..model_{classes-1}; prompt ids cycle
/// through 1..40.
std::filesystem::path write_image_corpus(const std::filesystem::path& dir,
                                         std::uint64_t seed, int classes,
                                         int images_per_class, Index size);

/// Self-deleting scratch directory.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace prism::fixtures
