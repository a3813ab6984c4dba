#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "prism/manifest.hpp"

namespace prism::fixtures {

namespace {

Matrix gaussian_matrix(SplitMix64& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  }
  return m;
}

// Deterministic orthogonal matrix from the QR of a seeded Gaussian draw.
Matrix random_rotation(SplitMix64& rng, Index dim) {
  Matrix g = gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

void fill_cloud(SplitMix64& rng, const Matrix& means, int per_class,
                Matrix& points, std::vector<std::string>& labels) {
  const Index classes = means.rows();
  const Index dim = means.cols();
  points.resize(classes * per_class, dim);
  labels.clear();
  Index row = 0;
  for (Index c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i, ++row) {
      for (Index j = 0; j < dim; ++j) {
        points(row, j) = means(c, j) + rng.next_gaussian();
      }
      labels.push_back("class_" + std::to_string(c));
    }
  }
}

}  // namespace

CloudFixture two_clouds(std::uint64_t seed, int train_per_class,
                        int test_per_class) {
  Matrix means(2, 2);
  means << 0.0, 0.0, 10.0, 10.0;

  CloudFixture fixture;
  SplitMix64 rng(mix64(seed));
  fill_cloud(rng, means, train_per_class, fixture.train, fixture.train_labels);
  fill_cloud(rng, means, test_per_class, fixture.test, fixture.test_labels);
  return fixture;
}

CloudFixture six_class_clouds(std::uint64_t seed, int train_per_class,
                              int test_per_class, Index dim, Index informative,
                              double separation) {
  constexpr Index classes = 6;
  SplitMix64 rng(mix64(seed));

  // Simplex on the first six axes of the informative subspace has pairwise
  // distance alpha * sqrt(2); the rotation spreads it over all informative
  // coordinates without changing distances.
  const double alpha = separation / std::numbers::sqrt2;
  Matrix informative_means = Matrix::Zero(classes, informative);
  for (Index c = 0; c < classes; ++c) informative_means(c, c) = alpha;
  informative_means *= random_rotation(rng, informative).transpose();

  Matrix means = Matrix::Zero(classes, dim);
  means.leftCols(informative) = informative_means;

  CloudFixture fixture;
  fill_cloud(rng, means, train_per_class, fixture.train, fixture.train_labels);
  fill_cloud(rng, means, test_per_class, fixture.test, fixture.test_labels);
  return fixture;
}

FeatureTable synthetic_feature_table(std::uint64_t seed, int classes,
                                     int per_class, int n_r,
                                     double magnitude_separation,
                                     double phase_separation) {
  const Index dim = 6 * static_cast<Index>(n_r);
  SplitMix64 rng(mix64(seed));

  FeatureTable table;
  int item = 0;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i, ++item) {
      FeatureRow row;
      row.path = "synthetic/" + std::to_string(item) + ".png";
      row.label = "model_" + std::to_string(c);
      row.prompt_id = item % 40 + 1;
      row.values.resize(dim);
      for (Index j = 0; j < dim; ++j) row.values[j] = rng.next_gaussian();
      // Class signal: one coordinate per block, distinct per class.
      const Index coord = c % n_r;
      for (int block = 0; block < 6; block += 2) {
        row.values[block * n_r + coord] += magnitude_separation;
        row.values[(block + 1) * n_r + coord] += phase_separation;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

RgbImage fingerprinted_image(SplitMix64& rng, int model, Index size) {
  // Each model deposits energy into its own pair of radial frequencies.
  const double f1 = 0.08 + 0.055 * model;
  const double f2 = 0.31 + 0.045 * model;
  const double theta = 2.0 * std::numbers::pi * rng.next_double();
  const double base = 90.0 + 60.0 * rng.next_double();

  RgbImage image;
  for (ChannelMatrix* channel : {&image.red, &image.green, &image.blue}) {
    channel->resize(size, size);
    const double phase1 = theta + 2.0 * std::numbers::pi * rng.next_double();
    const double phase2 = 2.0 * std::numbers::pi * rng.next_double();
    for (Index y = 0; y < size; ++y) {
      for (Index x = 0; x < size; ++x) {
        double value =
            base +
            28.0 * std::sin(2.0 * std::numbers::pi * f1 * (x + 2.0 * y) + phase1) +
            22.0 * std::sin(2.0 * std::numbers::pi * f2 * (x - y) + phase2) +
            7.0 * rng.next_gaussian();
        (*channel)(y, x) = std::clamp(std::round(value), 0.0, 255.0);
      }
    }
  }
  return image;
}

std::filesystem::path write_image_corpus(const std::filesystem::path& dir,
                                         std::uint64_t seed, int classes,
                                         int images_per_class, Index size) {
  std::filesystem::create_directories(dir / "img");
  SplitMix64 rng(mix64(seed));
  std::vector<ManifestEntry> entries;
  int item = 0;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < images_per_class; ++i, ++item) {
      std::filesystem::path rel =
          std::filesystem::path("img") /
          ("m" + std::to_string(c) + "_" + std::to_string(i) + ".png");
      encode_png(fingerprinted_image(rng, c, size), dir / rel);
      ManifestEntry entry;
      entry.path = rel;  // relative; read_manifest resolves against dir
      entry.label = "model_" + std::to_string(c);
      entry.prompt_id = item % 40 + 1;
      entries.push_back(std::move(entry));
    }
  }
  std::filesystem::path manifest_path = dir / "manifest.csv";
  write_manifest(entries, manifest_path);
  return manifest_path;
}

TempDir::TempDir(const std::string& prefix) {
  SplitMix64 rng(mix64(static_cast<std::uint64_t>(
      std::chrono::steady_clock::now().time_since_epoch().count())));
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::filesystem::path candidate =
        std::filesystem::temp_directory_path() /
        (prefix + "_" + std::to_string(rng.next() & 0xFFFFFFFF));
    std::error_code ec;
    if (std::filesystem::create_directory(candidate, ec)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a scratch directory");
}

TempDir::~TempDir() {
  if (!path_.empty()) {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
}

}  // namespace prism::fixtures
