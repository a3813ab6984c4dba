#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prism/types.hpp"

namespace prism {

/// Which feature coordinates participate in the model. Feature vectors are
/// laid out as six blocks of n_r values (magnitude/phase per RGB channel),
/// so `magnitude` keeps blocks 0/2/4 and `phase` keeps blocks 1/3/5.
enum class FeatureSubset { all, magnitude, phase };

const char* subset_name(FeatureSubset subset);
FeatureSubset subset_from_name(const std::string& name);

/// Coordinate indices kept by a subset for vectors of length `dim`.
/// magnitude/phase require dim to be a multiple of 6.
std::vector<Index> subset_indices(FeatureSubset subset, Index dim);

/// How per-feature normalization statistics are taken from the training
/// data. zscore: (x - mean) / stddev; minmax: (x - min) / (max - min).
enum class Normalization { zscore, minmax };

const char* normalization_name(Normalization normalization);
Normalization normalization_from_name(const std::string& name);

/// Per-feature affine transform, fit on training data only.
struct Standardizer {
  Vector mean;
  Vector scale;  // floored at 1e-12

  Vector apply(const Eigen::Ref<const Vector>& x) const {
    return (x - mean).cwiseQuotient(scale);
  }
};

struct LdaConfig {
  /// Ridge added to the within-class scatter. Unset means the default
  /// 1e-6 * trace(S_W) / d; an explicit 0 disables regularization.
  std::optional<double> lambda;
  FeatureSubset subset = FeatureSubset::all;
  Normalization normalization = Normalization::zscore;
};

/// Fitted reducer + shared-covariance Gaussian classifier.
struct LdaModel {
  std::vector<std::string> labels;  // vocabulary, order fixed at fit time
  Standardizer standardizer;        // over the full input dimension
  Normalization normalization = Normalization::zscore;
  FeatureSubset subset = FeatureSubset::all;
  std::vector<Index> selected;      // subset coordinates, derived from subset
  Matrix class_means;               // M x d_s, standardized space
  Matrix covariance_cholesky;       // d_s x d_s lower factor L, Sigma = L*L^T
  Vector priors;                    // M entries summing to 1
  Matrix projection;                // d_s x n_e, Sigma-orthonormal columns
  Vector eigenvalues;               // n_e discriminant eigenvalues
  double lambda = 0.0;              // effective ridge used at fit time
  int n_r = 0;                      // bins per block; 0 when not applicable

  // Derived scoring coefficients, rebuilt on load.
  Matrix discriminant_weights;      // d_s x M, column m = Sigma^{-1} mu_m
  Vector discriminant_offsets;      // M

  Index input_dim() const { return standardizer.mean.size(); }
  Index class_count() const { return static_cast<Index>(labels.size()); }
  Index embedding_dim() const { return projection.cols(); }

  /// Recomputes selected/discriminant_* from the stored fields.
  void rebuild_derived();
};

LdaModel fit(const Eigen::Ref<const Matrix>& features,
             const std::vector<std::string>& labels,
             const LdaConfig& config = {});

struct Prediction {
  std::string label;
  Index label_index = 0;
  Vector posterior;  // softmax of the class discriminants, vocabulary order
};

/// Scores in the full standardized (subset-selected) space; ties go to the
/// earliest vocabulary label.
Prediction predict(const LdaModel& model, const Eigen::Ref<const Vector>& feature);

/// Projection into the (M-1)-dimensional discriminant embedding.
Vector transform(const LdaModel& model, const Eigen::Ref<const Vector>& feature);

/// Model file: versioned JSON document; save -> load -> save is
/// byte-identical.
void save_model(const LdaModel& model, const std::filesystem::path& path);
LdaModel load_model(const std::filesystem::path& path);

}  // namespace prism
