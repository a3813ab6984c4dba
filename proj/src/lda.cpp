#include "prism/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "prism/error.hpp"

namespace prism {

namespace {

constexpr double kScaleFloor = 1e-12;
constexpr double kEigenvalueCut = 1e-10;
constexpr int kModelVersion = 1;

using ordered_json = nlohmann::ordered_json;

Matrix select_columns(const Eigen::Ref<const Matrix>& m,
                      const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    out.col(j) = m.col(cols[static_cast<std::size_t>(j)]);
  }
  return out;
}

Vector select_entries(const Eigen::Ref<const Vector>& v,
                      const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (Index j = 0; j < out.size(); ++j) {
    out[j] = v[idx[static_cast<std::size_t>(j)]];
  }
  return out;
}

// Canonical eigenvector orientation: the largest-magnitude component
// (earliest on ties) is made positive.
void canonicalize_sign(Matrix& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < columns.rows(); ++i) {
      double a = std::abs(columns(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (columns(pivot, j) < 0.0) columns.col(j) = -columns.col(j);
  }
}

ordered_json vector_to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const ordered_json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

Matrix matrix_from_json(const ordered_json& rows) {
  const Index n = static_cast<Index>(rows.size());
  if (n == 0) return Matrix(0, 0);
  const Index m = static_cast<Index>(rows.front().size());
  Matrix out(n, m);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != m) {
      raise(errc::parse_error, "ragged matrix in model file");
    }
    Index j = 0;
    for (const auto& x : row) out(i, j++) = x.get<double>();
    ++i;
  }
  return out;
}

}  // namespace

const char* subset_name(FeatureSubset subset) {
  switch (subset) {
    case FeatureSubset::all: return "all";
    case FeatureSubset::magnitude: return "magnitude";
    case FeatureSubset::phase: return "phase";
  }
  return "all";
}

FeatureSubset subset_from_name(const std::string& name) {
  if (name == "all") return FeatureSubset::all;
  if (name == "magnitude") return FeatureSubset::magnitude;
  if (name == "phase") return FeatureSubset::phase;
  raise(errc::invalid_argument, "unknown feature subset '" + name + "'");
}

const char* normalization_name(Normalization normalization) {
  return normalization == Normalization::minmax ? "minmax" : "zscore";
}

Normalization normalization_from_name(const std::string& name) {
  if (name == "zscore") return Normalization::zscore;
  if (name == "minmax") return Normalization::minmax;
  raise(errc::invalid_argument, "unknown normalization '" + name + "'");
}

std::vector<Index> subset_indices(FeatureSubset subset, Index dim) {
  std::vector<Index> idx;
  if (subset == FeatureSubset::all) {
    idx.resize(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
  }
  if (dim % 6 != 0) {
    raise(errc::dimension_mismatch,
          "magnitude/phase subsets need a feature length divisible by 6");
  }
  const Index block = dim / 6;
  const Index first = subset == FeatureSubset::magnitude ? 0 : 1;
  for (Index b = first; b < 6; b += 2) {
    for (Index i = 0; i < block; ++i) idx.push_back(b * block + i);
  }
  return idx;
}

void LdaModel::rebuild_derived() {
  selected = subset_indices(subset, input_dim());
  const Index m = class_count();
  const Index ds = class_means.cols();
  discriminant_weights.resize(ds, m);
  discriminant_offsets.resize(m);
  auto lower = covariance_cholesky.triangularView<Eigen::Lower>();
  auto upper = covariance_cholesky.transpose().triangularView<Eigen::Upper>();
  for (Index k = 0; k < m; ++k) {
    Vector mu = class_means.row(k).transpose();
    Vector alpha = upper.solve(lower.solve(mu));  // Sigma^{-1} mu
    discriminant_weights.col(k) = alpha;
    discriminant_offsets[k] = -0.5 * mu.dot(alpha) + std::log(priors[k]);
  }
}

LdaModel fit(const Eigen::Ref<const Matrix>& features,
             const std::vector<std::string>& labels, const LdaConfig& config) {
  const Index n = features.rows();
  const Index d = features.cols();
  if (n != static_cast<Index>(labels.size())) {
    raise(errc::length_mismatch, "feature rows and labels differ in count");
  }
  if (n == 0 || d == 0) raise(errc::invalid_argument, "empty training data");
  if (config.lambda && *config.lambda < 0.0) {
    raise(errc::invalid_argument, "lambda must be >= 0");
  }

  LdaModel model;
  model.subset = config.subset;

  // Vocabulary in order of first appearance.
  std::map<std::string, Index> label_index;
  std::vector<Index> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const std::string& lab = labels[static_cast<std::size_t>(i)];
    auto [it, inserted] = label_index.try_emplace(lab, model.class_count());
    if (inserted) model.labels.push_back(lab);
    y[static_cast<std::size_t>(i)] = it->second;
  }
  const Index m = model.class_count();
  if (m < 2) raise(errc::degenerate_class, "need at least 2 distinct labels");

  VectorX<Index> counts = VectorX<Index>::Zero(m);
  for (Index i = 0; i < n; ++i) ++counts[y[static_cast<std::size_t>(i)]];
  for (Index k = 0; k < m; ++k) {
    if (counts[k] < 2) {
      raise(errc::degenerate_class,
            "class '" + model.labels[static_cast<std::size_t>(k)] +
                "' has fewer than 2 samples");
    }
  }

  // Normalization over the full input dimension, then subset selection.
  model.normalization = config.normalization;
  if (model.normalization == Normalization::zscore) {
    model.standardizer.mean = features.colwise().mean().transpose();
    Matrix centered = features.rowwise() - model.standardizer.mean.transpose();
    model.standardizer.scale =
        (centered.array().square().colwise().sum() / static_cast<double>(n))
            .sqrt()
            .matrix()
            .transpose();
  } else {
    model.standardizer.mean = features.colwise().minCoeff().transpose();
    model.standardizer.scale =
        (features.colwise().maxCoeff() - features.colwise().minCoeff())
            .transpose();
  }
  model.standardizer.scale =
      model.standardizer.scale.cwiseMax(kScaleFloor);
  Matrix z = (features.rowwise() - model.standardizer.mean.transpose())
                 .array()
                 .rowwise() /
             model.standardizer.scale.transpose().array();

  model.selected = subset_indices(model.subset, d);
  Matrix zs = select_columns(z, model.selected);
  const Index ds = zs.cols();

  model.class_means = Matrix::Zero(m, ds);
  for (Index i = 0; i < n; ++i) {
    model.class_means.row(y[static_cast<std::size_t>(i)]) += zs.row(i);
  }
  for (Index k = 0; k < m; ++k) {
    model.class_means.row(k) /= static_cast<double>(counts[k]);
  }
  model.priors.resize(m);
  for (Index k = 0; k < m; ++k) {
    model.priors[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
  }

  // Pooled within-class covariance.
  Matrix scatter = Matrix::Zero(ds, ds);
  {
    Matrix deviations = zs;
    for (Index i = 0; i < n; ++i) {
      deviations.row(i) -= model.class_means.row(y[static_cast<std::size_t>(i)]);
    }
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(deviations.transpose());
    scatter = scatter.selfadjointView<Eigen::Lower>();
    scatter /= static_cast<double>(n - m);
  }

  model.lambda = config.lambda
                     ? *config.lambda
                     : 1e-6 * scatter.trace() / static_cast<double>(ds);
  Matrix sigma = scatter + model.lambda * Matrix::Identity(ds, ds);

  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    raise(errc::singular_scatter,
          "within-class scatter is singular (lambda = " +
              std::to_string(model.lambda) + ")");
  }
  model.covariance_cholesky = llt.matrixL();

  // Between-class scatter of the class means.
  Vector grand_mean = Vector::Zero(ds);
  for (Index k = 0; k < m; ++k) {
    grand_mean += model.priors[k] * model.class_means.row(k).transpose();
  }
  Matrix between = Matrix::Zero(ds, ds);
  for (Index k = 0; k < m; ++k) {
    Vector dmu = model.class_means.row(k).transpose() - grand_mean;
    between.selfadjointView<Eigen::Lower>().rankUpdate(dmu, model.priors[k]);
  }
  between = between.selfadjointView<Eigen::Lower>();

  // Generalized eigenproblem via whitening: C = L^{-1} S_B L^{-T}.
  auto lower = model.covariance_cholesky.triangularView<Eigen::Lower>();
  Matrix half = lower.solve(between);
  Matrix whitened = lower.solve(half.transpose());
  whitened = 0.5 * (whitened + whitened.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened);
  if (eig.info() != Eigen::Success) {
    raise(errc::singular_scatter, "discriminant eigensolve failed");
  }

  const Index n_e = std::min<Index>(m - 1, ds);
  model.projection.resize(ds, n_e);
  model.eigenvalues.resize(n_e);
  auto upper = model.covariance_cholesky.transpose().triangularView<Eigen::Upper>();
  const double cut = kEigenvalueCut * std::max(0.0, eig.eigenvalues().maxCoeff());
  for (Index j = 0; j < n_e; ++j) {
    const Index src = ds - 1 - j;  // solver returns ascending order
    double value = eig.eigenvalues()[src];
    model.eigenvalues[j] = value < cut ? 0.0 : value;
    model.projection.col(j) = upper.solve(eig.eigenvectors().col(src));
  }
  canonicalize_sign(model.projection);

  if (d % 6 == 0) model.n_r = static_cast<int>(d / 6);
  model.rebuild_derived();
  return model;
}

namespace {

Vector standardized_selected(const LdaModel& model,
                             const Eigen::Ref<const Vector>& feature) {
  if (feature.size() != model.input_dim()) {
    raise(errc::dimension_mismatch,
          "feature has length " + std::to_string(feature.size()) +
              " but the model expects " + std::to_string(model.input_dim()));
  }
  return select_entries(model.standardizer.apply(feature), model.selected);
}

}  // namespace

Prediction predict(const LdaModel& model, const Eigen::Ref<const Vector>& feature) {
  Vector zs = standardized_selected(model, feature);
  const Index m = model.class_count();

  Vector scores = model.discriminant_weights.transpose() * zs +
                  model.discriminant_offsets;

  Index best = 0;
  for (Index k = 1; k < m; ++k) {
    if (scores[k] > scores[best]) best = k;  // ties keep the earliest label
  }

  Vector posterior = (scores.array() - scores[best]).exp();
  posterior /= posterior.sum();

  Prediction out;
  out.label_index = best;
  out.label = model.labels[static_cast<std::size_t>(best)];
  out.posterior = std::move(posterior);
  return out;
}

Vector transform(const LdaModel& model, const Eigen::Ref<const Vector>& feature) {
  return model.projection.transpose() * standardized_selected(model, feature);
}

void save_model(const LdaModel& model, const std::filesystem::path& path) {
  ordered_json doc;
  doc["format"] = "prism-lda-model";
  doc["version"] = kModelVersion;
  doc["n_r"] = model.n_r;
  doc["subset"] = subset_name(model.subset);
  doc["normalization"] = normalization_name(model.normalization);
  doc["lambda"] = model.lambda;
  doc["labels"] = model.labels;
  doc["priors"] = vector_to_json(model.priors);
  doc["standardizer"] = {{"mean", vector_to_json(model.standardizer.mean)},
                         {"scale", vector_to_json(model.standardizer.scale)}};
  doc["class_means"] = matrix_to_json(model.class_means);
  doc["covariance_cholesky"] = matrix_to_json(model.covariance_cholesky);
  doc["projection"] = matrix_to_json(model.projection);
  doc["eigenvalues"] = vector_to_json(model.eigenvalues);

  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot open for writing: " + path.string());
  out << doc.dump() << '\n';
  if (!out) raise(errc::io_error, "failed writing " + path.string());
}

LdaModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::file_not_found, path.string());

  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    raise(errc::parse_error, "model file: " + std::string(e.what()));
  }

  try {
    if (doc.at("format").get<std::string>() != "prism-lda-model") {
      raise(errc::parse_error, "not a model file: " + path.string());
    }
    if (doc.at("version").get<int>() != kModelVersion) {
      raise(errc::parse_error, "unsupported model version");
    }

    LdaModel model;
    model.n_r = doc.at("n_r").get<int>();
    model.subset = subset_from_name(doc.at("subset").get<std::string>());
    model.normalization =
        normalization_from_name(doc.at("normalization").get<std::string>());
    model.lambda = doc.at("lambda").get<double>();
    model.labels = doc.at("labels").get<std::vector<std::string>>();
    model.priors = vector_from_json(doc.at("priors"));
    model.standardizer.mean = vector_from_json(doc.at("standardizer").at("mean"));
    model.standardizer.scale = vector_from_json(doc.at("standardizer").at("scale"));
    model.class_means = matrix_from_json(doc.at("class_means"));
    model.covariance_cholesky = matrix_from_json(doc.at("covariance_cholesky"));
    model.projection = matrix_from_json(doc.at("projection"));
    model.eigenvalues = vector_from_json(doc.at("eigenvalues"));

    if (model.labels.size() < 2 ||
        model.class_means.rows() != model.class_count() ||
        model.priors.size() != model.class_count() ||
        model.covariance_cholesky.rows() != model.class_means.cols() ||
        model.covariance_cholesky.cols() != model.class_means.cols() ||
        model.projection.rows() != model.class_means.cols()) {
      raise(errc::parse_error, "inconsistent shapes in model file");
    }
    model.rebuild_derived();
    return model;
  } catch (const ordered_json::exception& e) {
    raise(errc::parse_error, "model file: " + std::string(e.what()));
  }
}

}  // namespace prism
