#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prism/types.hpp"

namespace prism {

struct FeatureRow {
  std::string path;
  std::string label;
  std::optional<int> prompt_id;
  Vector values;
};

struct FeatureTable {
  std::vector<FeatureRow> rows;

  Index dim() const { return rows.empty() ? 0 : rows.front().values.size(); }
  Index size() const { return static_cast<Index>(rows.size()); }

  /// Stacks all rows into a samples-by-features matrix.
  Matrix matrix() const;
  std::vector<std::string> labels() const;
  std::vector<std::optional<int>> prompt_ids() const;
};

/// CSV with header `path,label,prompt_id,f_0,...,f_{d-1}`. Feature values are
/// written with 17 significant digits so doubles round-trip losslessly.
void write_features(const FeatureTable& table, const std::filesystem::path& path);

FeatureTable read_features(const std::filesystem::path& path);

}  // namespace prism
