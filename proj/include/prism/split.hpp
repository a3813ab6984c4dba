#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prism/manifest.hpp"
#include "prism/types.hpp"

namespace prism {

enum class Grouping { prompt_pairs, random_stratified, published };

const char* grouping_name(Grouping grouping);
Grouping grouping_from_name(const std::string& name);

/// One train/test partition. Index lists are disjoint, cover the dataset,
/// and are sorted ascending.
struct SplitSpec {
  std::uint64_t seed = 0;  // stream seed this split was drawn from
  std::vector<Index> train_indices;
  std::vector<Index> test_indices;
  Grouping grouping = Grouping::prompt_pairs;
};

struct SplitOptions {
  int n_splits = 1;
  double ratio = 0.8;  // train share, in (0, 1)
  Grouping grouping = Grouping::prompt_pairs;
  std::uint64_t seed = 0;
  /// Required for Grouping::published: per-item test membership.
  const std::vector<bool>* published_test = nullptr;
};

/// Draws n_splits partitions. Under prompt_pairs, the short/long prompt
/// couple (p_i, p_{i+20}) is one unit: all images of a couple land entirely
/// in train or entirely in test, with (1-ratio)*20 couples per test side.
/// Each split's RNG stream derives from (seed, split index), so enlarging
/// n_splits never changes earlier splits.
std::vector<SplitSpec> make_splits(const std::vector<std::optional<int>>& prompt_ids,
                                   const std::vector<std::string>& labels,
                                   const SplitOptions& options);

/// Maps labels in fake_labels to "fake" and everything else to "real".
/// fake_labels must be a nonempty strict subset of the observed labels.
std::vector<std::string> binarize_labels(const std::vector<std::string>& labels,
                                         const std::set<std::string>& fake_labels);

/// Manifest-level variant; prompt ids are preserved.
std::vector<ManifestEntry> binarize(std::vector<ManifestEntry> entries,
                                    const std::set<std::string>& fake_labels);

}  // namespace prism
