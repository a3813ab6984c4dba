#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "prism/features_io.hpp"
#include "prism/lda.hpp"
#include "prism/metrics.hpp"
#include "prism/split.hpp"

namespace prism {

struct ProtocolConfig {
  LdaConfig lda;
  int n_splits = 1;
  double ratio = 0.8;
  Grouping grouping = Grouping::prompt_pairs;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  const std::vector<bool>* published_test = nullptr;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double p5 = 0.0;      // percentiles by linear interpolation
  double p95 = 0.0;
};

/// Aggregate of one resampled evaluation run.
struct ResamplingSummary {
  std::vector<std::string> vocabulary;
  std::vector<MetricsReport> per_split;
  MetricSummary accuracy;
  MetricSummary weighted_precision;
  MetricSummary weighted_recall;
  MetricSummary weighted_f1;
  /// Split whose (accuracy, weighted F1) deviates least, in summed squares,
  /// from the across-split means; ties go to the lowest index.
  int average_split = 0;
  /// Number of splits whose test membership repeats an earlier split's.
  int duplicate_split_count = 0;
};

MetricSummary summarize_metric(const std::vector<double>& values);

/// Runs the full protocol: per split, fit on train, predict test, score;
/// then aggregate. Fit/predict failures are rethrown with the split index
/// attached. Deterministic for fixed (data, config), whatever the worker
/// count.
ResamplingSummary run_protocol(const FeatureTable& table,
                               const ProtocolConfig& config);

ResamplingSummary run_protocol(const FeatureTable& table,
                               const std::vector<SplitSpec>& splits,
                               const ProtocolConfig& config);

/// Versioned report document for one or more protocol runs (one per feature
/// subset when the ablation is requested).
nlohmann::ordered_json report_to_json(const ResamplingSummary& summary,
                                      const ProtocolConfig& config);

void write_report(const nlohmann::ordered_json& report,
                  const std::filesystem::path& path);

}  // namespace prism
