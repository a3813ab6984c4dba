#include "prism/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "prism/error.hpp"
#include "prism/parallel.hpp"

namespace prism {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> vocabulary_of(const std::vector<std::string>& labels) {
  std::vector<std::string> vocab;
  std::set<std::string> seen;
  for (const std::string& lab : labels) {
    if (seen.insert(lab).second) vocab.push_back(lab);
  }
  return vocab;
}

double percentile(std::vector<double> sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p / 100.0 * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = h - std::floor(h);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ordered_json metrics_to_json(const MetricsReport& m) {
  ordered_json o;
  o["accuracy"] = m.accuracy;
  o["weighted_precision"] = m.weighted_precision;
  o["weighted_recall"] = m.weighted_recall;
  o["weighted_f1"] = m.weighted_f1;
  return o;
}

ordered_json summary_to_json(const MetricSummary& s) {
  ordered_json o;
  o["mean"] = s.mean;
  o["stddev"] = s.stddev;
  o["p5"] = s.p5;
  o["p95"] = s.p95;
  return o;
}

}  // namespace

MetricSummary summarize_metric(const std::vector<double>& values) {
  MetricSummary s;
  const std::size_t n = values.size();
  if (n == 0) return s;

  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);

  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.p5 = percentile(sorted, 5.0);
  s.p95 = percentile(sorted, 95.0);
  return s;
}

ResamplingSummary run_protocol(const FeatureTable& table,
                               const std::vector<SplitSpec>& splits,
                               const ProtocolConfig& config) {
  if (table.rows.empty()) raise(errc::invalid_argument, "empty feature table");
  if (splits.empty()) raise(errc::invalid_argument, "no splits to evaluate");

  const Matrix features = table.matrix();
  const std::vector<std::string> labels = table.labels();

  for (const SplitSpec& split : splits) {
    if (split.train_indices.empty() || split.test_indices.empty()) {
      raise(errc::invalid_argument, "split with an empty side");
    }
    for (const auto* side : {&split.train_indices, &split.test_indices}) {
      for (Index idx : *side) {
        if (idx < 0 || idx >= features.rows()) {
          raise(errc::invalid_argument, "split index outside the feature table");
        }
      }
    }
  }

  ResamplingSummary summary;
  summary.vocabulary = vocabulary_of(labels);
  summary.per_split.resize(splits.size());

  parallel_for(splits.size(), config.workers, [&](std::size_t s) {
    const SplitSpec& split = splits[s];
    try {
      Matrix train(static_cast<Index>(split.train_indices.size()), features.cols());
      std::vector<std::string> train_labels;
      train_labels.reserve(split.train_indices.size());
      for (std::size_t i = 0; i < split.train_indices.size(); ++i) {
        train.row(static_cast<Index>(i)) = features.row(split.train_indices[i]);
        train_labels.push_back(labels[static_cast<std::size_t>(split.train_indices[i])]);
      }

      LdaModel model = fit(train, train_labels, config.lda);

      std::vector<std::string> truth, predicted;
      truth.reserve(split.test_indices.size());
      predicted.reserve(split.test_indices.size());
      for (Index idx : split.test_indices) {
        truth.push_back(labels[static_cast<std::size_t>(idx)]);
        predicted.push_back(predict(model, features.row(idx).transpose()).label);
      }
      summary.per_split[s] = compute_metrics(truth, predicted, summary.vocabulary);
    } catch (const Error& e) {
      throw Error(e.code(), "split " + std::to_string(s) + ": " + e.what());
    }
  });

  std::vector<double> acc, prec, rec, f1;
  for (const MetricsReport& m : summary.per_split) {
    acc.push_back(m.accuracy);
    prec.push_back(m.weighted_precision);
    rec.push_back(m.weighted_recall);
    f1.push_back(m.weighted_f1);
  }
  summary.accuracy = summarize_metric(acc);
  summary.weighted_precision = summarize_metric(prec);
  summary.weighted_recall = summarize_metric(rec);
  summary.weighted_f1 = summarize_metric(f1);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const double da = acc[s] - summary.accuracy.mean;
    const double df = f1[s] - summary.weighted_f1.mean;
    const double dev = da * da + df * df;
    if (dev < best) {
      best = dev;
      summary.average_split = static_cast<int>(s);
    }
  }

  std::set<std::vector<Index>> seen_tests;
  for (const SplitSpec& split : splits) {
    if (!seen_tests.insert(split.test_indices).second) {
      ++summary.duplicate_split_count;
    }
  }
  return summary;
}

ResamplingSummary run_protocol(const FeatureTable& table,
                               const ProtocolConfig& config) {
  SplitOptions options;
  options.n_splits = config.n_splits;
  options.ratio = config.ratio;
  options.grouping = config.grouping;
  options.seed = config.seed;
  options.published_test = config.published_test;
  return run_protocol(
      table, make_splits(table.prompt_ids(), table.labels(), options), config);
}

nlohmann::ordered_json report_to_json(const ResamplingSummary& summary,
                                      const ProtocolConfig& config) {
  ordered_json report;
  report["format"] = "prism-evaluation-report";
  report["version"] = 1;
  report["config"] = {
      {"subset", subset_name(config.lda.subset)},
      {"lambda", config.lda.lambda ? ordered_json(*config.lda.lambda)
                                   : ordered_json(nullptr)},
      {"n_splits", config.n_splits},
      {"ratio", config.ratio},
      {"grouping", grouping_name(config.grouping)},
      {"seed", config.seed},
  };
  report["vocabulary"] = summary.vocabulary;
  report["metrics"] = {
      {"accuracy", summary_to_json(summary.accuracy)},
      {"weighted_precision", summary_to_json(summary.weighted_precision)},
      {"weighted_recall", summary_to_json(summary.weighted_recall)},
      {"weighted_f1", summary_to_json(summary.weighted_f1)},
  };
  report["duplicate_split_combinations"] = summary.duplicate_split_count;

  ordered_json per_split = ordered_json::array();
  for (std::size_t s = 0; s < summary.per_split.size(); ++s) {
    ordered_json row = metrics_to_json(summary.per_split[s]);
    row["split"] = s;
    per_split.push_back(std::move(row));
  }
  report["per_split"] = std::move(per_split);

  const MetricsReport& avg = summary.per_split[static_cast<std::size_t>(summary.average_split)];
  ordered_json confusion = ordered_json::array();
  for (Index r = 0; r < avg.confusion.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < avg.confusion.cols(); ++c) row.push_back(avg.confusion(r, c));
    confusion.push_back(std::move(row));
  }
  report["average_split"] = {
      {"index", summary.average_split},
      {"metrics", metrics_to_json(avg)},
      {"confusion", std::move(confusion)},
  };
  return report;
}

void write_report(const nlohmann::ordered_json& report,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot open for writing: " + path.string());
  out << report.dump(2) << '\n';
  if (!out) raise(errc::io_error, "failed writing " + path.string());
}

}  // namespace prism
