#include "prism/metrics.hpp"

#include <map>

#include "prism/error.hpp"

namespace prism {

MetricsReport compute_metrics(const std::vector<Index>& truth,
                              const std::vector<Index>& predicted,
                              Index class_count) {
  if (truth.size() != predicted.size()) {
    raise(errc::length_mismatch, "label lists differ in length");
  }
  if (truth.empty()) raise(errc::length_mismatch, "label lists are empty");
  if (class_count < 1) raise(errc::invalid_argument, "class_count must be >= 1");

  MetricsReport report;
  report.confusion = IntMatrix::Zero(class_count, class_count);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Index t = truth[i];
    const Index p = predicted[i];
    if (t < 0 || t >= class_count || p < 0 || p >= class_count) {
      raise(errc::unknown_label, "label index outside the vocabulary");
    }
    ++report.confusion(t, p);
  }

  const double total = static_cast<double>(truth.size());
  report.support.resize(class_count);
  report.precision.resize(class_count);
  report.recall.resize(class_count);
  report.f1.resize(class_count);

  long correct = 0;
  for (Index c = 0; c < class_count; ++c) correct += report.confusion(c, c);
  report.accuracy = static_cast<double>(correct) / total;

  double w_precision = 0.0;
  double w_recall = 0.0;
  double w_f1 = 0.0;
  for (Index c = 0; c < class_count; ++c) {
    const int tp = report.confusion(c, c);
    const int row_sum = report.confusion.row(c).sum();
    const int col_sum = report.confusion.col(c).sum();
    report.support[c] = row_sum;

    const double p = col_sum > 0 ? static_cast<double>(tp) / col_sum : 0.0;
    const double r = row_sum > 0 ? static_cast<double>(tp) / row_sum : 0.0;
    const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    report.precision[c] = p;
    report.recall[c] = r;
    report.f1[c] = f;

    w_precision += row_sum * p;
    w_recall += row_sum * r;
    w_f1 += row_sum * f;
  }
  report.weighted_precision = w_precision / total;
  report.weighted_recall = w_recall / total;
  report.weighted_f1 = w_f1 / total;
  return report;
}

MetricsReport compute_metrics(const std::vector<std::string>& truth,
                              const std::vector<std::string>& predicted,
                              const std::vector<std::string>& vocabulary) {
  std::map<std::string, Index> index;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    index.emplace(vocabulary[i], static_cast<Index>(i));
  }
  auto encode = [&](const std::vector<std::string>& labels) {
    std::vector<Index> out;
    out.reserve(labels.size());
    for (const std::string& lab : labels) {
      auto it = index.find(lab);
      if (it == index.end()) {
        raise(errc::unknown_label, "label '" + lab + "' not in vocabulary");
      }
      out.push_back(it->second);
    }
    return out;
  };
  return compute_metrics(encode(truth), encode(predicted),
                         static_cast<Index>(vocabulary.size()));
}

}  // namespace prism
