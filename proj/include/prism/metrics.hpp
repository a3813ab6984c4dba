#pragma once

#include <string>
#include <vector>

#include "prism/types.hpp"

namespace prism {

/// Multi-class classification metrics. Weighted values are per-class scores
/// averaged with true-class supports as weights; support-weighted recall is
/// identically the accuracy.
struct MetricsReport {
  double accuracy = 0.0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  IntMatrix confusion;  // rows = true class, cols = predicted class
  Vector precision;     // per class; 0 when the class was never predicted
  Vector recall;        // per class; 0 when the class has no support
  Vector f1;
  IntVector support;    // true-class counts
};

/// Index-based variant; labels must already be encoded against a shared
/// vocabulary of size class_count.
MetricsReport compute_metrics(const std::vector<Index>& truth,
                              const std::vector<Index>& predicted,
                              Index class_count);

MetricsReport compute_metrics(const std::vector<std::string>& truth,
                              const std::vector<std::string>& predicted,
                              const std::vector<std::string>& vocabulary);

}  // namespace prism
