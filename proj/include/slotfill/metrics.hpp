#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slotfill/corpus.hpp"

namespace slotfill {

/// Token-level counts against the null label. A wrong non-O prediction on a
/// non-O token counts as both a false positive and a false negative.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion_counts(std::span<const int> gold, std::span<const int> pred, int o_index);

// Ratios with an empty denominator evaluate to 0.
double accuracy(const ConfusionCounts& c);
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f1(double precision, double recall);

struct Report {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tokens = 0;
  std::size_t exact_matches = 0;
  double token_accuracy = 0.0;  // fraction of tokens whose label matches exactly
};

Report make_report(const ConfusionCounts& counts, std::size_t tokens, std::size_t exact_matches);

/// Predicted 1-based labels for one sentence.
using Tagger = std::function<std::vector<int>(const Sentence&)>;

/// Micro-aggregated report of `tagger` over every token of `corpus`.
Report evaluate(const Corpus& corpus, const Tagger& tagger, int o_index);

/// `key=value` lines; ratios with four decimals plus `<key>_pct` with two.
std::string format_report_text(const Report& report);
/// Flat JSON object with the same keys as the text form.
std::string format_report_json(const Report& report);

}  // namespace slotfill
