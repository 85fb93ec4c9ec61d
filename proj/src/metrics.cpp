#include "slotfill/metrics.hpp"

#include <cstdio>

#include <json.hpp>

#include "slotfill/error.hpp"

namespace slotfill {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

ConfusionCounts confusion_counts(std::span<const int> gold, std::span<const int> pred, int o_index) {
  if (gold.size() != pred.size()) {
    throw ConfigError("gold and predicted sequences differ in length (" + std::to_string(gold.size()) +
                      " vs " + std::to_string(pred.size()) + ")");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool gold_o = gold[i] == o_index;
    const bool pred_o = pred[i] == o_index;
    if (gold_o) {
      pred_o ? ++c.tn : ++c.fp;
    } else if (pred_o) {
      ++c.fn;
    } else if (pred[i] == gold[i]) {
      ++c.tp;
    } else {
      ++c.fp;
      ++c.fn;
    }
  }
  return c;
}

double accuracy(const ConfusionCounts& c) { return ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn); }
double precision(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp); }
double recall(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); }

double f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

Report make_report(const ConfusionCounts& counts, std::size_t tokens, std::size_t exact_matches) {
  Report r;
  r.counts = counts;
  r.accuracy = accuracy(counts);
  r.precision = precision(counts);
  r.recall = recall(counts);
  r.f1 = f1(r.precision, r.recall);
  r.tokens = tokens;
  r.exact_matches = exact_matches;
  r.token_accuracy = ratio(exact_matches, tokens);
  return r;
}

Report evaluate(const Corpus& corpus, const Tagger& tagger, int o_index) {
  ConfusionCounts total;
  std::size_t tokens = 0, exact = 0;
  std::vector<int> gold;
  for (const auto& sentence : corpus.sentences) {
    gold.clear();
    for (const auto& t : sentence.tokens) gold.push_back(t.label);
    const std::vector<int> pred = tagger(sentence);
    total += confusion_counts(gold, pred, o_index);
    tokens += gold.size();
    for (std::size_t i = 0; i < gold.size(); ++i) exact += gold[i] == pred[i];
  }
  return make_report(total, tokens, exact);
}

std::string format_report_text(const Report& r) {
  std::string out;
  auto ratio_line = [&](const char* key, double v) {
    out += std::string(key) + '=' + fixed(v, 4) + '\n';
    out += std::string(key) + "_pct=" + fixed(100.0 * v, 2) + '\n';
  };
  ratio_line("accuracy", r.accuracy);
  ratio_line("precision", r.precision);
  ratio_line("recall", r.recall);
  ratio_line("f1", r.f1);
  ratio_line("token_accuracy", r.token_accuracy);
  out += "tp=" + std::to_string(r.counts.tp) + '\n';
  out += "tn=" + std::to_string(r.counts.tn) + '\n';
  out += "fp=" + std::to_string(r.counts.fp) + '\n';
  out += "fn=" + std::to_string(r.counts.fn) + '\n';
  out += "tokens=" + std::to_string(r.tokens) + '\n';
  return out;
}

std::string format_report_json(const Report& r) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, double v) {
    j[key] = std::stod(fixed(v, 4));
    j[std::string(key) + "_pct"] = std::stod(fixed(100.0 * v, 2));
  };
  put("accuracy", r.accuracy);
  put("precision", r.precision);
  put("recall", r.recall);
  put("f1", r.f1);
  put("token_accuracy", r.token_accuracy);
  j["tp"] = r.counts.tp;
  j["tn"] = r.counts.tn;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["tokens"] = r.tokens;
  return j.dump(2) + '\n';
}

}  // namespace slotfill
