#include "slotfill/nn/model.hpp"

#include <cmath>

#include "slotfill/error.hpp"
#include "slotfill/random.hpp"

namespace slotfill::nn {

Model init_model(const NetConfig& config, Vocabulary vocab, LabelInventory labels) {
  config.validate();
  if (config.num_labels != labels.size()) {
    throw ConfigError("config declares " + std::to_string(config.num_labels) + " labels but the inventory has " +
                      std::to_string(labels.size()));
  }
  Model model{config, std::move(vocab), std::move(labels), {}};
  model.params = Parameters<float>::zeros(config, model.vocab.size());
  Rng rng(config.seed);
  model.params.for_each_tensor([&](std::vector<float>& t) {
    for (float& v : t) v = static_cast<float>(rng.uniform(-kInitRange, kInitRange));
  });
  return model;
}

Prediction forward(const Model& model, const EncodedSentence& sentence, std::size_t position) {
  if (position >= sentence.size()) throw ConfigError("token position out of range");
  if (model.config.use_features != (sentence.features.size() == sentence.size() * kNumFeatures) ||
      (!model.config.use_features && !sentence.features.empty())) {
    throw ConfigError("feature vectors must be supplied iff the model uses them");
  }
  Trace<float> trace;
  forward(model.params, model.config, sentence, position, -1, trace);
  Prediction p;
  p.distribution = trace.probs;
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.distribution.size(); ++c)
    if (p.distribution[c] > p.distribution[best]) best = c;
  p.label = static_cast<int>(best) + 1;
  return p;
}

std::vector<Prediction> predict(const Model& model, const Sentence& sentence, const FeatureRegistry* registry) {
  Sentence unlabeled = sentence;
  // Gold labels are irrelevant here; keep them valid for encoding.
  for (auto& t : unlabeled.tokens) t.label = model.labels.o_index();
  const EncodedSentence enc = encode_sentence(model, unlabeled, registry);
  std::vector<Prediction> out;
  out.reserve(sentence.size());
  for (std::size_t i = 0; i < enc.size(); ++i) out.push_back(forward(model, enc, i));
  return out;
}

std::vector<int> predict_labels(const Model& model, const Sentence& sentence, const FeatureRegistry* registry) {
  std::vector<int> labels;
  for (const auto& p : predict(model, sentence, registry)) labels.push_back(p.label);
  return labels;
}

Report evaluate(const Model& model, const FeatureRegistry* registry, const Corpus& corpus) {
  std::vector<std::vector<int>> predicted(corpus.sentences.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.sentences.size());
  if (model.config.use_features && registry == nullptr) {
    throw ConfigError("model uses feature vectors but no feature registry was supplied");
  }
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    predicted[static_cast<std::size_t>(i)] = predict_labels(model, corpus.sentences[static_cast<std::size_t>(i)], registry);
  }
  std::size_t next = 0;
  return slotfill::evaluate(
      corpus, [&](const Sentence&) { return predicted[next++]; }, model.labels.o_index());
}

bool parameters_finite(const Parameters<float>& params) {
  bool ok = true;
  params.for_each_tensor([&](const std::vector<float>& t) {
    for (float v : t) ok = ok && std::isfinite(v);
  });
  return ok;
}

}  // namespace slotfill::nn
