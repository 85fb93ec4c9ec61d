#include "slotfill/error.hpp"
#include "slotfill/featurizer.hpp"
#include "slotfill/nn/model.hpp"

namespace slotfill::nn {

EncodedSentence encode_sentence(const Model& model, const Sentence& sentence, const FeatureRegistry* registry) {
  if (model.config.use_features && registry == nullptr) {
    throw ConfigError("model uses feature vectors but no feature registry was supplied");
  }
  EncodedSentence out;
  out.ids = model.vocab.encode(sentence);
  out.classes.reserve(sentence.size());
  for (const auto& t : sentence.tokens) {
    if (!model.labels.contains(t.label)) throw ConfigError("label index out of range: " + std::to_string(t.label));
    out.classes.push_back(t.label - 1);
  }
  if (model.config.use_features) {
    out.features.reserve(sentence.size() * kNumFeatures);
    for (const auto& v : featurize_sentence(*registry, sentence)) out.features.insert(out.features.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<EncodedSentence> encode_corpus(const Model& model, const Corpus& corpus,
                                           const FeatureRegistry* registry) {
  std::vector<EncodedSentence> out;
  out.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) out.push_back(encode_sentence(model, s, registry));
  return out;
}

}  // namespace slotfill::nn
