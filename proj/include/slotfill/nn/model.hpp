#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "slotfill/corpus.hpp"
#include "slotfill/feature_registry.hpp"
#include "slotfill/metrics.hpp"
#include "slotfill/nn/config.hpp"
#include "slotfill/nn/network.hpp"

namespace slotfill::nn {

/// Trained (or freshly initialized) tagger: parameters plus everything needed
/// to encode new input.
struct Model {
  NetConfig config;
  Vocabulary vocab;
  LabelInventory labels;
  Parameters<float> params;
};

/// Parameters drawn uniformly from [-kInitRange, kInitRange) in storage order.
/// `config.num_labels` must equal the inventory size.
Model init_model(const NetConfig& config, Vocabulary vocab, LabelInventory labels);

/// Ids (UNK for out-of-vocabulary words), features when the model uses them,
/// and gold classes. `registry` is required iff config.use_features.
EncodedSentence encode_sentence(const Model& model, const Sentence& sentence, const FeatureRegistry* registry);
std::vector<EncodedSentence> encode_corpus(const Model& model, const Corpus& corpus,
                                           const FeatureRegistry* registry);

struct Prediction {
  std::vector<float> distribution;  // num_labels probabilities
  int label = 0;                    // 1-based argmax, lowest index on ties
};

Prediction forward(const Model& model, const EncodedSentence& sentence, std::size_t position);

std::vector<Prediction> predict(const Model& model, const Sentence& sentence, const FeatureRegistry* registry);
std::vector<int> predict_labels(const Model& model, const Sentence& sentence, const FeatureRegistry* registry);

/// Tags every sentence (OpenMP over sentences) and aggregates the metrics.
Report evaluate(const Model& model, const FeatureRegistry* registry, const Corpus& corpus);

bool parameters_finite(const Parameters<float>& params);

struct TrainReport {
  std::vector<double> epoch_loss;  // mean per-token loss of each epoch
};

struct FitOptions {
  /// Called after every epoch (0-based); returning false stops training.
  std::function<bool(std::size_t epoch, double loss, const Model& model)> after_epoch;
  bool parallel = true;
};

/// Minibatch SGD with momentum over all tokens of `corpus`, reshuffled every
/// epoch from config.seed. Throws NumericError on a non-finite loss or parameter.
TrainReport fit(Model& model, const Corpus& corpus, const FeatureRegistry* registry, const FitOptions& options = {});

/// Model file: text header (`SLOTFILL-CNN v1`, key=value lines, vocabulary),
/// a `BINARY` line, then little-endian float32 parameters in storage order.
void write_model(const Model& model, std::ostream& out);
Model read_model(std::istream& in);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace slotfill::nn
