#include <cmath>
#include <string>

#include "slotfill/error.hpp"
#include "slotfill/nn/kernels.hpp"
#include "slotfill/nn/model.hpp"
#include "slotfill/random.hpp"

namespace slotfill::nn {

namespace {

// Separates the shuffling stream from the initialization stream.
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

void momentum_step(std::vector<float>& param, std::vector<float>& velocity, const std::vector<float>& grad,
                   float lr) {
  const float mu = static_cast<float>(kMomentum);
  for (std::size_t i = 0; i < param.size(); ++i) {
    velocity[i] = mu * velocity[i] - lr * grad[i];
    param[i] += velocity[i];
  }
}

}  // namespace

TrainReport fit(Model& model, const Corpus& corpus, const FeatureRegistry* registry, const FitOptions& options) {
  const NetConfig& cfg = model.config;
  cfg.validate();
  const std::vector<EncodedSentence> data = encode_corpus(model, corpus, registry);

  std::vector<SampleRef> samples;
  for (std::size_t s = 0; s < data.size(); ++s)
    for (std::size_t t = 0; t < data[s].size(); ++t)
      samples.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t)});
  if (samples.empty()) throw ConfigError("training corpus is empty");

  Rng rng(cfg.seed ^ kShuffleStream);
  Parameters<float> grad;
  Parameters<float> velocity = Parameters<float>::zeros(cfg, model.vocab.size());
  BatchWorkspace<float> workspace;
  const auto lr = static_cast<float>(cfg.learning_rate);

  TrainReport report;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<SampleRef>(samples));
    double epoch_loss = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t begin = 0; begin < samples.size(); begin += cfg.batch_size, ++batch_no) {
      const std::size_t end = std::min(samples.size(), begin + cfg.batch_size);
      const std::span<const SampleRef> batch(samples.data() + begin, end - begin);
      const double loss = options.parallel
                              ? batch_gradient_parallel(model.params, cfg, data, batch, grad, workspace)
                              : batch_gradient_serial(model.params, cfg, data, batch, grad);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                           std::to_string(batch_no + 1));
      }
      epoch_loss += loss;

      momentum_step(model.params.embeddings, velocity.embeddings, grad.embeddings, lr);
      momentum_step(model.params.past_filters, velocity.past_filters, grad.past_filters, lr);
      momentum_step(model.params.past_bias, velocity.past_bias, grad.past_bias, lr);
      momentum_step(model.params.future_filters, velocity.future_filters, grad.future_filters, lr);
      momentum_step(model.params.future_bias, velocity.future_bias, grad.future_bias, lr);
      momentum_step(model.params.classifier, velocity.classifier, grad.classifier, lr);
      momentum_step(model.params.classifier_bias, velocity.classifier_bias, grad.classifier_bias, lr);

      if (!parameters_finite(model.params)) {
        throw NumericError("non-finite parameter after epoch " + std::to_string(epoch + 1) + ", batch " +
                           std::to_string(batch_no + 1));
      }
    }
    report.epoch_loss.push_back(epoch_loss / static_cast<double>(samples.size()));
    if (options.after_epoch && !options.after_epoch(epoch, report.epoch_loss.back(), model)) break;
  }
  return report;
}

}  // namespace slotfill::nn
