#include "slotfill/nn/kernels.hpp"

#include <omp.h>

namespace slotfill::nn {

namespace {

template <typename T>
void reset_like(const Parameters<T>& params, Parameters<T>& grad) {
  auto fit = [](const std::vector<T>& src, std::vector<T>& dst) { dst.assign(src.size(), T(0)); };
  fit(params.embeddings, grad.embeddings);
  fit(params.past_filters, grad.past_filters);
  fit(params.past_bias, grad.past_bias);
  fit(params.future_filters, grad.future_filters);
  fit(params.future_bias, grad.future_bias);
  fit(params.classifier, grad.classifier);
  fit(params.classifier_bias, grad.classifier_bias);
}

template <typename T>
void check_batch(const NetConfig& cfg, std::span<const EncodedSentence> data, std::span<const SampleRef> batch) {
  if (batch.empty()) throw ConfigError("empty batch");
  for (const auto& ref : batch) {
    if (ref.sentence >= data.size() || ref.position >= data[ref.sentence].size()) {
      throw ConfigError("sample reference out of range");
    }
    const auto& s = data[ref.sentence];
    if (s.classes.size() != s.size()) throw ConfigError("sentence has no gold classes");
    const int gold = s.classes[ref.position];
    if (gold < 0 || static_cast<std::size_t>(gold) >= cfg.num_labels) {
      throw ConfigError("gold label " + std::to_string(gold + 1) + " out of range 1.." +
                        std::to_string(cfg.num_labels));
    }
  }
}

}  // namespace

template <typename T>
double batch_gradient_serial(const Parameters<T>& params, const NetConfig& cfg,
                             std::span<const EncodedSentence> data, std::span<const SampleRef> batch,
                             Parameters<T>& grad) {
  reset_like(params, grad);
  const T scale = T(1) / static_cast<T>(batch.size());
  Trace<T> trace;
  SampleGradient<T> g = make_sample_gradient<T>(cfg);
  double loss = 0.0;
  for (const auto& ref : batch) {
    const auto& s = data[ref.sentence];
    const int gold = s.classes[ref.position];
    loss += forward(params, cfg, s, ref.position, gold, trace);
    backward(params, cfg, trace, gold, scale, g);
    accumulate(cfg, g, grad);
  }
  return loss;
}

template <typename T>
double batch_gradient_parallel(const Parameters<T>& params, const NetConfig& cfg,
                               std::span<const EncodedSentence> data, std::span<const SampleRef> batch,
                               Parameters<T>& grad, BatchWorkspace<T>& ws) {
  reset_like(params, grad);
  const T scale = T(1) / static_cast<T>(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  if (ws.grads.size() < batch.size()) {
    ws.traces.resize(batch.size());
    while (ws.grads.size() < batch.size()) ws.grads.push_back(make_sample_gradient<T>(cfg));
  }
  ws.losses.assign(batch.size(), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto b = static_cast<std::size_t>(i);
    const auto& s = data[batch[b].sentence];
    const int gold = s.classes[batch[b].position];
    ws.losses[b] = forward(params, cfg, s, batch[b].position, gold, ws.traces[b]);
    backward(params, cfg, ws.traces[b], gold, scale, ws.grads[b]);
  }

  // Each element sums its samples in batch order, matching the serial kernel.
  auto reduce = [&](std::vector<T> Parameters<T>::*member) {
    std::vector<T>& dst = grad.*member;
    const auto len = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < len; ++e) {
      T acc = dst[static_cast<std::size_t>(e)];
      for (std::size_t b = 0; b < batch.size(); ++b) acc += (ws.grads[b].dense.*member)[static_cast<std::size_t>(e)];
      dst[static_cast<std::size_t>(e)] = acc;
    }
  };
  reduce(&Parameters<T>::past_filters);
  reduce(&Parameters<T>::past_bias);
  reduce(&Parameters<T>::future_filters);
  reduce(&Parameters<T>::future_bias);
  reduce(&Parameters<T>::classifier);
  reduce(&Parameters<T>::classifier_bias);

  const std::size_t E = cfg.embed_dim;
  double loss = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& g = ws.grads[b];
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
      T* dst = grad.embeddings.data() + static_cast<std::size_t>(g.rows[r]) * E;
      const T* src = g.row_grads.data() + r * E;
      for (std::size_t e = 0; e < E; ++e) dst[e] += src[e];
    }
    loss += ws.losses[b];
  }
  return loss;
}

template <typename T>
LossAndGradients<T> loss_and_gradients(const Parameters<T>& params, const NetConfig& cfg,
                                       std::span<const EncodedSentence> data, std::span<const SampleRef> batch) {
  check_batch<T>(cfg, data, batch);
  LossAndGradients<T> out;
  out.loss = batch_gradient_serial(params, cfg, data, batch, out.gradients) / static_cast<double>(batch.size());
  return out;
}

template <typename T>
double mean_loss(const Parameters<T>& params, const NetConfig& cfg, std::span<const EncodedSentence> data,
                 std::span<const SampleRef> batch) {
  check_batch<T>(cfg, data, batch);
  Trace<T> trace;
  double loss = 0.0;
  for (const auto& ref : batch) {
    const auto& s = data[ref.sentence];
    loss += forward(params, cfg, s, ref.position, s.classes[ref.position], trace);
  }
  return loss / static_cast<double>(batch.size());
}

#define SLOTFILL_INSTANTIATE(T)                                                                          \
  template double batch_gradient_serial<T>(const Parameters<T>&, const NetConfig&,                      \
                                           std::span<const EncodedSentence>, std::span<const SampleRef>, \
                                           Parameters<T>&);                                              \
  template double batch_gradient_parallel<T>(const Parameters<T>&, const NetConfig&,                    \
                                             std::span<const EncodedSentence>,                           \
                                             std::span<const SampleRef>, Parameters<T>&,                 \
                                             BatchWorkspace<T>&);                                        \
  template LossAndGradients<T> loss_and_gradients<T>(const Parameters<T>&, const NetConfig&,            \
                                                     std::span<const EncodedSentence>,                   \
                                                     std::span<const SampleRef>);                        \
  template double mean_loss<T>(const Parameters<T>&, const NetConfig&, std::span<const EncodedSentence>, \
                               std::span<const SampleRef>);

SLOTFILL_INSTANTIATE(float)
SLOTFILL_INSTANTIATE(double)

#undef SLOTFILL_INSTANTIATE

}  // namespace slotfill::nn
