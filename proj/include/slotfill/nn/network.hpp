#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "slotfill/error.hpp"
#include "slotfill/feature_registry.hpp"
#include "slotfill/nn/config.hpp"

namespace slotfill::nn {

/// All trainable tensors, row-major. Storage order is also the model-file order:
///   embeddings       vocab_size x embed_dim
///   past_filters     num_filters x filter_width x input_depth
///   past_bias        num_filters
///   future_filters   (bidir only) same shape as past_filters
///   future_bias      (bidir only) num_filters
///   classifier       (directions * num_filters) x num_labels
///   classifier_bias  num_labels
/// Filter element [k][o][c] multiplies channel c of window slot p + o at
/// convolution position p; channels are the embedding followed by the features.
template <typename T>
struct Parameters {
  std::vector<T> embeddings;
  std::vector<T> past_filters;
  std::vector<T> past_bias;
  std::vector<T> future_filters;
  std::vector<T> future_bias;
  std::vector<T> classifier;
  std::vector<T> classifier_bias;

  static Parameters zeros(const NetConfig& cfg, std::size_t vocab_size) {
    Parameters p;
    p.embeddings.assign(vocab_size * cfg.embed_dim, T(0));
    p.past_filters.assign(cfg.num_filters * cfg.filter_size(), T(0));
    p.past_bias.assign(cfg.num_filters, T(0));
    if (cfg.directions() == 2) {
      p.future_filters.assign(cfg.num_filters * cfg.filter_size(), T(0));
      p.future_bias.assign(cfg.num_filters, T(0));
    }
    p.classifier.assign(cfg.pooled_size() * cfg.num_labels, T(0));
    p.classifier_bias.assign(cfg.num_labels, T(0));
    return p;
  }

  /// Visits tensors in storage order; empty tensors are skipped.
  template <typename F>
  void for_each_tensor(F&& f) {
    for (auto* t : {&embeddings, &past_filters, &past_bias, &future_filters, &future_bias, &classifier,
                    &classifier_bias})
      if (!t->empty()) f(*t);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    for (auto* t : {&embeddings, &past_filters, &past_bias, &future_filters, &future_bias, &classifier,
                    &classifier_bias})
      if (!t->empty()) f(*t);
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each_tensor([&](const std::vector<T>& t) { n += t.size(); });
    return n;
  }

  std::vector<T>& filters(std::size_t dir) { return dir == 0 ? past_filters : future_filters; }
  const std::vector<T>& filters(std::size_t dir) const { return dir == 0 ? past_filters : future_filters; }
  std::vector<T>& bias(std::size_t dir) { return dir == 0 ? past_bias : future_bias; }
  const std::vector<T>& bias(std::size_t dir) const { return dir == 0 ? past_bias : future_bias; }

  template <typename U>
  Parameters<U> cast() const {
    Parameters<U> out;
    auto conv = [](const std::vector<T>& src) { return std::vector<U>(src.begin(), src.end()); };
    out.embeddings = conv(embeddings);
    out.past_filters = conv(past_filters);
    out.past_bias = conv(past_bias);
    out.future_filters = conv(future_filters);
    out.future_bias = conv(future_bias);
    out.classifier = conv(classifier);
    out.classifier_bias = conv(classifier_bias);
    return out;
  }

  bool operator==(const Parameters&) const = default;
};

/// A sentence as network input: vocabulary ids, optional per-token feature
/// vectors (kNumFeatures values per token) and 0-based gold classes.
struct EncodedSentence {
  std::vector<int> ids;
  std::vector<double> features;
  std::vector<int> classes;

  std::size_t size() const noexcept { return ids.size(); }
};

/// One training or inference instance: token `position` of `sentence`.
struct SampleRef {
  std::uint32_t sentence = 0;
  std::uint32_t position = 0;
};

/// Forward-pass state kept for backpropagation.
template <typename T>
struct Trace {
  std::vector<int> ids;            // directions x context_length
  std::vector<T> input;            // directions x context_length x input_depth
  std::vector<T> preactivation;    // directions x conv_positions x num_filters
  std::vector<std::uint32_t> best; // directions x num_filters, argmax position
  std::vector<T> pooled;           // directions x num_filters
  std::vector<T> logits;           // num_labels
  std::vector<T> probs;            // num_labels
};

/// Per-sample gradient. Embedding gradients are kept as one row per window slot.
template <typename T>
struct SampleGradient {
  Parameters<T> dense;          // embeddings left empty
  std::vector<int> rows;        // directions x context_length vocabulary ids
  std::vector<T> row_grads;     // rows.size() x embed_dim
  std::vector<T> input_grad;    // scratch, context_length x input_depth
  std::vector<T> pooled_grad;   // scratch
  std::vector<T> logit_grad;    // scratch
};

namespace detail {

/// Dot product with a fixed evaluation order (eight interleaved partial sums).
template <typename T>
inline T dot(const T* a, const T* b, std::size_t n) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t j = 0; j < 8; ++j) acc[j] += a[i + j] * b[i + j];
  T tail = 0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

template <typename T>
inline void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
inline void scale_into(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i];
}

}  // namespace detail

/// Fills the window slots of direction `dir` (0 = past, 1 = future).
template <typename T>
void gather_window(const Parameters<T>& params, const NetConfig& cfg, const EncodedSentence& s,
                   std::size_t position, std::size_t dir, int* ids, T* input) {
  const std::size_t L = cfg.context_length, E = cfg.embed_dim, D = cfg.input_depth();
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  const auto pos = static_cast<std::ptrdiff_t>(position);
  const std::ptrdiff_t start = dir == 0 ? pos - static_cast<std::ptrdiff_t>(L) + 1 : pos;
  const bool with_features = cfg.feature_dim > 0;
  for (std::size_t i = 0; i < L; ++i) {
    const std::ptrdiff_t at = start + static_cast<std::ptrdiff_t>(i);
    const bool inside = at >= 0 && at < n;
    const int id = inside ? s.ids[static_cast<std::size_t>(at)] : 0;
    ids[i] = id;
    T* column = input + i * D;
    const T* row = params.embeddings.data() + static_cast<std::size_t>(id) * E;
    std::copy(row, row + E, column);
    if (with_features) {
      if (inside) {
        const double* f = s.features.data() + static_cast<std::size_t>(at) * kNumFeatures;
        for (std::size_t j = 0; j < kNumFeatures; ++j) column[E + j] = static_cast<T>(f[j]);
      } else {
        std::fill(column + E, column + D, T(0));
      }
    }
  }
}

/// Runs the network on one token. Returns the negative log-likelihood of
/// `gold` (0-based), or 0 when gold < 0.
template <typename T>
double forward(const Parameters<T>& params, const NetConfig& cfg, const EncodedSentence& s,
               std::size_t position, int gold, Trace<T>& tr) {
  const std::size_t L = cfg.context_length, D = cfg.input_depth(), K = cfg.num_filters;
  const std::size_t P = cfg.conv_positions(), W = cfg.filter_width, C = cfg.num_labels;
  const std::size_t dirs = cfg.directions(), span = W * D;

  tr.ids.resize(dirs * L);
  tr.input.resize(dirs * L * D);
  tr.preactivation.resize(dirs * P * K);
  tr.best.resize(dirs * K);
  tr.pooled.resize(dirs * K);
  tr.logits.resize(C);
  tr.probs.resize(C);

  for (std::size_t d = 0; d < dirs; ++d) {
    const T* x = tr.input.data() + d * L * D;
    gather_window(params, cfg, s, position, d, tr.ids.data() + d * L, tr.input.data() + d * L * D);
    const auto& filt = params.filters(d);
    const auto& bias = params.bias(d);
    T* z = tr.preactivation.data() + d * P * K;
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t k = 0; k < K; ++k) {
        z[p * K + k] = bias[k] + detail::dot(filt.data() + k * span, x + p * D, span);
      }
    }
    // relu then max over positions; relu is monotone so pool the raw values.
    for (std::size_t k = 0; k < K; ++k) {
      std::uint32_t best = 0;
      T top = z[k];
      for (std::size_t p = 1; p < P; ++p) {
        if (z[p * K + k] > top) {
          top = z[p * K + k];
          best = static_cast<std::uint32_t>(p);
        }
      }
      tr.best[d * K + k] = best;
      tr.pooled[d * K + k] = top > T(0) ? top : T(0);
    }
  }

  const std::size_t H = dirs * K;
  for (std::size_t c = 0; c < C; ++c) tr.logits[c] = params.classifier_bias[c];
  for (std::size_t i = 0; i < H; ++i) {
    const T h = tr.pooled[i];
    if (h != T(0)) detail::axpy(h, params.classifier.data() + i * C, tr.logits.data(), C);
  }

  double top = static_cast<double>(tr.logits[0]);
  for (std::size_t c = 1; c < C; ++c) top = std::max(top, static_cast<double>(tr.logits[c]));
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) total += std::exp(static_cast<double>(tr.logits[c]) - top);
  for (std::size_t c = 0; c < C; ++c) {
    tr.probs[c] = static_cast<T>(std::exp(static_cast<double>(tr.logits[c]) - top) / total);
  }
  if (gold < 0) return 0.0;
  return std::log(total) - (static_cast<double>(tr.logits[static_cast<std::size_t>(gold)]) - top);
}

/// Gradient of `scale * loss` for the traced sample. `g.dense` must already
/// have the shape of `params` minus the embeddings; it is overwritten.
template <typename T>
void backward(const Parameters<T>& params, const NetConfig& cfg, const Trace<T>& tr, int gold, T scale,
              SampleGradient<T>& g) {
  const std::size_t L = cfg.context_length, D = cfg.input_depth(), E = cfg.embed_dim;
  const std::size_t K = cfg.num_filters, C = cfg.num_labels;
  const std::size_t dirs = cfg.directions(), span = cfg.filter_width * D, H = dirs * K;

  g.logit_grad.resize(C);
  for (std::size_t c = 0; c < C; ++c) g.logit_grad[c] = scale * tr.probs[c];
  g.logit_grad[static_cast<std::size_t>(gold)] -= scale;

  for (std::size_t i = 0; i < H; ++i) {
    detail::scale_into(tr.pooled[i], g.logit_grad.data(), g.dense.classifier.data() + i * C, C);
  }
  std::copy(g.logit_grad.begin(), g.logit_grad.end(), g.dense.classifier_bias.begin());

  g.pooled_grad.resize(H);
  for (std::size_t i = 0; i < H; ++i) {
    g.pooled_grad[i] = detail::dot(params.classifier.data() + i * C, g.logit_grad.data(), C);
  }

  g.rows.assign(tr.ids.begin(), tr.ids.end());
  g.row_grads.resize(dirs * L * E);
  g.input_grad.resize(L * D);
  for (std::size_t d = 0; d < dirs; ++d) {
    const T* x = tr.input.data() + d * L * D;
    const auto& filt = params.filters(d);
    auto& dfilt = g.dense.filters(d);
    auto& dbias = g.dense.bias(d);
    std::fill(g.input_grad.begin(), g.input_grad.end(), T(0));
    for (std::size_t k = 0; k < K; ++k) {
      T* df = dfilt.data() + k * span;
      if (tr.pooled[d * K + k] > T(0)) {
        const T dz = g.pooled_grad[d * K + k];
        const std::size_t p = tr.best[d * K + k];
        detail::scale_into(dz, x + p * D, df, span);
        dbias[k] = dz;
        detail::axpy(dz, filt.data() + k * span, g.input_grad.data() + p * D, span);
      } else {
        std::fill(df, df + span, T(0));
        dbias[k] = T(0);
      }
    }
    for (std::size_t i = 0; i < L; ++i) {
      std::copy(g.input_grad.data() + i * D, g.input_grad.data() + i * D + E,
                g.row_grads.data() + (d * L + i) * E);
    }
  }
}

/// Allocates the dense part of a per-sample gradient.
template <typename T>
SampleGradient<T> make_sample_gradient(const NetConfig& cfg) {
  SampleGradient<T> g;
  g.dense = Parameters<T>::zeros(cfg, 0);
  return g;
}

/// Adds a per-sample gradient into a full gradient of `params` shape.
template <typename T>
void accumulate(const NetConfig& cfg, const SampleGradient<T>& g, Parameters<T>& total) {
  auto add = [](const std::vector<T>& src, std::vector<T>& dst) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
  };
  add(g.dense.past_filters, total.past_filters);
  add(g.dense.past_bias, total.past_bias);
  add(g.dense.future_filters, total.future_filters);
  add(g.dense.future_bias, total.future_bias);
  add(g.dense.classifier, total.classifier);
  add(g.dense.classifier_bias, total.classifier_bias);
  const std::size_t E = cfg.embed_dim;
  for (std::size_t r = 0; r < g.rows.size(); ++r) {
    T* dst = total.embeddings.data() + static_cast<std::size_t>(g.rows[r]) * E;
    const T* src = g.row_grads.data() + r * E;
    for (std::size_t e = 0; e < E; ++e) dst[e] += src[e];
  }
}

}  // namespace slotfill::nn
