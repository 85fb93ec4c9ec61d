#pragma once

#include <span>
#include <vector>

#include "slotfill/nn/network.hpp"

namespace slotfill::nn {

/// Scratch buffers reused across minibatches by the parallel kernel.
template <typename T>
struct BatchWorkspace {
  std::vector<Trace<T>> traces;
  std::vector<SampleGradient<T>> grads;
  std::vector<double> losses;
};

/// Reference kernel: samples processed one after another. Overwrites `grad`
/// with the gradient of the mean loss and returns the summed loss.
template <typename T>
double batch_gradient_serial(const Parameters<T>& params, const NetConfig& cfg,
                             std::span<const EncodedSentence> data, std::span<const SampleRef> batch,
                             Parameters<T>& grad);

/// OpenMP kernel: per-sample gradients in parallel, then a reduction that
/// adds samples in batch order. Bitwise identical to the serial kernel.
template <typename T>
double batch_gradient_parallel(const Parameters<T>& params, const NetConfig& cfg,
                               std::span<const EncodedSentence> data, std::span<const SampleRef> batch,
                               Parameters<T>& grad, BatchWorkspace<T>& workspace);

template <typename T>
struct LossAndGradients {
  double loss = 0.0;  // mean negative log-likelihood
  Parameters<T> gradients;
};

/// Mean cross-entropy over `batch` and its gradient. Throws ConfigError on an
/// empty batch or a gold class outside [0, num_labels).
template <typename T>
LossAndGradients<T> loss_and_gradients(const Parameters<T>& params, const NetConfig& cfg,
                                       std::span<const EncodedSentence> data, std::span<const SampleRef> batch);

/// Mean loss only; used by the finite-difference checks.
template <typename T>
double mean_loss(const Parameters<T>& params, const NetConfig& cfg, std::span<const EncodedSentence> data,
                 std::span<const SampleRef> batch);

}  // namespace slotfill::nn
