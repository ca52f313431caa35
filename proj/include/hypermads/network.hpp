#pragma once

#include <cstddef>
#include <vector>

#include "hypermads/dataset.hpp"
#include "hypermads/rng.hpp"
#include "hypermads/space.hpp"

namespace hypermads {

// Cross-correlation with zero padding. weights is laid out
// [out_ch][in_ch][k][k], bias has one entry per output channel; the result
// is [out_ch][out][out] with out = conv_output_size(in_size, k, stride,
// pad). Exposed so the arithmetic can be checked directly.
std::vector<double> conv2d(const std::vector<double>& input, int in_ch,
                           int in_size, const double* weights,
                           const double* bias, int out_ch, int k, int stride,
                           int pad);

// A small CNN built from a hyperparameter point: the conv groups (square
// kernels, optional 2x2 max pool), then fully-connected hidden layers with
// inverted dropout, then a linear classifier with softmax/cross-entropy.
// Forward and backward are implemented directly over double precision;
// parameters live in one flat vector so optimizers and finite-difference
// checks can treat the model as a plain R^n function.
class Network {
 public:
  // Throws std::invalid_argument when the conv chain is infeasible for the
  // given input side (kernel larger than padded input / size reaching zero).
  Network(const Point& p, int input_side, int input_channels, int num_classes,
          Rng& init_rng);

  std::size_t num_parameters() const { return params_.size(); }
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  // Feature-map sizes per conv layer: conv output, then pooled size for
  // pooling layers. Matches FeasibilityReport::sizes.
  const std::vector<int>& feature_sizes() const { return feature_sizes_; }

  // Inference (no dropout).
  std::vector<double> logits(const std::vector<double>& pixels) const;
  int predict(const std::vector<double>& pixels) const;
  double accuracy_percent(const std::vector<Sample>& split) const;

  // Forward + backward over a mini-batch with fresh per-sample dropout
  // masks. Adds the batch-mean gradient of the cross-entropy loss into
  // `grad` (sized num_parameters, caller-zeroed), returns the mean loss.
  // When `correct` is given it accumulates training-time correct counts.
  double train_batch(const std::vector<const Sample*>& batch,
                     double dropout_rate, Rng& dropout_rng,
                     std::vector<double>& grad, int* correct = nullptr);

  // Mean cross-entropy of the batch at the current parameters, with the
  // given dropout masks disabled (used by gradient checks).
  double batch_loss(const std::vector<const Sample*>& batch) const;

 private:
  struct ConvLayer {
    int in_ch, out_ch, k, stride, pad;
    int in_size, conv_size, out_size;
    bool pool;
    std::size_t w_off, b_off;
  };
  struct FcLayer {
    int in, out;
    bool hidden;  // hidden layers get activation + dropout; the last is linear
    std::size_t w_off, b_off;
  };

  struct Workspace;  // per-sample forward caches

  void forward(const std::vector<double>& pixels, Workspace& ws,
               double dropout_rate, Rng* dropout_rng) const;
  void backward(const Workspace& ws, int label,
                std::vector<double>& grad) const;

  double activate(double z) const;
  double activate_grad(double z) const;

  std::vector<ConvLayer> conv_;
  std::vector<FcLayer> fc_;
  std::vector<double> params_;
  std::vector<int> feature_sizes_;
  int input_side_, input_channels_, num_classes_, activation_;
  int flatten_dim_ = 0;
};

}  // namespace hypermads
