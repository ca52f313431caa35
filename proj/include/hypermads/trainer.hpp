#pragma once

#include <cstdint>
#include <vector>

#include "hypermads/dataset.hpp"
#include "hypermads/space.hpp"

namespace hypermads {

struct EpochStat {
  int epoch = 0;              // 1-based
  double train_accuracy = 0;  // percent, measured on the training forward passes
  double val_accuracy = 0;    // percent
  double learning_rate = 0;   // value used during this epoch
};

struct TrainResult {
  bool failed = false;  // training diverged (non-finite loss)
  double test_accuracy = 0;     // percent, at the best-validation weights
  double best_val_accuracy = 0;
  int best_epoch = 0;
  std::vector<EpochStat> log;
};

struct TrainSettings {
  int max_epochs = 500;
  std::uint64_t seed = 0;
};

// SGD learning-rate schedule: divide by 10 at epochs 100, 200, 300 and 400
// while the rate is still above 1e-6. Other optimizers keep a constant rate.
double lr_schedule(int optimizer_choice, int epoch, double lr);

// Early stopping over the validation-accuracy curve (1-based epochs,
// percent). Two rules:
//  - floor: from epoch 50 on, stop when no epoch has reached 20%;
//  - stagnation: for epochs past 50, stop when the best of the last 50
//    epochs beats the best of all earlier epochs by at most 0.1 points.
bool should_stop_early(const std::vector<double>& val_accuracies);

// Full training run: mini-batch SGD-family training with shuffled batches,
// per-epoch validation, best-epoch weight snapshot, early stopping, and a
// final test evaluation at the snapshot. Deterministic in settings.seed.
// Throws std::invalid_argument when the architecture is infeasible for the
// dataset's input size (callers gate on architecture_feasible first).
TrainResult train_network(const Point& p, const ToyDataset& data,
                          const TrainSettings& settings);

}  // namespace hypermads
