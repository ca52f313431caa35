#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypermads {

// Small procedural image-classification datasets. Each class has a distinct
// geometric signature (a vertical line, a horizontal line and a blob at
// class-specific positions); samples jitter the signature by +-1 pixel and
// add Gaussian noise. Cheap to generate, fully deterministic, and separable
// enough that a small CNN beats chance comfortably.

struct Sample {
  std::vector<double> pixels;  // channels * side * side, values in [0,1]
  int label = 0;
};

struct ToyDataset {
  int image_side = 8;
  int channels = 1;
  int num_classes = 10;
  std::vector<Sample> train, val, test;
};

ToyDataset make_toy_dataset(int num_classes, int image_side, int n_train,
                            int n_val, int n_test, std::uint64_t seed);

// Desk-scale stand-ins for the usual benchmark names. All map to 8x8
// single-channel toy data with 300/100/100 splits; only the class count
// differs. Returns nullopt for unknown names (e.g. CUSTOM, SPHERE).
struct DatasetInfo {
  std::string canonical_name;
  int num_classes = 10;
  int image_side = 8;
  int channels = 1;
};

std::optional<DatasetInfo> dataset_info(std::string_view name);

// Convenience: build the toy dataset for a known benchmark name.
ToyDataset make_named_dataset(const DatasetInfo& info, std::uint64_t seed);

}  // namespace hypermads
