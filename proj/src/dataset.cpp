#include "hypermads/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <tuple>

#include "hypermads/rng.hpp"

namespace hypermads {

namespace {

struct ClassSignature {
  int vcol = 0;  // vertical line column
  int hrow = 0;  // horizontal line row
  int bx = 0, by = 0;  // blob center
};

// Distinct, deterministic signature per class. A salted integer hash picks
// the positions; collisions on the full tuple retry with the next salt so
// any two classes always differ somewhere.
std::vector<ClassSignature> class_signatures(int num_classes, int side) {
  std::vector<ClassSignature> sigs;
  std::set<std::tuple<int, int, int, int>> used;
  for (int c = 0; c < num_classes; ++c) {
    for (std::uint64_t salt = 0;; ++salt) {
      std::uint64_t h =
          (static_cast<std::uint64_t>(c) + 1 + salt * 1469598103934665603ull) *
          0x9E3779B97F4A7C15ull;
      h ^= h >> 29;
      h *= 0xBF58476D1CE4E5B9ull;
      h ^= h >> 32;
      ClassSignature s;
      s.vcol = static_cast<int>((h >> 3) % side);
      s.hrow = static_cast<int>((h >> 13) % side);
      s.bx = static_cast<int>((h >> 23) % side);
      s.by = static_cast<int>((h >> 33) % side);
      auto key = std::make_tuple(s.vcol, s.hrow, s.bx, s.by);
      if (used.insert(key).second ||
          used.size() >= static_cast<std::size_t>(side) * side * side * side) {
        sigs.push_back(s);
        break;
      }
    }
  }
  return sigs;
}

Sample draw_sample(const ClassSignature& sig, int label, int side, Rng& rng) {
  Sample s;
  s.label = label;
  s.pixels.assign(static_cast<std::size_t>(side) * side, 0.0);
  auto at = [&](int y, int x) -> double& {
    return s.pixels[static_cast<std::size_t>(y) * side + x];
  };
  const int dx = static_cast<int>(rng.uniform_int(-1, 1));
  const int dy = static_cast<int>(rng.uniform_int(-1, 1));
  auto wrap = [&](int v) { return ((v % side) + side) % side; };

  const int col = wrap(sig.vcol + dx);
  for (int y = 0; y < side; ++y) at(y, col) = std::max(at(y, col), 0.8);
  const int row = wrap(sig.hrow + dy);
  for (int x = 0; x < side; ++x) at(row, x) = std::max(at(row, x), 0.8);

  const int bx = wrap(sig.bx + dx), by = wrap(sig.by + dy);
  at(by, bx) += 0.6;
  at(by, wrap(bx + 1)) += 0.35;
  at(by, wrap(bx - 1)) += 0.35;
  at(wrap(by + 1), bx) += 0.35;
  at(wrap(by - 1), bx) += 0.35;

  for (auto& p : s.pixels)
    p = std::clamp(p + 0.05 * rng.normal(), 0.0, 1.0);
  return s;
}

std::vector<Sample> draw_split(const std::vector<ClassSignature>& sigs,
                               int count, int side, Rng rng) {
  // round-robin over classes so every split covers all of them
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(count));
  const int k = static_cast<int>(sigs.size());
  for (int i = 0; i < count; ++i) {
    const int label = i % k;
    out.push_back(draw_sample(sigs[static_cast<std::size_t>(label)], label,
                              side, rng));
  }
  return out;
}

}  // namespace

ToyDataset make_toy_dataset(int num_classes, int image_side, int n_train,
                            int n_val, int n_test, std::uint64_t seed) {
  ToyDataset d;
  d.image_side = image_side;
  d.channels = 1;
  d.num_classes = num_classes;
  const auto sigs = class_signatures(num_classes, image_side);
  Rng root(seed ^ 0xD1B54A32D192ED03ull);
  d.train = draw_split(sigs, n_train, image_side, root.fork(1));
  d.val = draw_split(sigs, n_val, image_side, root.fork(2));
  d.test = draw_split(sigs, n_test, image_side, root.fork(3));
  return d;
}

std::optional<DatasetInfo> dataset_info(std::string_view name) {
  std::string up;
  for (char ch : name)
    if (ch != '-' && ch != '_')
      up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  auto info = [&](const char* canon, int classes) {
    return DatasetInfo{canon, classes, 8, 1};
  };
  if (up == "TOYMNIST" || up == "MNIST") return info("MNIST", 10);
  if (up == "FASHIONMNIST") return info("FASHION-MNIST", 10);
  if (up == "EMNIST") return info("EMNIST", 10);
  if (up == "KMNIST") return info("KMNIST", 10);
  if (up == "CIFAR10") return info("CIFAR-10", 10);
  if (up == "STL10") return info("STL-10", 10);
  if (up == "CIFAR100") return info("CIFAR-100", 100);
  return std::nullopt;
}

ToyDataset make_named_dataset(const DatasetInfo& info, std::uint64_t seed) {
  return make_toy_dataset(info.num_classes, info.image_side, 300, 100, 100,
                          seed);
}

}  // namespace hypermads
