#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "hypermads/dataset.hpp"

using namespace hypermads;

TEST_CASE("toy dataset has the requested shape") {
  const auto ds = make_toy_dataset(10, 8, 300, 100, 100, 1);
  CHECK(ds.image_side == 8);
  CHECK(ds.channels == 1);
  CHECK(ds.num_classes == 10);
  CHECK(ds.train.size() == 300);
  CHECK(ds.val.size() == 100);
  CHECK(ds.test.size() == 100);
  for (const auto* split : {&ds.train, &ds.val, &ds.test})
    for (const auto& s : *split) {
      CHECK(s.pixels.size() == 64);
      CHECK(s.label >= 0);
      CHECK(s.label < 10);
      for (double p : s.pixels) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
      }
    }
}

TEST_CASE("labels are balanced within each split") {
  const auto ds = make_toy_dataset(10, 8, 300, 100, 100, 7);
  auto counts = [](const std::vector<Sample>& split) {
    std::map<int, int> c;
    for (const auto& s : split) ++c[s.label];
    return c;
  };
  for (const auto& [label, n] : counts(ds.train)) CHECK(n == 30);
  for (const auto& [label, n] : counts(ds.val)) CHECK(n == 10);
  for (const auto& [label, n] : counts(ds.test)) CHECK(n == 10);
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = make_toy_dataset(10, 8, 50, 20, 20, 3);
  const auto b = make_toy_dataset(10, 8, 50, 20, 20, 3);
  REQUIRE(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].label == b.train[i].label);
    CHECK(a.train[i].pixels == b.train[i].pixels);
  }
  const auto c = make_toy_dataset(10, 8, 50, 20, 20, 4);
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size() && !differs; ++i)
    differs = a.train[i].pixels != c.train[i].pixels;
  CHECK(differs);
}

TEST_CASE("classes are visually distinct on average") {
  // Mean images of different classes should differ much more than mean
  // images of the same class generated from different seeds: the signature
  // dominates the jitter and noise.
  const auto ds = make_toy_dataset(4, 8, 200, 40, 40, 11);
  std::vector<std::vector<double>> mean(4, std::vector<double>(64, 0.0));
  std::vector<int> n(4, 0);
  for (const auto& s : ds.train) {
    for (int i = 0; i < 64; ++i) mean[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(i)] += s.pixels[static_cast<std::size_t>(i)];
    ++n[static_cast<std::size_t>(s.label)];
  }
  for (int k = 0; k < 4; ++k)
    for (auto& v : mean[static_cast<std::size_t>(k)]) v /= n[static_cast<std::size_t>(k)];
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      double d = 0;
      for (int i = 0; i < 64; ++i) {
        const double diff = mean[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
        d += diff * diff;
      }
      CHECK(d > 0.05);  // class signatures are far apart
    }
}

TEST_CASE("samples of one class vary across draws") {
  const auto ds = make_toy_dataset(3, 8, 90, 30, 30, 2);
  std::vector<const Sample*> zeros;
  for (const auto& s : ds.train)
    if (s.label == 0) zeros.push_back(&s);
  REQUIRE(zeros.size() >= 2);
  bool any_differ = false;
  for (std::size_t i = 1; i < zeros.size() && !any_differ; ++i)
    any_differ = zeros[0]->pixels != zeros[i]->pixels;
  CHECK(any_differ);  // jitter and noise produce distinct samples
}

TEST_CASE("benchmark names map to class counts") {
  auto info = dataset_info("MNIST");
  REQUIRE(info.has_value());
  CHECK(info->canonical_name == "MNIST");
  CHECK(info->num_classes == 10);
  CHECK(info->image_side == 8);
  CHECK(info->channels == 1);

  CHECK(dataset_info("TOYMNIST")->canonical_name == "MNIST");
  CHECK(dataset_info("FASHION-MNIST")->canonical_name == "FASHION-MNIST");
  CHECK(dataset_info("Fashion_MNIST")->canonical_name == "FASHION-MNIST");
  CHECK(dataset_info("EMNIST")->num_classes == 10);
  CHECK(dataset_info("KMNIST")->num_classes == 10);
  CHECK(dataset_info("cifar10")->canonical_name == "CIFAR-10");
  CHECK(dataset_info("CIFAR-10")->num_classes == 10);
  CHECK(dataset_info("STL10")->canonical_name == "STL-10");
  CHECK(dataset_info("CIFAR100")->num_classes == 100);

  CHECK(!dataset_info("CUSTOM").has_value());
  CHECK(!dataset_info("SPHERE").has_value());
  CHECK(!dataset_info("QUADRATIC").has_value());
  CHECK(!dataset_info("IMAGENET").has_value());
}

TEST_CASE("named datasets use the standard splits") {
  const auto info = dataset_info("MNIST");
  REQUIRE(info.has_value());
  const auto ds = make_named_dataset(*info, 5);
  CHECK(ds.train.size() == 300);
  CHECK(ds.val.size() == 100);
  CHECK(ds.test.size() == 100);
  CHECK(ds.num_classes == 10);
}
