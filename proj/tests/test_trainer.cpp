#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "hypermads/trainer.hpp"

using namespace hypermads;

namespace {

Point trainable_point() {
  Point p;
  p.conv_layers = {{4, 3, 1, 0, 1}};
  p.fc_sizes = {32};
  p.batch_size = 32;
  p.optimizer_choice = 1;
  p.optimizer_params = {0.1, 0.9, 0.005, 0};
  p.dropout_rate = 0.2;
  p.activation = 1;
  return p;
}

}  // namespace

TEST_CASE("sgd learning rate divides by ten at the century marks") {
  CHECK(lr_schedule(1, 100, 0.1) == doctest::Approx(0.01));
  CHECK(lr_schedule(1, 200, 0.01) == doctest::Approx(0.001));
  CHECK(lr_schedule(1, 400, 1e-4) == doctest::Approx(1e-5));
  CHECK(lr_schedule(1, 99, 0.1) == 0.1);
  CHECK(lr_schedule(1, 150, 0.1) == 0.1);
  CHECK(lr_schedule(1, 500, 0.1) == 0.1);  // past the last marker
  CHECK(lr_schedule(1, 100, 1e-6) == 1e-6);  // floor reached
  CHECK(lr_schedule(1, 100, 1e-7) == 1e-7);
  for (int choice : {2, 3, 4}) {
    CHECK(lr_schedule(choice, 100, 0.1) == 0.1);
    CHECK(lr_schedule(choice, 300, 0.1) == 0.1);
  }

  // the full 500-epoch trajectory from 0.1
  double lr = 0.1;
  std::vector<double> at_marks;
  for (int e = 1; e <= 500; ++e) {
    lr = lr_schedule(1, e, lr);
    if (e % 100 == 0) at_marks.push_back(lr);
  }
  REQUIRE(at_marks.size() == 5);
  CHECK(at_marks[0] == doctest::Approx(0.01));
  CHECK(at_marks[1] == doctest::Approx(0.001));
  CHECK(at_marks[2] == doctest::Approx(1e-4));
  CHECK(at_marks[3] == doctest::Approx(1e-5));
  CHECK(at_marks[4] == doctest::Approx(1e-5));  // epoch 500 is not a marker
}

TEST_CASE("early stopping floors out hopeless runs at epoch 50") {
  std::vector<double> acc(49, 10.0);
  CHECK(!should_stop_early(acc));
  acc.push_back(10.0);  // 50 epochs, never reached 20%
  CHECK(should_stop_early(acc));

  std::vector<double> ok(50, 10.0);
  ok[20] = 25.0;  // one epoch above the floor keeps the run alive
  CHECK(!should_stop_early(ok));
}

TEST_CASE("early stopping detects a 50-epoch stagnation") {
  // validation accuracy min(85, 25 + e): rises to 85 at epoch 60, then flat.
  std::vector<double> acc;
  for (int e = 1; e <= 200; ++e) {
    acc.push_back(std::min(85.0, 25.0 + e));
    const bool stop = should_stop_early(acc);
    if (e < 110) {
      CHECK(!stop);
    } else {
      CHECK(stop);
      break;
    }
  }
  CHECK(acc.size() == 110);  // first stop exactly when the window stalls
}

TEST_CASE("a small gain within the 0.1 margin still counts as stagnation") {
  // dyadic values keep the subtraction exact at the margin
  std::vector<double> flat(1, 50.0);
  flat.insert(flat.end(), 50, 50.0625);  // 51 epochs, gain 0.0625 <= 0.1
  CHECK(should_stop_early(flat));

  std::vector<double> rising(1, 50.0);
  rising.insert(rising.end(), 50, 50.25);  // gain 0.25 beats the margin
  CHECK(!should_stop_early(rising));
}

TEST_CASE("training learns the toy classes") {
  const auto data = make_toy_dataset(10, 8, 300, 100, 100, 21);
  TrainSettings s;
  s.max_epochs = 30;
  s.seed = 4;
  const auto r = train_network(trainable_point(), data, s);
  CHECK(!r.failed);
  CHECK(r.best_val_accuracy > 35.0);  // far above the 10% chance level
  CHECK(r.test_accuracy > 25.0);
  REQUIRE(!r.log.empty());
  CHECK(r.log.size() <= 30);
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    CHECK(r.log[i].epoch == static_cast<int>(i) + 1);
    CHECK(r.log[i].learning_rate == doctest::Approx(0.1));
  }
  double max_val = 0;
  for (const auto& st : r.log) max_val = std::max(max_val, st.val_accuracy);
  CHECK(r.best_val_accuracy == max_val);
  CHECK(r.best_epoch >= 1);
  CHECK(r.best_epoch <= static_cast<int>(r.log.size()));
}

TEST_CASE("training is deterministic in the seed") {
  const auto data = make_toy_dataset(10, 8, 120, 40, 40, 22);
  TrainSettings s;
  s.max_epochs = 5;
  s.seed = 9;
  const auto a = train_network(trainable_point(), data, s);
  const auto b = train_network(trainable_point(), data, s);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].train_accuracy == b.log[i].train_accuracy);
    CHECK(a.log[i].val_accuracy == b.log[i].val_accuracy);
  }
  CHECK(a.test_accuracy == b.test_accuracy);

  s.seed = 10;
  const auto c = train_network(trainable_point(), data, s);
  bool differs = a.log.size() != c.log.size() ||
                 a.test_accuracy != c.test_accuracy;
  for (std::size_t i = 0; !differs && i < a.log.size(); ++i)
    differs = a.log[i].val_accuracy != c.log[i].val_accuracy;
  CHECK(differs);
}

TEST_CASE("divergent training reports failure instead of nonsense") {
  const auto data = make_toy_dataset(10, 8, 300, 100, 100, 23);
  Point p = trainable_point();
  p.optimizer_choice = 2;
  p.optimizer_params = {0.1, 0.9, 1.0, 0};  // beta2 = 1: first step explodes
  TrainSettings s;
  s.max_epochs = 5;
  s.seed = 1;
  const auto r = train_network(p, data, s);
  CHECK(r.failed);
}

TEST_CASE("a zero learning rate hits the 20% floor at epoch 50") {
  const auto data = make_toy_dataset(10, 8, 100, 50, 50, 24);
  Point p = trainable_point();
  p.optimizer_params = {0, 0, 0, 0};  // nothing ever moves
  p.dropout_rate = 0;
  TrainSettings s;
  s.max_epochs = 200;
  s.seed = 2;
  const auto r = train_network(p, data, s);
  REQUIRE(!r.failed);
  REQUIRE(r.log.size() >= 50);
  CHECK(r.best_val_accuracy < 20.0);
  CHECK(r.log.size() == 50);
  for (const auto& st : r.log)
    CHECK(st.val_accuracy == r.log[0].val_accuracy);  // frozen weights
}

TEST_CASE("a frozen run above the floor stops on stagnation at epoch 51") {
  // with two classes a random network sits near 50% accuracy, above the
  // floor, so only the stagnation rule can fire
  const auto data = make_toy_dataset(2, 8, 60, 40, 40, 25);
  Point p = trainable_point();
  p.optimizer_params = {0, 0, 0, 0};
  p.dropout_rate = 0;
  TrainSettings s;
  s.max_epochs = 200;
  s.seed = 3;
  const auto r = train_network(p, data, s);
  REQUIRE(!r.failed);
  CHECK(r.best_val_accuracy >= 20.0);
  CHECK(r.log.size() == 51);
}

TEST_CASE("oversized batches clamp to the training set") {
  const auto data = make_toy_dataset(4, 8, 40, 20, 20, 26);
  Point p = trainable_point();
  p.batch_size = 5000;
  TrainSettings s;
  s.max_epochs = 3;
  s.seed = 5;
  const auto r = train_network(p, data, s);
  CHECK(!r.failed);
  CHECK(r.log.size() == 3);
}

TEST_CASE("infeasible architectures are rejected") {
  const auto data = make_toy_dataset(10, 8, 30, 10, 10, 27);
  const auto spec = SpaceSpec::defaults();
  TrainSettings s;
  CHECK_THROWS_AS(train_network(default_point(spec), data, s),
                  std::invalid_argument);
}
