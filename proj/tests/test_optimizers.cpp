#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hypermads/optimizers.hpp"

using namespace hypermads;

namespace {

std::vector<double> one(double v) { return {v}; }

}  // namespace

TEST_CASE("plain gradient step") {
  auto opt = make_optimizer(1, {0.1, 0, 0, 0}, 1);
  auto p = one(1.0);
  opt->step(p, one(0.5), 0.1);
  CHECK(p[0] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("momentum buffer seeds with the raw gradient") {
  // First step must not scale the buffer by (1 - dampening); the second
  // step applies mu * buf + (1 - dampening) * g.
  auto opt = make_optimizer(1, {0.1, 0.9, 0, 0}, 1);
  auto p = one(1.0);
  opt->step(p, one(0.5), 0.1);
  CHECK(p[0] == doctest::Approx(0.95).epsilon(1e-15));
  opt->step(p, one(0.5), 0.1);
  // buf = 0.9*0.5 + 0.5 = 0.95 -> p = 0.95 - 0.095
  CHECK(p[0] == doctest::Approx(0.855).epsilon(1e-12));
}

TEST_CASE("dampening scales later steps only") {
  auto opt = make_optimizer(1, {0.1, 0.9, 0.5, 0}, 1);
  auto p = one(1.0);
  opt->step(p, one(0.5), 0.1);
  CHECK(p[0] == doctest::Approx(0.95).epsilon(1e-15));  // full first step
  opt->step(p, one(0.5), 0.1);
  // buf = 0.9*0.5 + 0.5*0.5 = 0.7 -> p = 0.95 - 0.07
  CHECK(p[0] == doctest::Approx(0.88).epsilon(1e-12));
}

TEST_CASE("weight decay adds to the gradient before anything else") {
  auto sgd = make_optimizer(1, {1, 0, 0, 1}, 1);
  auto p = one(1.0);
  sgd->step(p, one(0.0), 1.0);  // effective gradient = 0 + 1*1
  CHECK(p[0] == 0.0);

  auto adam = make_optimizer(2, {0.1, 0.9, 0.999, 0.1}, 1);
  auto q = one(1.0);
  adam->step(q, one(0.0), 0.1);
  // g = 0.1; bias-corrected ratio = 0.1/0.1 = 1 up to epsilon
  CHECK(q[0] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("adam's bias correction makes the first step a full step") {
  auto opt = make_optimizer(2, {0.1, 0.9, 0.999, 0}, 1);
  auto p = one(0.0);
  opt->step(p, one(1.0), 0.1);
  // m-hat = v-hat = 1, so the update is lr/(1 + 1e-8)
  CHECK(p[0] == doctest::Approx(-0.1).epsilon(1e-7));
  opt->step(p, one(1.0), 0.1);
  opt->step(p, one(1.0), 0.1);
  // a constant gradient keeps the corrected ratio at 1
  CHECK(p[0] == doctest::Approx(-0.3).epsilon(1e-6));
}

TEST_CASE("adagrad accumulates squared gradients") {
  auto opt = make_optimizer(3, {1, 0, 0, 0}, 1);
  auto p = one(1.0);
  opt->step(p, one(1.0), 1.0);  // sum = 1 -> step 1/sqrt(1)
  CHECK(p[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  opt->step(p, one(1.0), 1.0);  // sum = 2 -> step 1/sqrt(2)
  CHECK(p[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("adagrad's learning-rate decay divides by 1 + (t-1)*decay") {
  // A huge initial accumulator freezes the denominator, isolating the decay.
  auto opt = make_optimizer(3, {1, 1.0, 1e12, 0}, 1);
  auto p = one(0.0);
  opt->step(p, one(1.0), 1.0);
  const double d1 = -p[0];
  opt->step(p, one(1.0), 1.0);
  const double d2 = -p[0] - d1;
  opt->step(p, one(1.0), 1.0);
  const double d3 = -p[0] - d1 - d2;
  CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(d3 / d1 == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("adagrad starts from the initial accumulator value") {
  auto opt = make_optimizer(3, {1, 0, 3.0, 0}, 1);
  auto p = one(1.0);
  opt->step(p, one(1.0), 1.0);  // sum = 3 + 1 -> step 1/2
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("rmsprop divides by the running rms") {
  auto opt = make_optimizer(4, {0.01, 0, 0.99, 0}, 1);
  auto p = one(1.0);
  opt->step(p, one(1.0), 0.01);
  // sq = 0.01, denom = 0.1 -> step 0.01/0.1 = 0.1
  CHECK(p[0] == doctest::Approx(0.9).epsilon(1e-7));
}

TEST_CASE("rmsprop momentum accumulates scaled gradients") {
  auto plain = make_optimizer(4, {0.01, 0, 0.99, 0}, 1);
  auto mom = make_optimizer(4, {0.01, 0.5, 0.99, 0}, 1);
  auto p = one(1.0), q = one(1.0);
  plain->step(p, one(1.0), 0.01);
  mom->step(q, one(1.0), 0.01);
  CHECK(p[0] == q[0]);  // identical first step: buf starts at zero
  plain->step(p, one(1.0), 0.01);
  mom->step(q, one(1.0), 0.01);
  CHECK(q[0] < p[0]);  // the buffer keeps half of the previous step
}

TEST_CASE("coordinates update independently") {
  auto opt = make_optimizer(1, {0.1, 0, 0, 0}, 2);
  std::vector<double> p = {1.0, 2.0};
  opt->step(p, {0.5, 0.0}, 0.1);
  CHECK(p[0] == doctest::Approx(0.95));
  CHECK(p[1] == 2.0);
}

TEST_CASE("unknown optimizer choices are rejected") {
  CHECK_THROWS_AS(make_optimizer(0, {0, 0, 0, 0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_optimizer(5, {0, 0, 0, 0}, 1), std::invalid_argument);
  for (int c = 1; c <= 4; ++c) CHECK(make_optimizer(c, {0.1, 0.9, 0.99, 0}, 3));
}

TEST_CASE("degenerate adam squared-decay of one breaks down immediately") {
  // beta2 = 1 gives a zero bias correction for v: the very first step is
  // not finite. The trainer turns this into a failed evaluation.
  auto opt = make_optimizer(2, {0.1, 0.9, 1.0, 0}, 1);
  auto p = one(0.5);
  opt->step(p, one(1.0), 0.1);
  CHECK(!std::isfinite(p[0]));
}
