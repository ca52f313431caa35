#include "hypermads/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace hypermads {

namespace {

class Sgd final : public GradOptimizer {
 public:
  Sgd(double momentum, double dampening, double weight_decay, std::size_t n)
      : mu_(momentum), tau_(dampening), wd_(weight_decay) {
    if (mu_ != 0) buf_.assign(n, 0.0);
  }
  void step(std::vector<double>& p, const std::vector<double>& grad,
            double lr) override {
    for (std::size_t i = 0; i < p.size(); ++i) {
      double g = grad[i] + wd_ * p[i];
      if (mu_ != 0) {
        buf_[i] = first_ ? g : mu_ * buf_[i] + (1.0 - tau_) * g;
        g = buf_[i];
      }
      p[i] -= lr * g;
    }
    first_ = false;
  }

 private:
  double mu_, tau_, wd_;
  std::vector<double> buf_;
  bool first_ = true;
};

class Adam final : public GradOptimizer {
 public:
  Adam(double beta1, double beta2, double weight_decay, std::size_t n)
      : b1_(beta1), b2_(beta2), wd_(weight_decay), m_(n, 0.0), v_(n, 0.0) {}
  void step(std::vector<double>& p, const std::vector<double>& grad,
            double lr) override {
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, t_);
    const double c2 = 1.0 - std::pow(b2_, t_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = grad[i] + wd_ * p[i];
      m_[i] = b1_ * m_[i] + (1.0 - b1_) * g;
      v_[i] = b2_ * v_[i] + (1.0 - b2_) * g * g;
      p[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + 1e-8);
    }
  }

 private:
  double b1_, b2_, wd_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

class Adagrad final : public GradOptimizer {
 public:
  Adagrad(double lr_decay, double initial_accumulator, double weight_decay,
          std::size_t n)
      : decay_(lr_decay), wd_(weight_decay), sum_(n, initial_accumulator) {}
  void step(std::vector<double>& p, const std::vector<double>& grad,
            double lr) override {
    ++t_;
    const double clr = lr / (1.0 + (t_ - 1) * decay_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = grad[i] + wd_ * p[i];
      sum_[i] += g * g;
      p[i] -= clr * g / (std::sqrt(sum_[i]) + 1e-10);
    }
  }

 private:
  double decay_, wd_;
  std::vector<double> sum_;
  long t_ = 0;
};

class RmsProp final : public GradOptimizer {
 public:
  RmsProp(double momentum, double alpha, double weight_decay, std::size_t n)
      : mu_(momentum), alpha_(alpha), wd_(weight_decay), sq_(n, 0.0) {
    if (mu_ > 0) buf_.assign(n, 0.0);
  }
  void step(std::vector<double>& p, const std::vector<double>& grad,
            double lr) override {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = grad[i] + wd_ * p[i];
      sq_[i] = alpha_ * sq_[i] + (1.0 - alpha_) * g * g;
      const double denom = std::sqrt(sq_[i]) + 1e-8;
      if (mu_ > 0) {
        buf_[i] = mu_ * buf_[i] + g / denom;
        p[i] -= lr * buf_[i];
      } else {
        p[i] -= lr * g / denom;
      }
    }
  }

 private:
  double mu_, alpha_, wd_;
  std::vector<double> sq_, buf_;
};

}  // namespace

std::unique_ptr<GradOptimizer> make_optimizer(
    int choice, const std::array<double, 4>& q, std::size_t n) {
  switch (choice) {
    case 1: return std::make_unique<Sgd>(q[1], q[2], q[3], n);
    case 2: return std::make_unique<Adam>(q[1], q[2], q[3], n);
    case 3: return std::make_unique<Adagrad>(q[1], q[2], q[3], n);
    case 4: return std::make_unique<RmsProp>(q[1], q[2], q[3], n);
  }
  throw std::invalid_argument("optimizer choice must be 1..4, got " +
                              std::to_string(choice));
}

}  // namespace hypermads
