#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace hypermads {

// First-order update rules over a flat parameter vector. Conventions follow
// the common deep-learning library definitions, including where weight decay
// enters (added to the raw gradient) and the bias-correction/epsilon
// placement.
class GradOptimizer {
 public:
  virtual ~GradOptimizer() = default;
  virtual void step(std::vector<double>& params,
                    const std::vector<double>& grad, double lr) = 0;
};

// choice: 1=SGD(momentum, dampening, weight_decay)
//         2=Adam(beta1, beta2, weight_decay)
//         3=Adagrad(lr_decay, initial_accumulator, weight_decay)
//         4=RMSProp(momentum, alpha, weight_decay)
// opt_params[0] is the initial learning rate, handled by the caller; the
// remaining three map onto the slots above in order.
std::unique_ptr<GradOptimizer> make_optimizer(
    int choice, const std::array<double, 4>& opt_params, std::size_t n);

}  // namespace hypermads
