#include "hypermads/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypermads/network.hpp"
#include "hypermads/optimizers.hpp"
#include "hypermads/rng.hpp"

namespace hypermads {

double lr_schedule(int optimizer_choice, int epoch, double lr) {
  if (optimizer_choice == 1 && lr > 1e-6 && epoch >= 100 && epoch <= 400 &&
      epoch % 100 == 0)
    return lr / 10.0;
  return lr;
}

bool should_stop_early(const std::vector<double>& acc) {
  const std::size_t e = acc.size();
  if (e >= 50) {
    const double overall = *std::max_element(acc.begin(), acc.end());
    if (overall < 20.0) return true;
  }
  if (e > 50) {
    const double recent =
        *std::max_element(acc.end() - 50, acc.end());
    const double earlier =
        *std::max_element(acc.begin(), acc.end() - 50);
    if (recent - earlier <= 0.1) return true;
  }
  return false;
}

TrainResult train_network(const Point& p, const ToyDataset& data,
                          const TrainSettings& settings) {
  TrainResult result;
  Rng root(settings.seed ^ 0xA24BAED4963EE407ull);
  Rng init_rng = root.fork(1);
  Rng shuffle_rng = root.fork(2);
  Rng dropout_rng = root.fork(3);

  Network net(p, data.image_side, data.channels, data.num_classes, init_rng);
  auto optimizer = make_optimizer(p.optimizer_choice, p.optimizer_params,
                                  net.num_parameters());
  double lr = p.optimizer_params[0];

  const std::size_t n_train = data.train.size();
  const std::size_t batch =
      std::min<std::size_t>(static_cast<std::size_t>(p.batch_size), n_train);
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> grad(net.num_parameters());
  std::vector<double> best_params;
  std::vector<double> val_curve;
  double best_val = -1.0;
  int best_epoch = 0;

  for (int epoch = 1; epoch <= settings.max_epochs; ++epoch) {
    lr = lr_schedule(p.optimizer_choice, epoch, lr);

    // Fisher-Yates shuffle with the dedicated stream
    for (std::size_t i = n_train; i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }

    int correct = 0;
    for (std::size_t start = 0; start < n_train; start += batch) {
      const std::size_t stop = std::min(n_train, start + batch);
      std::vector<const Sample*> b;
      b.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i)
        b.push_back(&data.train[order[i]]);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double loss =
          net.train_batch(b, p.dropout_rate, dropout_rng, grad, &correct);
      if (!std::isfinite(loss)) {
        result.failed = true;
        return result;
      }
      optimizer->step(net.parameters(), grad, lr);
    }

    EpochStat st;
    st.epoch = epoch;
    st.train_accuracy = 100.0 * correct / static_cast<double>(n_train);
    st.val_accuracy = net.accuracy_percent(data.val);
    st.learning_rate = lr;
    result.log.push_back(st);
    val_curve.push_back(st.val_accuracy);

    if (st.val_accuracy > best_val) {
      best_val = st.val_accuracy;
      best_epoch = epoch;
      best_params = net.parameters();
    }
    if (should_stop_early(val_curve)) break;
  }

  if (!best_params.empty()) net.parameters() = best_params;
  result.best_val_accuracy = std::max(best_val, 0.0);
  result.best_epoch = best_epoch;
  result.test_accuracy = net.accuracy_percent(data.test);
  return result;
}

}  // namespace hypermads
