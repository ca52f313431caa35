#include "hypermads/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypermads {

namespace {
constexpr int kRelu = 1, kSigmoid = 2, kTanh = 3;
}

Network::Network(const Point& p, int input_side, int input_channels,
                 int num_classes, Rng& init_rng)
    : input_side_(input_side),
      input_channels_(input_channels),
      num_classes_(num_classes),
      activation_(p.activation) {
  const auto rep = architecture_feasible(p, input_side);
  if (!rep.feasible)
    throw std::invalid_argument(
        "infeasible architecture for input side " +
        std::to_string(input_side));
  feature_sizes_ = rep.sizes;

  std::size_t off = 0;
  int ch = input_channels, size = input_side;
  for (const auto& g : p.conv_layers) {
    ConvLayer l;
    l.in_ch = ch;
    l.out_ch = g.out_channels;
    l.k = g.kernel;
    l.stride = g.stride;
    l.pad = g.padding;
    l.pool = g.do_pool != 0;
    l.in_size = size;
    l.conv_size = conv_output_size(size, g.kernel, g.stride, g.padding);
    l.out_size = l.pool ? l.conv_size / 2 : l.conv_size;
    l.w_off = off;
    off += static_cast<std::size_t>(l.out_ch) * l.in_ch * l.k * l.k;
    l.b_off = off;
    off += static_cast<std::size_t>(l.out_ch);
    conv_.push_back(l);
    ch = l.out_ch;
    size = l.out_size;
  }
  flatten_dim_ = ch * size * size;

  int in_dim = flatten_dim_;
  for (int s : p.fc_sizes) {
    FcLayer l{in_dim, s, true, off, 0};
    off += static_cast<std::size_t>(s) * in_dim;
    l.b_off = off;
    off += static_cast<std::size_t>(s);
    fc_.push_back(l);
    in_dim = s;
  }
  FcLayer out_layer{in_dim, num_classes, false, off, 0};
  off += static_cast<std::size_t>(num_classes) * in_dim;
  out_layer.b_off = off;
  off += static_cast<std::size_t>(num_classes);
  fc_.push_back(out_layer);

  params_.assign(off, 0.0);
  // weights ~ N(0, 1/fan_in); biases zero
  for (const auto& l : conv_) {
    const double scale =
        1.0 / std::sqrt(static_cast<double>(l.in_ch) * l.k * l.k);
    const std::size_t n = static_cast<std::size_t>(l.out_ch) * l.in_ch * l.k * l.k;
    for (std::size_t i = 0; i < n; ++i)
      params_[l.w_off + i] = scale * init_rng.normal();
  }
  for (const auto& l : fc_) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(l.in));
    const std::size_t n = static_cast<std::size_t>(l.out) * l.in;
    for (std::size_t i = 0; i < n; ++i)
      params_[l.w_off + i] = scale * init_rng.normal();
  }
}

double Network::activate(double z) const {
  switch (activation_) {
    case kRelu: return z > 0 ? z : 0.0;
    case kSigmoid: return 1.0 / (1.0 + std::exp(-z));
    case kTanh: return std::tanh(z);
  }
  return z;
}

double Network::activate_grad(double z) const {
  switch (activation_) {
    case kRelu: return z > 0 ? 1.0 : 0.0;
    case kSigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

struct Network::Workspace {
  // conv stage, per layer: pre-activation z, post-activation a, pooled p,
  // and the argmax index inside a for each pooled cell.
  std::vector<std::vector<double>> conv_z, conv_out;
  std::vector<std::vector<int>> pool_arg;
  std::vector<double> input;
  // fc stage: input vector per layer, pre-activation z, dropout mask
  std::vector<std::vector<double>> fc_in, fc_z;
  std::vector<std::vector<double>> fc_mask;
  std::vector<double> probs;
};

namespace {

// zero-padded read
inline double img_at(const std::vector<double>& t, int ch_stride, int size,
                     int c, int y, int x) {
  if (y < 0 || x < 0 || y >= size || x >= size) return 0.0;
  return t[static_cast<std::size_t>(c) * ch_stride +
           static_cast<std::size_t>(y) * size + x];
}

}  // namespace

std::vector<double> conv2d(const std::vector<double>& input, int in_ch,
                           int in_size, const double* weights,
                           const double* bias, int out_ch, int k, int stride,
                           int pad) {
  const int out = conv_output_size(in_size, k, stride, pad);
  std::vector<double> z(static_cast<std::size_t>(out_ch) * out * out, 0.0);
  const int in_stride = in_size * in_size;
  for (int oc = 0; oc < out_ch; ++oc) {
    const std::size_t wbase = static_cast<std::size_t>(oc) * in_ch * k * k;
    for (int oy = 0; oy < out; ++oy)
      for (int ox = 0; ox < out; ++ox) {
        double acc = bias ? bias[oc] : 0.0;
        for (int ic = 0; ic < in_ch; ++ic)
          for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx)
              acc += weights[wbase + static_cast<std::size_t>(ic) * k * k +
                             static_cast<std::size_t>(ky) * k + kx] *
                     img_at(input, in_stride, in_size, ic,
                            oy * stride - pad + ky, ox * stride - pad + kx);
        z[static_cast<std::size_t>(oc) * out * out +
          static_cast<std::size_t>(oy) * out + ox] = acc;
      }
  }
  return z;
}

void Network::forward(const std::vector<double>& pixels, Workspace& ws,
                      double dropout_rate, Rng* dropout_rng) const {
  ws.input = pixels;
  ws.conv_z.assign(conv_.size(), {});
  ws.conv_out.assign(conv_.size(), {});
  ws.pool_arg.assign(conv_.size(), {});

  const std::vector<double>* cur = &ws.input;
  for (std::size_t li = 0; li < conv_.size(); ++li) {
    const auto& l = conv_[li];
    auto& z = ws.conv_z[li];
    z = conv2d(*cur, l.in_ch, l.in_size, params_.data() + l.w_off,
               params_.data() + l.b_off, l.out_ch, l.k, l.stride, l.pad);
    auto& out = ws.conv_out[li];
    if (l.pool) {
      out.assign(static_cast<std::size_t>(l.out_ch) * l.out_size * l.out_size,
                 0.0);
      ws.pool_arg[li].assign(out.size(), 0);
      for (int oc = 0; oc < l.out_ch; ++oc)
        for (int py = 0; py < l.out_size; ++py)
          for (int px = 0; px < l.out_size; ++px) {
            double best = -1e300;
            int best_idx = 0;
            for (int sy = 0; sy < 2; ++sy)
              for (int sx = 0; sx < 2; ++sx) {
                const int y = 2 * py + sy, x = 2 * px + sx;
                const std::size_t idx =
                    static_cast<std::size_t>(oc) * l.conv_size * l.conv_size +
                    static_cast<std::size_t>(y) * l.conv_size + x;
                const double a = activate(z[idx]);
                if (a > best) {
                  best = a;
                  best_idx = static_cast<int>(idx);
                }
              }
            const std::size_t oidx =
                static_cast<std::size_t>(oc) * l.out_size * l.out_size +
                static_cast<std::size_t>(py) * l.out_size + px;
            out[oidx] = best;
            ws.pool_arg[li][oidx] = best_idx;
          }
    } else {
      out.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = activate(z[i]);
    }
    cur = &out;
  }

  // fc stage
  ws.fc_in.assign(fc_.size(), {});
  ws.fc_z.assign(fc_.size(), {});
  ws.fc_mask.assign(fc_.size(), {});
  std::vector<double> h = *cur;  // flattened view is already contiguous
  for (std::size_t li = 0; li < fc_.size(); ++li) {
    const auto& l = fc_[li];
    ws.fc_in[li] = h;
    auto& z = ws.fc_z[li];
    z.assign(static_cast<std::size_t>(l.out), 0.0);
    for (int o = 0; o < l.out; ++o) {
      double acc = params_[l.b_off + o];
      const std::size_t wbase = l.w_off + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) acc += params_[wbase + i] * h[i];
      z[static_cast<std::size_t>(o)] = acc;
    }
    if (l.hidden) {
      h.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) h[i] = activate(z[i]);
      if (dropout_rng && dropout_rate > 0) {
        auto& mask = ws.fc_mask[li];
        mask.assign(h.size(), 1.0);
        const double keep = 1.0 - dropout_rate;
        for (std::size_t i = 0; i < h.size(); ++i) {
          // inverted dropout: zero with probability dropout_rate, scale
          // survivors by 1/keep so inference needs no rescaling
          mask[i] = (dropout_rng->uniform() < dropout_rate) ? 0.0 : 1.0 / keep;
          h[i] *= mask[i];
        }
      }
    } else {
      h = z;
    }
  }

  // softmax
  double mx = h[0];
  for (double v : h) mx = std::max(mx, v);
  double sum = 0;
  ws.probs.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    ws.probs[i] = std::exp(h[i] - mx);
    sum += ws.probs[i];
  }
  for (auto& p : ws.probs) p /= sum;
}

void Network::backward(const Workspace& ws, int label,
                       std::vector<double>& grad) const {
  // dL/dlogits for cross-entropy after softmax
  std::vector<double> dh = ws.probs;
  dh[static_cast<std::size_t>(label)] -= 1.0;

  for (std::size_t li = fc_.size(); li-- > 0;) {
    const auto& l = fc_[li];
    std::vector<double> dz;
    if (l.hidden) {
      dz.assign(dh.size(), 0.0);
      const auto& mask = ws.fc_mask[li];
      for (std::size_t o = 0; o < dh.size(); ++o) {
        double g = dh[o];
        if (!mask.empty()) g *= mask[o];
        dz[o] = g * activate_grad(ws.fc_z[li][o]);
      }
    } else {
      dz = dh;
    }
    const auto& in = ws.fc_in[li];
    std::vector<double> din(static_cast<std::size_t>(l.in), 0.0);
    for (int o = 0; o < l.out; ++o) {
      const double g = dz[static_cast<std::size_t>(o)];
      grad[l.b_off + o] += g;
      const std::size_t wbase = l.w_off + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) {
        grad[wbase + i] += g * in[static_cast<std::size_t>(i)];
        din[static_cast<std::size_t>(i)] += g * params_[wbase + i];
      }
    }
    dh = std::move(din);
  }

  // dh now holds the gradient w.r.t. the flattened conv output
  for (std::size_t li = conv_.size(); li-- > 0;) {
    const auto& l = conv_[li];
    const auto& z = ws.conv_z[li];
    // gradient w.r.t. pre-activation z
    std::vector<double> dz(z.size(), 0.0);
    if (l.pool) {
      for (std::size_t oidx = 0; oidx < dh.size(); ++oidx) {
        const int zi = ws.pool_arg[li][oidx];
        dz[static_cast<std::size_t>(zi)] +=
            dh[oidx] * activate_grad(z[static_cast<std::size_t>(zi)]);
      }
    } else {
      for (std::size_t i = 0; i < dh.size(); ++i)
        dz[i] = dh[i] * activate_grad(z[i]);
    }

    const std::vector<double>& in =
        li == 0 ? ws.input : ws.conv_out[li - 1];
    const int in_stride = l.in_size * l.in_size;
    std::vector<double> din(static_cast<std::size_t>(l.in_ch) * in_stride,
                            0.0);
    for (int oc = 0; oc < l.out_ch; ++oc) {
      const std::size_t wbase =
          l.w_off + static_cast<std::size_t>(oc) * l.in_ch * l.k * l.k;
      for (int oy = 0; oy < l.conv_size; ++oy)
        for (int ox = 0; ox < l.conv_size; ++ox) {
          const double g =
              dz[static_cast<std::size_t>(oc) * l.conv_size * l.conv_size +
                 static_cast<std::size_t>(oy) * l.conv_size + ox];
          if (g == 0.0) continue;
          grad[l.b_off + oc] += g;
          for (int ic = 0; ic < l.in_ch; ++ic)
            for (int ky = 0; ky < l.k; ++ky)
              for (int kx = 0; kx < l.k; ++kx) {
                const int y = oy * l.stride - l.pad + ky;
                const int x = ox * l.stride - l.pad + kx;
                if (y < 0 || x < 0 || y >= l.in_size || x >= l.in_size)
                  continue;
                const std::size_t widx =
                    wbase + static_cast<std::size_t>(ic) * l.k * l.k +
                    static_cast<std::size_t>(ky) * l.k + kx;
                const std::size_t iidx =
                    static_cast<std::size_t>(ic) * in_stride +
                    static_cast<std::size_t>(y) * l.in_size + x;
                grad[widx] += g * in[iidx];
                din[iidx] += g * params_[widx];
              }
        }
    }
    dh = std::move(din);
  }
}

std::vector<double> Network::logits(const std::vector<double>& pixels) const {
  Workspace ws;
  forward(pixels, ws, 0.0, nullptr);
  // recover logits from probs is lossy; recompute from the last fc z
  return ws.fc_z.back();
}

int Network::predict(const std::vector<double>& pixels) const {
  const auto lg = logits(pixels);
  return static_cast<int>(std::max_element(lg.begin(), lg.end()) -
                          lg.begin());
}

double Network::accuracy_percent(const std::vector<Sample>& split) const {
  if (split.empty()) return 0.0;
  int correct = 0;
  for (const auto& s : split)
    if (predict(s.pixels) == s.label) ++correct;
  return 100.0 * correct / static_cast<double>(split.size());
}

double Network::train_batch(const std::vector<const Sample*>& batch,
                            double dropout_rate, Rng& dropout_rng,
                            std::vector<double>& grad, int* correct) {
  const double inv = 1.0 / static_cast<double>(batch.size());
  double loss = 0;
  std::vector<double> sample_grad(params_.size(), 0.0);
  Workspace ws;
  for (const Sample* s : batch) {
    forward(s->pixels, ws, dropout_rate, &dropout_rng);
    loss += -std::log(std::max(ws.probs[static_cast<std::size_t>(s->label)],
                               1e-300));
    if (correct) {
      const auto mx =
          std::max_element(ws.probs.begin(), ws.probs.end()) - ws.probs.begin();
      if (static_cast<int>(mx) == s->label) ++(*correct);
    }
    backward(ws, s->label, sample_grad);
  }
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad[i] += sample_grad[i] * inv;
  return loss * inv;
}

double Network::batch_loss(const std::vector<const Sample*>& batch) const {
  Workspace ws;
  double loss = 0;
  for (const Sample* s : batch) {
    forward(s->pixels, ws, 0.0, nullptr);
    loss += -std::log(std::max(ws.probs[static_cast<std::size_t>(s->label)],
                               1e-300));
  }
  return loss / static_cast<double>(batch.size());
}

}  // namespace hypermads
