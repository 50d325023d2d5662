/*
 * Copyright 2026 The frs-select Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <numeric>

#include "frs/tree.hpp"

namespace frs {

struct MlpParams {
  std::size_t hidden = 0;  // 0 = ceil((inputs + classes) / 2)
  double learning_rate = 0.3;
  double momentum = 0.2;
  std::size_t epochs = 500;
  double init_range = 0.05;
};

/// One hidden layer, sigmoid units throughout, one output per class,
/// squared-error loss. Weights live in one flat vector: the hidden layer
/// rows (inputs then bias) followed by the output layer rows.
class Mlp {
 public:
  Mlp() = default;

  Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs)
      : in_(inputs), hid_(hidden), out_(outputs), w_((inputs + 1) * hidden + (hidden + 1) * outputs, 0.0) {}

  static std::size_t default_hidden(std::size_t inputs, std::size_t classes) {
    return std::max<std::size_t>(1, (inputs + classes + 1) / 2);
  }

  void randomize(Rng& rng, double range) {
    for (auto& w : w_) w = rng.uniform(-range, range);
  }

  static Mlp fit(const TrainingSet& ts, const MlpParams& p, std::uint64_t seed) {
    if (p.epochs == 0 || !(p.learning_rate > 0.0)) throw Error(Errc::InvalidArgument, "bad mlp schedule");
    Mlp net(ts.f, p.hidden ? p.hidden : default_hidden(ts.f, ts.classes), ts.classes);
    Rng rng(seed);
    net.randomize(rng, p.init_range);
    std::vector<double> velocity(net.w_.size(), 0.0), grad(net.w_.size());
    std::vector<std::size_t> order(ts.n);
    std::iota(order.begin(), order.end(), 0);
    Scratch s;
    for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
      rng.shuffle(order);
      for (auto i : order) {
        net.backprop(ts.row(i), ts.y[i], grad, s);
        for (std::size_t k = 0; k < net.w_.size(); ++k) {
          velocity[k] = p.momentum * velocity[k] - p.learning_rate * grad[k];
          net.w_[k] += velocity[k];
        }
      }
    }
    for (double w : net.w_)
      if (!std::isfinite(w)) throw Error(Errc::NonFiniteValue, "mlp weights diverged");
    return net;
  }

  /// Output activations for one input row.
  std::vector<double> forward(std::span<const double> x) const {
    Scratch s;
    run(x, s);
    return s.o;
  }

  std::size_t predict(std::span<const double> x) const { return argmax_first(forward(x)); }

  /// 0.5 * sum over outputs of (o - t)^2 with one-hot target t.
  double loss(std::span<const double> x, std::size_t label) const {
    auto o = forward(x);
    double l = 0.0;
    for (std::size_t k = 0; k < out_; ++k) {
      double d = o[k] - (k == label ? 1.0 : 0.0);
      l += 0.5 * d * d;
    }
    return l;
  }

  /// Gradient of loss(x, label) with respect to parameters().
  std::vector<double> gradient(std::span<const double> x, std::size_t label) const {
    std::vector<double> g(w_.size());
    Scratch s;
    backprop(x, label, g, s);
    return g;
  }

  std::vector<double>& parameters() noexcept { return w_; }
  const std::vector<double>& parameters() const noexcept { return w_; }
  std::size_t inputs() const noexcept { return in_; }
  std::size_t hidden() const noexcept { return hid_; }
  std::size_t outputs() const noexcept { return out_; }

  nlohmann::json to_json() const { return {{"inputs", in_}, {"hidden", hid_}, {"outputs", out_}, {"weights", w_}}; }

  static Mlp from_json(const nlohmann::json& j) {
    Mlp net(j.at("inputs").get<std::size_t>(), j.at("hidden").get<std::size_t>(), j.at("outputs").get<std::size_t>());
    auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != net.w_.size()) throw Error(Errc::MalformedDocument, "mlp weight count mismatch");
    net.w_ = std::move(w);
    return net;
  }

 private:
  struct Scratch {
    std::vector<double> h, o, dh, dout;
  };

  static double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

  std::size_t out_offset() const { return (in_ + 1) * hid_; }

  void run(std::span<const double> x, Scratch& s) const {
    if (x.size() != in_) throw Error(Errc::ArityMismatch, "mlp input arity mismatch");
    s.h.resize(hid_);
    s.o.resize(out_);
    for (std::size_t h = 0; h < hid_; ++h) {
      const double* w = &w_[h * (in_ + 1)];
      double z = w[in_];
      for (std::size_t i = 0; i < in_; ++i) z += w[i] * x[i];
      s.h[h] = sigmoid(z);
    }
    for (std::size_t k = 0; k < out_; ++k) {
      const double* w = &w_[out_offset() + k * (hid_ + 1)];
      double z = w[hid_];
      for (std::size_t h = 0; h < hid_; ++h) z += w[h] * s.h[h];
      s.o[k] = sigmoid(z);
    }
  }

  void backprop(std::span<const double> x, std::size_t label, std::vector<double>& g, Scratch& s) const {
    run(x, s);
    s.dout.resize(out_);
    s.dh.assign(hid_, 0.0);
    const std::size_t oo = out_offset();
    for (std::size_t k = 0; k < out_; ++k) {
      double o = s.o[k];
      double d = (o - (k == label ? 1.0 : 0.0)) * o * (1.0 - o);
      s.dout[k] = d;
      const double* w = &w_[oo + k * (hid_ + 1)];
      double* gk = &g[oo + k * (hid_ + 1)];
      for (std::size_t h = 0; h < hid_; ++h) {
        gk[h] = d * s.h[h];
        s.dh[h] += d * w[h];
      }
      gk[hid_] = d;
    }
    for (std::size_t h = 0; h < hid_; ++h) {
      double d = s.dh[h] * s.h[h] * (1.0 - s.h[h]);
      double* gh = &g[h * (in_ + 1)];
      for (std::size_t i = 0; i < in_; ++i) gh[i] = d * x[i];
      gh[in_] = d;
    }
  }

  std::size_t in_ = 0, hid_ = 0, out_ = 0;
  std::vector<double> w_;
};

}  // namespace frs
