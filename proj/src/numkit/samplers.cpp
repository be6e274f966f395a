// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/numkit/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace eigv::numkit {

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) {
    throw Error(Errc::kInvalidArgument, "gamma shape must be positive");
  }
  if (shape < 1.0) {
    const double u = rng.uniform_open();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta_symmetric(double alpha, RngStream& rng) {
  if (!(alpha > 0.0)) {
    throw Error(Errc::kInvalidArgument,
                "Beta parameter alpha must be positive, got " + std::to_string(alpha));
  }
  const double x = sample_gamma(alpha, rng);
  const double y = sample_gamma(alpha, rng);
  const double total = x + y;
  if (total <= 0.0) return 0.5;
  return std::clamp(x / total, 0.0, 1.0);
}

double sample_uniform01(RngStream& rng) { return rng.uniform01(); }

double sample_gumbel(RngStream& rng) {
  return -std::log(-std::log(rng.uniform_open()));
}

template <class T>
Var<T> gumbel_softmax_rows(Var<T> logits, double temperature, SelectionMode mode,
                           RngStream& rng) {
  if (!(temperature > 0.0)) {
    throw Error(Errc::kInvalidArgument, "Gumbel temperature must be positive, got " +
                                            std::to_string(temperature));
  }
  const Tensor<T>& lv = logits.value();
  if (lv.rank() != 2) {
    throw Error(Errc::kShapeMismatch, "gumbel_softmax_rows expects a matrix");
  }
  const std::size_t rows = lv.rows(), cols = lv.cols();
  const T inv_tau = static_cast<T>(1.0 / temperature);

  Tensor<T> soft(lv.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    T mx = -std::numeric_limits<T>::infinity();
    for (std::size_t c = 0; c < cols; ++c) {
      const T z = (lv[r * cols + c] + static_cast<T>(sample_gumbel(rng))) * inv_tau;
      soft[r * cols + c] = z;
      mx = std::max(mx, z);
    }
    T total{0};
    for (std::size_t c = 0; c < cols; ++c) {
      soft[r * cols + c] = std::exp(soft[r * cols + c] - mx);
      total += soft[r * cols + c];
    }
    for (std::size_t c = 0; c < cols; ++c) soft[r * cols + c] /= total;
  }

  Tensor<T> out = soft;
  if (mode == SelectionMode::kHard) {
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = out.row(r);
      const auto best = static_cast<std::size_t>(
          std::max_element(row.begin(), row.end()) - row.begin());
      for (std::size_t c = 0; c < cols; ++c) row[c] = c == best ? T{1} : T{0};
    }
  }

  return logits.tape().record(
      std::move(out), {logits.id()},
      [soft = std::move(soft), inv_tau, rows, cols](const Tensor<T>& g,
                                                     std::span<Tensor<T>*> in) {
        for (std::size_t r = 0; r < rows; ++r) {
          T dot{0};
          for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * soft[r * cols + c];
          for (std::size_t c = 0; c < cols; ++c)
            (*in[0])[r * cols + c] += inv_tau * soft[r * cols + c] * (g[r * cols + c] - dot);
        }
      },
      "gumbel_softmax_rows");
}

template Var<float> gumbel_softmax_rows(Var<float>, double, SelectionMode, RngStream&);
template Var<double> gumbel_softmax_rows(Var<double>, double, SelectionMode, RngStream&);

}  // namespace eigv::numkit
