// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/numkit/adam.hpp"

#include <cmath>

namespace eigv::numkit {

template <class T>
AdamUpdate<T> adam_step(const Tensor<T>& param, const Tensor<T>& grad,
                        const AdamState<T>& state, const AdamOptions& options) {
  if (param.shape() != grad.shape()) {
    throw Error(Errc::kShapeMismatch, "adam_step: param " + shape_string(param.shape()) +
                                          " vs grad " + shape_string(grad.shape()));
  }
  if (!(options.lr > 0.0)) {
    throw Error(Errc::kInvalidArgument, "adam_step: learning rate must be positive");
  }
  AdamUpdate<T> out{param, state};
  if (state.step == 0 && state.first_moment.size() == 0) {
    out.state = AdamState<T>::zeros_like(param);
  }
  if (out.state.first_moment.shape() != param.shape() ||
      out.state.second_moment.shape() != param.shape()) {
    throw Error(Errc::kShapeMismatch, "adam_step: moment shape differs from param " +
                                          shape_string(param.shape()));
  }
  out.state.step = state.step + 1;
  const double t = static_cast<double>(out.state.step);
  const double b1 = options.beta1, b2 = options.beta2;
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);

  auto& m = out.state.first_moment;
  auto& v = out.state.second_moment;
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double mi = b1 * m[i] + (1.0 - b1) * g;
    const double vi = b2 * v[i] + (1.0 - b2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    const double m_hat = mi / correction1;
    const double v_hat = vi / correction2;
    out.param[i] = static_cast<T>(param[i] - options.lr * m_hat / (std::sqrt(v_hat) + options.eps));
  }
  return out;
}

template AdamUpdate<float> adam_step(const Tensor<float>&, const Tensor<float>&,
                                     const AdamState<float>&, const AdamOptions&);
template AdamUpdate<double> adam_step(const Tensor<double>&, const Tensor<double>&,
                                      const AdamState<double>&, const AdamOptions&);

}  // namespace eigv::numkit
