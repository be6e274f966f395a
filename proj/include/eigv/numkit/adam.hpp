// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "eigv/numkit/tensor.hpp"

namespace eigv::numkit {

struct AdamOptions {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <class T>
struct AdamState {
  Tensor<T> first_moment;
  Tensor<T> second_moment;
  std::uint64_t step = 0;

  static AdamState zeros_like(const Tensor<T>& param) {
    return AdamState{Tensor<T>::zeros(param.shape()), Tensor<T>::zeros(param.shape()), 0};
  }
};

template <class T>
struct AdamUpdate {
  Tensor<T> param;
  AdamState<T> state;
};

// One bias-corrected Adam update. An empty state (default constructed) is
// treated as zero moments at step 0.
template <class T>
AdamUpdate<T> adam_step(const Tensor<T>& param, const Tensor<T>& grad,
                        const AdamState<T>& state, const AdamOptions& options);

}  // namespace eigv::numkit
