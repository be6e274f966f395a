// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "eigv/numkit/rng.hpp"
#include "eigv/numkit/tensor.hpp"

namespace eigv::numkit {

// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for a fan_in x fan_out weight.
template <class T>
Tensor<T> uniform_fan_in(std::size_t fan_in, std::size_t fan_out, RngStream& rng) {
  Tensor<T> w({fan_in, fan_out});
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto& v : w.values()) v = static_cast<T>((2.0 * rng.uniform01() - 1.0) * bound);
  return w;
}

}  // namespace eigv::numkit
