// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "eigv/numkit/rng.hpp"
#include "eigv/numkit/tape.hpp"

namespace eigv::numkit {

// Gamma(shape, 1) by Marsaglia-Tsang; shapes below one use the
// U^(1/shape) boost.
double sample_gamma(double shape, RngStream& rng);

// Beta(alpha, alpha) as the ratio X / (X + Y) of two gamma draws.
double sample_beta_symmetric(double alpha, RngStream& rng);

double sample_uniform01(RngStream& rng);

double sample_gumbel(RngStream& rng);

enum class SelectionMode { kHard, kSoft };

// Row-wise Gumbel-Softmax over logits (R x C). Soft mode returns
// softmax((logits + G) / temperature). Hard mode returns the one-hot argmax of
// that softmax (lowest index wins ties) and backpropagates through the soft
// values (straight-through).
template <class T>
Var<T> gumbel_softmax_rows(Var<T> logits, double temperature, SelectionMode mode,
                           RngStream& rng);

}  // namespace eigv::numkit
