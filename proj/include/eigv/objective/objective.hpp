// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "eigv/numkit/tape.hpp"

namespace eigv::objective {

using numkit::Var;

inline constexpr double kDefaultBeta = 0.75;

struct InfoNceOptions {
  double temperature = 1.0;
  // L2-normalize representations before scoring (cosine similarity).
  bool normalize = false;
};

// Mean over rows of -log(exp(s+/t) / (exp(s+/t) + sum_n exp(s_n/t))), with
// s the dot product of the anchor row with the positive / negative rows.
// anchor, positive and each negative are B x d.
template <class T>
Var<T> info_nce(Var<T> anchor, Var<T> positive, std::span<const Var<T>> negatives,
                const InfoNceOptions& options = {});

// Mean over rows of -sum_i target_i * log softmax(logits)_i. Each target row
// must be a probability distribution.
template <class T>
Var<T> soft_cross_entropy(Var<T> logits, Var<T> target);

template <class T>
struct LossBreakdown {
  Var<T> erm;
  Var<T> cl;
  Var<T> total;
  double beta = kDefaultBeta;
};

// total = erm + beta * cl.
template <class T>
LossBreakdown<T> eigv_loss(Var<T> erm, Var<T> cl, double beta = kDefaultBeta);

}  // namespace eigv::objective
