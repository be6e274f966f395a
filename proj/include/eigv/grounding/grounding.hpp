// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "eigv/dims.hpp"
#include "eigv/numkit/parameters.hpp"
#include "eigv/numkit/rng.hpp"

namespace eigv::grounding {

using numkit::Binding;
using numkit::ParameterSet;
using numkit::RngStream;
using numkit::Var;

enum class GroundingMode {
  kHardStochastic,     // straight-through Gumbel-Softmax; training
  kHardDeterministic,  // per-clip argmax, ties go to causal; inference
  kSoft,               // soft Gumbel-Softmax relaxation
};

// Clip-wise probabilities of belonging to the causal and environment scene.
// Each is B x K and each row sums to one.
template <class T>
struct GroundingScores {
  Var<T> causal;
  Var<T> environment;
};

// Indicator I of shape (B*K) x 2: column 0 marks causal clips, column 1
// environment clips.
template <class T>
struct GroundingMask {
  Var<T> indicator;
  GroundingMode mode = GroundingMode::kHardDeterministic;

  // Hard assignment per clip row (true = causal).
  std::vector<bool> causal_clips() const;
};

template <class T>
struct ScenePartition {
  Var<T> causal;       // c_hat = I_0 * v, (B*K) x d
  Var<T> environment;  // e_hat = I_1 * v
  GroundingMask<T> mask;
  GroundingScores<T> scores;
};

inline constexpr double kLogFloor = 1e-12;

template <class T>
class GroundingIndicator {
 public:
  explicit GroundingIndicator(const ModelDims& dims) : dims_(dims) {}

  void init(ParameterSet<T>& params, RngStream& rng) const;

  // p_c = softmax_K(FC1(v) . FC2(q)), p_e = softmax_K(FC3(v) . FC4(q)).
  GroundingScores<T> attention_scores(const Binding<T>& params, Var<T> video, Var<T> question,
                                      std::size_t clips) const;

  // Splits v into causal and environment estimates. Only the stochastic and
  // soft modes consume `rng`; it may be null for the deterministic mode.
  ScenePartition<T> ground(const Binding<T>& params, Var<T> video, Var<T> question,
                           std::size_t clips, GroundingMode mode, RngStream* rng,
                           double temperature = 1.0) const;

 private:
  ModelDims dims_;
};

// Applies a committed indicator (constant or differentiable) to v.
template <class T>
ScenePartition<T> apply_mask(Var<T> video, GroundingMask<T> mask, GroundingScores<T> scores);

}  // namespace eigv::grounding
